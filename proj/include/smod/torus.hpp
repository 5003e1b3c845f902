#ifndef SMOD_TORUS_HPP
#define SMOD_TORUS_HPP

#include <complex>
#include <iosfwd>
#include <variant>

namespace smod {

using Complex = std::complex<double>;

/// Single source of geometric equality for points on tori and on P^1.
inline constexpr double kPointTolerance = 1e-9;

/// C / (Z + Z*tau), Im tau > 0.
class EllipticCurve {
public:
  explicit EllipticCurve(Complex tau = Complex(0.0, 1.0));

  Complex tau() const { return tau_; }

  /// Real coordinates (s, t) with z = s + t*tau.
  std::pair<double, double> coordinates(Complex z) const;
  Complex point(double s, double t) const { return s + t * tau_; }

  /// Is z in the lattice up to tol (measured in coordinates)?
  bool is_lattice_point(Complex z, double tol = kPointTolerance) const;

  friend bool operator==(const EllipticCurve &a, const EllipticCurve &b) {
    return a.tau_ == b.tau_;
  }

private:
  Complex tau_;
};

/// A point of C/Lambda stored by its coordinates in [0,1)^2.
class TorusPoint {
public:
  TorusPoint() = default;
  TorusPoint(double s, double t, const EllipticCurve &curve);

  double s() const { return s_; }
  double t() const { return t_; }
  Complex z() const { return curve_.point(s_, t_); }
  const EllipticCurve &curve() const { return curve_; }

  TorusPoint operator+(const TorusPoint &o) const;
  TorusPoint operator-(const TorusPoint &o) const;
  TorusPoint operator-() const;
  /// Representative of z/2 taken from the stored fundamental-domain lift.
  TorusPoint half() const;

private:
  double s_ = 0.0;
  double t_ = 0.0;
  EllipticCurve curve_;
};

TorusPoint torus_reduce(Complex z, const EllipticCurve &curve);

/// Length of the shortest representative of a - b.
double torus_distance(const TorusPoint &a, const TorusPoint &b);

inline bool same_point(const TorusPoint &a, const TorusPoint &b, double tol = kPointTolerance) {
  return torus_distance(a, b) <= tol;
}

/// A point of the Riemann sphere. Also used for points of the base curve:
/// P^1 for genus 0, the complex coordinate of C/Lambda_B for genus 1, and
/// an opaque label for higher genus.
struct P1Point {
  Complex value{};
  bool infinite = false;

  static P1Point infinity() { return P1Point{Complex{}, true}; }
  static P1Point finite(Complex z) { return P1Point{z, false}; }
};

/// Chordal distance on the sphere; infinity is handled exactly.
double chordal_distance(const P1Point &a, const P1Point &b);

inline bool same_point(const P1Point &a, const P1Point &b, double tol = kPointTolerance) {
  return chordal_distance(a, b) <= tol;
}

using BasePoint = P1Point;

struct ConstantSection {
  TorusPoint lambda;
};

/// z -> u*z + c on a genus-1 base; requires u*Lambda_B inside Lambda_{T*}.
struct AffineSection {
  Complex u;
  TorusPoint c;
};

/// Section of J(X) = B x T* over B.
using Section = std::variant<ConstantSection, AffineSection>;

TorusPoint evaluate(const Section &section, const BasePoint &b);

/// Pointwise sum and difference in the group T*; constant + constant stays constant.
Section add(const Section &a, const Section &b);
Section subtract(const Section &a, const Section &b);

/// Same map B -> T* (slopes equal to tolerance, offsets equal mod the lattice).
bool same_section(const Section &a, const Section &b, double tol = kPointTolerance);

std::ostream &operator<<(std::ostream &os, const TorusPoint &p);
std::ostream &operator<<(std::ostream &os, const P1Point &p);

} // namespace smod

#endif
