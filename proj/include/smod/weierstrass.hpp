#ifndef SMOD_WEIERSTRASS_HPP
#define SMOD_WEIERSTRASS_HPP

#include "smod/torus.hpp"

#include <array>
#include <vector>

namespace smod {

inline constexpr int kDefaultWpTerms = 200;

/// Weierstrass p-function of the lattice Z + Z*tau, evaluated by direct
/// summation over the box |m|,|n| <= terms (in a Gauss-reduced basis), with
/// the truncated tail restored from the Eisenstein series G_4 ... G_16.
///
/// Evenness holds term by term because the box is symmetric. Accuracy is
/// limited by rounding (about 1e-13 relative) for any terms >= 8; larger
/// boxes cost time without improving the result.
class WeierstrassP {
public:
  explicit WeierstrassP(const EllipticCurve &lattice, int terms = kDefaultWpTerms);

  struct Value {
    P1Point p;     ///< p(z), infinity at lattice points
    P1Point prime; ///< p'(z), infinity at lattice points
  };

  Value evaluate(Complex z) const;
  P1Point value(Complex z) const { return evaluate(z).p; }
  P1Point derivative(Complex z) const { return evaluate(z).prime; }

  const EllipticCurve &lattice() const { return lattice_; }
  int terms() const { return terms_; }

  /// Invariants g2 = 60 G_4, g3 = 140 G_6 from the q-expansions.
  Complex g2() const { return g2_; }
  Complex g3() const { return g3_; }

  /// Eisenstein series G_{2k} of the full lattice, k >= 2.
  Complex eisenstein(int k) const;

  /// e1 = p(1/2), e2 = p(tau/2), e3 = p((1+tau)/2).
  std::array<Complex, 3> half_period_values() const;

  /// Fold z into the parallelogram centred at 0 of the reduced basis.
  Complex centre(Complex z) const;

private:
  EllipticCurve lattice_;
  int terms_;
  Complex omega1_;
  Complex omega2_;
  Complex g2_;
  Complex g3_;
  std::vector<Complex> laurent_;   ///< c_k, p = z^-2 + sum c_k z^(2k-2)
  std::vector<Complex> tail_;      ///< (2k-1)(G_2k - G_2k^box)
  std::vector<Complex> points_;    ///< nonzero box points
  std::vector<Complex> inv_sq_;    ///< 1 / w^2
};

/// Solves p(u) = w by damped Newton, seeded from a 64x64 table of the
/// fundamental domain. The table is built once per instance and read-only after.
class WeierstrassInverse {
public:
  explicit WeierstrassInverse(const EllipticCurve &lattice, int terms = kDefaultWpTerms);

  const WeierstrassP &p() const { return p_; }

  /// One solution u (the other is -u). Throws NoConvergence with diagnostics.
  Complex solve(const P1Point &w) const;

  /// Newton started from `seed`; falls back to the table when that fails.
  Complex solve_near(const P1Point &w, Complex seed) const;

private:
  bool newton(const P1Point &w, Complex &u, double &residual) const;

  WeierstrassP p_;
  static constexpr int kGrid = 64;
  std::vector<Complex> grid_u_;
  std::vector<P1Point> grid_p_;
};

} // namespace smod

#endif
