#ifndef SMOD_DEGREE_HPP
#define SMOD_DEGREE_HPP

#include "smod/rational.hpp"

#include <iosfwd>

namespace smod {

inline constexpr double kDefaultEpsilon = 1e-9;

/// Gauduchon degree of a line bundle: an exact rational part plus a real
/// part coming from the ln|alpha| term. Degrees on non-Kähler surfaces take
/// values in a continuum, but congruence mod Z must stay exact, hence the split.
struct Degree {
  Rational rational{0};
  double real = 0.0;

  Degree() = default;
  Degree(Rational r, double x = 0.0) : rational(r), real(x) {}

  double value() const { return to_double(rational) + real; }

  Degree &operator+=(const Degree &o) {
    rational += o.rational;
    real += o.real;
    return *this;
  }
  Degree &operator-=(const Degree &o) {
    rational -= o.rational;
    real -= o.real;
    return *this;
  }
  friend Degree operator+(Degree a, const Degree &b) { return a += b; }
  friend Degree operator-(Degree a, const Degree &b) { return a -= b; }
  friend Degree operator-(const Degree &a) { return Degree(-a.rational, -a.real); }
  friend Degree operator*(const Rational &k, const Degree &a) {
    return Degree(k * a.rational, to_double(k) * a.real);
  }
  Degree half() const { return Rational(1, 2) * *this; }
};

struct DegreeComparison {
  int sign = 0;        ///< -1, 0, +1 for a < b, a ~ b, a > b
  bool margin = false; ///< decided within epsilon on the real part
};

/// Exact on the rational part; epsilon applies only when real parts are involved.
DegreeComparison compare(const Degree &a, const Degree &b, double eps = kDefaultEpsilon);

inline bool strictly_less(const Degree &a, const Degree &b, double eps = kDefaultEpsilon) {
  return compare(a, b, eps).sign < 0;
}

/// (a - b) has integral rational part and real part within eps of an integer.
bool congruent_mod_z(const Degree &a, const Degree &b, double eps = kDefaultEpsilon);

std::ostream &operator<<(std::ostream &os, const Degree &d);

} // namespace smod

#endif
