#include "smod/degree.hpp"

#include <cmath>
#include <ostream>

namespace smod {

DegreeComparison compare(const Degree &a, const Degree &b, double eps) {
  Degree d = a - b;
  if (std::abs(d.real) <= eps) {
    if (d.rational != Rational(0))
      return {d.rational > Rational(0) ? 1 : -1, false};
    return {0, d.real != 0.0};
  }
  double total = d.value();
  if (std::abs(total) <= eps)
    return {0, true};
  return {total > 0 ? 1 : -1, false};
}

bool congruent_mod_z(const Degree &a, const Degree &b, double eps) {
  Degree d = a - b;
  return is_integer(d.rational) && std::abs(d.real - std::round(d.real)) <= eps;
}

std::ostream &operator<<(std::ostream &os, const Degree &d) {
  os << to_string(d.rational);
  if (d.real != 0.0)
    os << (d.real < 0 ? " - " : " + ") << std::abs(d.real);
  return os;
}

} // namespace smod
