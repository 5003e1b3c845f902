#ifndef SMOD_RATIONAL_HPP
#define SMOD_RATIONAL_HPP

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace smod {

/// Compare only against other Rationals: mixed comparisons with plain
/// integers recurse forever in Boost 1.74 under C++20 operator rewriting.
using Rational = boost::rational<std::int64_t>;

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational &r);

/// Accepts "p", "p/q" and "-p/q" (whitespace not allowed).
Rational parse_rational(std::string_view text);

inline double to_double(const Rational &r) {
  return boost::rational_cast<double>(r);
}

inline bool is_integer(const Rational &r) { return r.denominator() == 1; }

/// Largest integer not exceeding r.
std::int64_t floor(const Rational &r);

} // namespace smod

#endif
