#ifndef SMOD_POLYNOMIAL_HPP
#define SMOD_POLYNOMIAL_HPP

#include <complex>
#include <vector>

namespace smod {

/// Coefficients, constant term first.
using Polynomial = std::vector<std::complex<double>>;

/// Drops (numerically) zero leading coefficients; the zero polynomial becomes {}.
Polynomial trimmed(const Polynomial &p, double tol = 0.0);

/// -1 for the zero polynomial.
int degree(const Polynomial &p);

std::complex<double> evaluate(const Polynomial &p, std::complex<double> x);

Polynomial operator-(const Polynomial &a, const Polynomial &b);
Polynomial operator*(std::complex<double> k, const Polynomial &a);

/// All complex roots with multiplicity (Aberth–Ehrlich, then Newton polish).
std::vector<std::complex<double>> roots(const Polynomial &p);

/// Roots merged into clusters: {centre, multiplicity}.
struct RootCluster {
  std::complex<double> centre;
  int multiplicity = 1;
};
std::vector<RootCluster> clustered_roots(const Polynomial &p, double radius = 1e-5);

} // namespace smod

#endif
