#include "smod/polynomial.hpp"

#include "smod/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace smod {

using Complex = std::complex<double>;

Polynomial trimmed(const Polynomial &p, double tol) {
  Polynomial out = p;
  while (!out.empty() && std::abs(out.back()) <= tol)
    out.pop_back();
  return out;
}

int degree(const Polynomial &p) { return static_cast<int>(trimmed(p).size()) - 1; }

Complex evaluate(const Polynomial &p, Complex x) {
  Complex acc{};
  for (auto it = p.rbegin(); it != p.rend(); ++it)
    acc = acc * x + *it;
  return acc;
}

Polynomial operator-(const Polynomial &a, const Polynomial &b) {
  Polynomial out(std::max(a.size(), b.size()), Complex{});
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i)
    out[i] -= b[i];
  return out;
}

Polynomial operator*(Complex k, const Polynomial &a) {
  Polynomial out = a;
  for (auto &c : out)
    c *= k;
  return out;
}

namespace {

Polynomial derivative(const Polynomial &p) {
  Polynomial d;
  for (std::size_t i = 1; i < p.size(); ++i)
    d.push_back(static_cast<double>(i) * p[i]);
  return d;
}

} // namespace

std::vector<Complex> roots(const Polynomial &input) {
  Polynomial p = trimmed(input);
  const int n = static_cast<int>(p.size()) - 1;
  if (n < 0)
    throw DomainError("roots of the zero polynomial");
  if (n == 0)
    return {};
  Complex lead = p.back();
  for (auto &c : p)
    c /= lead;
  Polynomial dp = derivative(p);

  // Cauchy bound for the initial circle.
  double bound = 0.0;
  for (int i = 0; i < n; ++i)
    bound = std::max(bound, std::abs(p[static_cast<std::size_t>(i)]));
  double radius = 1.0 + bound;
  std::vector<Complex> z(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    double angle = 2.0 * std::numbers::pi * k / n + 0.4;
    z[static_cast<std::size_t>(k)] = std::polar(0.5 * radius, angle);
  }

  for (int iter = 0; iter < 500; ++iter) {
    double biggest = 0.0;
    for (int k = 0; k < n; ++k) {
      auto &zk = z[static_cast<std::size_t>(k)];
      Complex pv = evaluate(p, zk);
      if (std::abs(pv) == 0.0)
        continue;
      Complex ratio = pv / evaluate(dp, zk);
      Complex repulsion{};
      for (int j = 0; j < n; ++j)
        if (j != k)
          repulsion += 1.0 / (zk - z[static_cast<std::size_t>(j)]);
      Complex step = ratio / (1.0 - ratio * repulsion);
      zk -= step;
      biggest = std::max(biggest, std::abs(step) / (1.0 + std::abs(zk)));
    }
    if (biggest < 1e-15)
      break;
  }
  return z;
}

std::vector<RootCluster> clustered_roots(const Polynomial &p, double radius) {
  std::vector<RootCluster> out;
  for (Complex r : roots(p)) {
    bool merged = false;
    for (auto &c : out) {
      if (std::abs(c.centre - r) <= radius * (1.0 + std::abs(r))) {
        c.centre = (c.centre * static_cast<double>(c.multiplicity) + r) /
                   static_cast<double>(c.multiplicity + 1);
        ++c.multiplicity;
        merged = true;
        break;
      }
    }
    if (!merged)
      out.push_back({r, 1});
  }
  return out;
}

} // namespace smod
