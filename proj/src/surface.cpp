#include "smod/surface.hpp"

#include "smod/errors.hpp"

#include <cmath>
#include <string>

namespace smod {

SurfaceModel::SurfaceModel(int base_genus, std::optional<EllipticCurve> base_curve,
                           EllipticCurve fibre, int theta_degree, Complex tau,
                           std::vector<MultipleFibre> multiple_fibres)
    : base_genus_(base_genus), base_curve_(base_curve), fibre_(fibre),
      theta_degree_(theta_degree), tau_(tau), multiple_fibres_(std::move(multiple_fibres)) {
  if (base_genus_ < 0)
    throw ModelError("base genus must be non-negative");
  if ((base_genus_ == 1) != base_curve_.has_value())
    throw ModelError("a base curve lattice is required exactly when the base genus is 1");
  if (!(std::abs(tau_) > 1.0))
    throw ModelError("surface requires |tau| > 1");
  if (theta_degree_ < 1)
    throw ModelError("theta degree must be at least 1");
  for (std::size_t i = 0; i < multiple_fibres_.size(); ++i) {
    if (multiple_fibres_[i].multiplicity < 2)
      throw ModelError("multiple fibre multiplicities must be at least 2");
    for (std::size_t j = 0; j < i; ++j)
      if (same_point(multiple_fibres_[i].base_point, multiple_fibres_[j].base_point))
        throw ModelError("multiple fibres must lie over distinct base points");
  }
}

std::optional<std::size_t> SurfaceModel::multiple_fibre_at(const BasePoint &b) const {
  for (std::size_t i = 0; i < multiple_fibres_.size(); ++i)
    if (same_point(multiple_fibres_[i].base_point, b))
      return i;
  return std::nullopt;
}

LineBundleModel LineBundleModel::tensor(const LineBundleModel &other) const {
  if (fibre_coeffs.size() != other.fibre_coeffs.size())
    throw ModelError("tensor of line bundles on different surfaces");
  LineBundleModel out;
  out.base_chern = base_chern + other.base_chern;
  out.alpha = alpha * other.alpha;
  out.fibre_coeffs = fibre_coeffs;
  for (std::size_t i = 0; i < fibre_coeffs.size(); ++i)
    out.fibre_coeffs[i] += other.fibre_coeffs[i];
  if (section && other.section)
    out.section = add(*section, *other.section);
  return out;
}

LineBundleModel trivial_bundle(const SurfaceModel &x) {
  LineBundleModel l;
  l.fibre_coeffs.assign(x.fibre_count(), 0);
  l.section = ConstantSection{TorusPoint(0.0, 0.0, x.fibre())};
  return l;
}

Degree degree(const LineBundleModel &line, const SurfaceModel &x) {
  if (std::abs(line.alpha) == 0.0)
    throw DomainError("line bundle multiplier alpha must be nonzero");
  if (line.fibre_coeffs.size() != x.fibre_count())
    throw ModelError("expected " + std::to_string(x.fibre_count()) +
                     " fibre coefficients, got " + std::to_string(line.fibre_coeffs.size()));
  Rational r(line.base_chern);
  for (std::size_t i = 0; i < line.fibre_coeffs.size(); ++i)
    r += Rational(line.fibre_coeffs[i], x.multiple_fibres()[i].multiplicity);
  double real = 0.0;
  double log_alpha = std::log(std::abs(line.alpha));
  if (log_alpha != 0.0)
    real = -(x.theta_degree() / std::log(std::abs(x.tau()))) * log_alpha;
  return Degree(r, real);
}

Degree relative_dualising_degree(const SurfaceModel &x) {
  Rational r(static_cast<std::int64_t>(x.fibre_count()));
  for (const auto &f : x.multiple_fibres())
    r -= Rational(1, f.multiplicity);
  return Degree(r);
}

PoissonVerdict poisson_exists(const SurfaceModel &x) {
  if (x.fibre_count() != 0)
    return PoissonVerdict::None;
  if (x.base_genus() == 1)
    return PoissonVerdict::Symplectic;
  if (x.base_genus() == 0)
    return PoissonVerdict::DegeneratePoisson;
  return PoissonVerdict::None;
}

std::string_view to_string(PoissonVerdict v) {
  switch (v) {
  case PoissonVerdict::Symplectic:
    return "symplectic";
  case PoissonVerdict::DegeneratePoisson:
    return "degenerate";
  case PoissonVerdict::None:
    break;
  }
  return "none";
}

} // namespace smod
