#ifndef SMOD_SURFACE_HPP
#define SMOD_SURFACE_HPP

#include "smod/degree.hpp"
#include "smod/torus.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace smod {

struct MultipleFibre {
  int multiplicity = 2;
  BasePoint base_point;
};

/// Non-Kähler elliptic surface X -> B, a quotient Theta^* / <tau> possibly
/// carrying multiple fibres.
class SurfaceModel {
public:
  SurfaceModel(int base_genus, std::optional<EllipticCurve> base_curve, EllipticCurve fibre,
               int theta_degree, Complex tau, std::vector<MultipleFibre> multiple_fibres = {});

  int base_genus() const { return base_genus_; }
  const std::optional<EllipticCurve> &base_curve() const { return base_curve_; }
  const EllipticCurve &fibre() const { return fibre_; }
  int theta_degree() const { return theta_degree_; }
  Complex tau() const { return tau_; }
  const std::vector<MultipleFibre> &multiple_fibres() const { return multiple_fibres_; }
  std::size_t fibre_count() const { return multiple_fibres_.size(); }

  /// Index of the multiple fibre sitting over b, if any.
  std::optional<std::size_t> multiple_fibre_at(const BasePoint &b) const;

private:
  int base_genus_;
  std::optional<EllipticCurve> base_curve_;
  EllipticCurve fibre_;
  int theta_degree_;
  Complex tau_;
  std::vector<MultipleFibre> multiple_fibres_;
};

/// L = H (x) L_alpha (x) O_X(sum a_i T_i), with the spectral section it induces.
struct LineBundleModel {
  std::int64_t base_chern = 0;
  Complex alpha{1.0, 0.0};
  std::vector<std::int64_t> fibre_coeffs;
  std::optional<Section> section;

  /// Tensor product: adds Chern classes and fibre coefficients, multiplies
  /// the multipliers, adds spectral sections when both are known.
  LineBundleModel tensor(const LineBundleModel &other) const;
};

/// The trivial bundle on X.
LineBundleModel trivial_bundle(const SurfaceModel &x);

Degree degree(const LineBundleModel &line, const SurfaceModel &x);

/// deg omega_{X/B} = r - sum 1/m_i.
Degree relative_dualising_degree(const SurfaceModel &x);

enum class PoissonVerdict { Symplectic, DegeneratePoisson, None };

PoissonVerdict poisson_exists(const SurfaceModel &x);

std::string_view to_string(PoissonVerdict v);

} // namespace smod

#endif
