#ifndef SMOD_MODULI_HPP
#define SMOD_MODULI_HPP

#include "smod/bundles.hpp"
#include "smod/jacobian.hpp"
#include "smod/nslattice.hpp"
#include "smod/stability.hpp"
#include "smod/surface.hpp"
#include "smod/weierstrass.hpp"

#include <optional>
#include <string>
#include <vector>

namespace smod {

/// Moduli space M_{delta,c2}: delta has Chern class in c1 + 2NS of maximal
/// self-intersection.
struct ModuliContext {
  SurfaceModel surface;
  NSLattice ns;
  IntVector c1;
  IntVector delta_class;
  LineBundleModel determinant;
  Degree delta_degree;
  std::int64_t c2 = 0;
};

/// Selects delta_class and computes the degree of the determinant.
ModuliContext make_context(const SurfaceModel &x, const NSLattice &ns, const IntVector &c1,
                           const LineBundleModel &determinant, std::int64_t c2);

Rational context_m(const ModuliContext &ctx);

/// Delta = m(2, c1) + c2/2.
Rational context_discriminant(const ModuliContext &ctx);

/// c2 - q(c1(delta))/2 > g - 1 + gamma/4.
struct GammaCondition {
  Rational lhs;       ///< c2 - q(c1(delta))/2
  int base_genus = 0;
  bool holds(const Rational &gamma) const;
};

struct PoissonReport {
  PoissonVerdict kind = PoissonVerdict::None;
  Rational dim;
  std::optional<Rational> rank;         ///< symplectic case: rank = dim
  std::optional<Rational> literal_rank; ///< 4 dim - h0(D, ad E|_D), as stated
  std::optional<Rational> generic_rank; ///< 4 dim - 2, as stated
  bool regular_over_divisor = true;
  bool discrepancy = false; ///< a stated rank exceeds dim
  std::string drop_locus;
};

struct AuditRecord {
  bool applicable = false; ///< r = 0 and g <= 1
  Rational dim;            ///< 8 Delta
  Rational fibre_dim;      ///< 4 Delta + g - 1
  Rational base_dim;       ///< dim - fibre_dim
  std::optional<bool> lagrangian_balance; ///< g = 1 only: fibre_dim = dim / 2
};

struct ModuliReport {
  bool empty = false;
  std::string reason;
  Rational expected_dim;
  bool smooth_everywhere = false;
  bool regular_locus_smooth = false;
  GammaCondition gamma_condition;
  std::optional<PoissonReport> poisson; ///< absent when X has no Poisson structure
  AuditRecord audit;
};

ModuliReport moduli_report(const ModuliContext &ctx);

/// Graph together with the caller-supplied excluded sets. I holds points of
/// P^1 (projections of constant sections); J holds the constant values of the
/// excluded sections A.
struct GraphQuery {
  GraphDivisor graph;
  std::optional<std::vector<P1Point>> excluded_i;
  std::optional<std::vector<P1Point>> excluded_j;
};

enum class ImageStatus { InImage, NotInImage, NeedsData };

struct ImageVerdict {
  ImageStatus status = ImageStatus::NeedsData;
  std::string reason;
};

ImageVerdict graph_image_membership(const ModuliContext &ctx, const GraphQuery &q);

enum class FibreType { Prym, ExtensionComponents, Indeterminate };

struct ExtensionComponent {
  LineBundleModel destab_bundle;
  Degree degree;
  /// deg K congruent to deg delta / 2 mod Z: regular on two coincidence fibres, else one.
  int required_regular_fibres = 1;
};

struct FibreDescription {
  FibreType type = FibreType::Indeterminate;
  std::optional<Rational> prym_dim; ///< 4 Delta + g - 1
  std::string copies;               ///< "1" or "finite (unresolved count)"
  std::vector<ExtensionComponent> components;
  std::size_t rejected_candidates = 0; ///< candidate K failing the stability criterion
  std::string diagnostics;
};

struct FibreQuery {
  GraphQuery graph;
  Involution involution;
  int wp_terms = kDefaultWpTerms;
  /// Candidate destabilising bundles for reducible pullbacks.
  std::vector<LineBundleModel> candidates;
  MonodromyOptions monodromy;
};

/// Fibre of the graph map over a graph without vertical components.
FibreDescription fibre_describe(const ModuliContext &ctx, const FibreQuery &q);

struct JumpPlan {
  BasePoint base_point;
  std::vector<int> sequence;
};

struct JumpFibreChain {
  BasePoint base_point;
  std::vector<PsiFibre> steps;
};

/// Psi-fibre types along the removal of each vertical component, processed in
/// the order of graph.vertical; c2 drops by the removed heights as it goes.
std::vector<JumpFibreChain> jump_fibre_describe(const ModuliContext &ctx, const GraphDivisor &graph,
                                                const std::vector<JumpPlan> &plan);

/// Throws NoPoissonStructure when X has none.
PoissonReport poisson_report(const ModuliContext &ctx, bool regular_over_divisor,
                             std::optional<std::int64_t> h0_ad_on_divisor = std::nullopt);

AuditRecord integrable_audit(const ModuliContext &ctx);

/// Candidate points of the excluded set I: for each multiplier alpha whose
/// bundle L_alpha has degree congruent to deg delta / 2 mod Z, the constant
/// lambda_0 = log(alpha) / (2 pi i) of its spectral section and its image in P^1.
struct ExcludedCandidate {
  Complex alpha;
  TorusPoint lambda0;
  P1Point projection;
};

TorusPoint lambda_from_alpha(Complex alpha, const EllipticCurve &fibre);

std::vector<ExcludedCandidate> excluded_constants(const ModuliContext &ctx, const WeierstrassP &wp,
                                                  const Involution &inv, const std::vector<Complex> &alphas,
                                                  double eps = kDefaultEpsilon);

std::string_view to_string(ImageStatus s);
std::string_view to_string(FibreType t);

} // namespace smod

#endif
