#ifndef SMOD_STABILITY_HPP
#define SMOD_STABILITY_HPP

#include "smod/bundles.hpp"
#include "smod/degree.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace smod {

enum class StabilityRoute { Degrees, ClosedForm, Unfiltrable };

/// Case of the filtrable classification: sections equal and split on every
/// fibre, sections equal and split on finitely many fibres, or distinct sections.
enum class FiltrableCase { None, EqualSplitEverywhere, EqualSplitFinitely, DistinctSections };

struct StabilityWitness {
  Degree degree;    ///< the larger destabilising degree
  Degree threshold; ///< deg delta / 2
};

struct StabilityVerdict {
  bool stable = false;
  StabilityRoute route = StabilityRoute::ClosedForm;
  std::optional<StabilityWitness> witness; ///< present exactly when unstable
  FiltrableCase case_tag = FiltrableCase::None;
  bool margin_warning = false; ///< some comparison was decided within epsilon
  std::vector<std::string> warnings;
};

/// Irreducible spectral cover: stable outright. Throws DomainError on a reducible cover.
StabilityVerdict is_stable_unfiltrable(const BundleDescriptor &e);

/// Bundles whose c2 lies in the band [-2m, 0) are all unfiltrable and hence stable.
std::optional<StabilityVerdict> stable_by_band(const NSLattice &ns, const IntVector &c1, std::int64_t c2);

FiltrableCase classify_case(const BundleDescriptor &e);

/// (deg K_1, deg K_2) of the bundle left after removing all jumps. For
/// distinct sections deg K_1 is read from the declared destabilising bundle;
/// for equal sections it is forced, and a contradicting declaration is rejected.
std::pair<Degree, Degree> destabilising_degrees(const BundleDescriptor &e, const SurfaceModel &x,
                                                double eps = kDefaultEpsilon);

/// Decides stability by both the closed-form criteria and the destabilising
/// degrees; throws InvariantViolation if they disagree outside the margin.
StabilityVerdict stability_check(const BundleDescriptor &e, const SurfaceModel &x,
                                 double eps = kDefaultEpsilon);

/// A filtrable bundle without jumps and with Delta = 0 is unstable. Throws
/// DomainError when those preconditions fail.
bool corollary_unstable(const BundleDescriptor &e, const NSLattice &ns, const SurfaceModel &x);

inline bool degree_congruent_mod_Z(const Degree &a, const Degree &b, double eps = kDefaultEpsilon) {
  return congruent_mod_z(a, b, eps);
}

std::string_view to_string(StabilityRoute route);
/// "(i)", "(ii)", "(iii)" or "" for unfiltrable bundles.
std::string_view to_string(FiltrableCase c);

} // namespace smod

#endif
