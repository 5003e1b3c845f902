#ifndef SMOD_BUNDLES_HPP
#define SMOD_BUNDLES_HPP

#include "smod/jacobian.hpp"
#include "smod/nslattice.hpp"
#include "smod/rational.hpp"
#include "smod/surface.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace smod {

/// A jump of the bundle over one fibre: length l, heights h_0 >= ... >= h_{l-1} >= 1.
struct JumpDescriptor {
  BasePoint base_point;
  std::optional<int> fibre_multiplicity; ///< m_0 when the jump sits on a multiple fibre
  int length = 1;
  std::vector<int> sequence;

  /// mu = h_0 + ... + h_{l-1}.
  int multiplicity() const;
};

/// Throws ModelError on a malformed jump (wrong length, heights < 1, increasing heights).
void validate_jump(const JumpDescriptor &jump);

enum class SplittingKind { SplitsEverywhere, SplitsOnFinitely, NontrivialOnFinitely };

struct Splitting {
  SplittingKind kind = SplittingKind::SplitsEverywhere;
  int n = 0;
};

/// 0 -> D -> E -> D^{-1} (x) delta -> 0, with D the destabilising bundle K_1.
struct ExtensionData {
  Section destab_section;                     ///< Sigma_1
  std::optional<LineBundleModel> destab_bundle; ///< K_1 when known
  IntVector destab_class;                     ///< c_1(D) in NS(X)
  Section other_section;                      ///< Sigma_2
  Splitting splitting;
};

struct BundleDescriptor {
  LineBundleModel determinant;
  IntVector determinant_class; ///< c_1(delta) in NS(X)
  std::int64_t c2 = 0;
  SpectralCover cover;
  std::optional<ExtensionData> extension; ///< absent for unfiltrable bundles
  std::vector<JumpDescriptor> jumps;

  bool filtrable() const { return extension.has_value(); }
};

/// Filtrable bundle; the spectral cover is assembled from the sections and jumps.
BundleDescriptor make_filtrable(const LineBundleModel &determinant, const IntVector &determinant_class,
                                std::int64_t c2, const ExtensionData &extension,
                                std::vector<JumpDescriptor> jumps = {});

/// Unfiltrable bundle with an irreducible horizontal bisection.
BundleDescriptor make_unfiltrable(const LineBundleModel &determinant, const IntVector &determinant_class,
                                  std::int64_t c2, const RuledSection &graph_section,
                                  std::vector<JumpDescriptor> jumps = {});

/// Delta(E) = (c2 - q(c1(delta))/4) / 2.
Rational discriminant(const BundleDescriptor &e, const NSLattice &ns);

/// Delta of the bundle left after every jump is removed: Delta(E) - sum(mu)/2.
Rational jump_free_discriminant(const BundleDescriptor &e, const NSLattice &ns);

/// Delta(E) = -(1/8) q(c1(delta) - 2 c1(D)).
Rational delta_from_extension(const IntVector &delta_class, const IntVector &d_class, const NSLattice &ns);

/// nu = sum l/m_0 over jumps on multiple fibres + sum l over the others.
Rational nu_invariant(const BundleDescriptor &e);

/// One allowable elementary modification at the jump over `at`: drops h_0,
/// lowers c2 by h_0 and twists the determinant by minus one fibre.
/// The Néron–Severi class of the determinant is unchanged (fibre classes lie
/// in the radical of the form).
BundleDescriptor allowable_modification(const BundleDescriptor &e, const BasePoint &at,
                                        const SurfaceModel &x);

/// l successive allowable modifications at `at`.
BundleDescriptor remove_jump(const BundleDescriptor &e, const BasePoint &at, const SurfaceModel &x);

BundleDescriptor remove_all_jumps(const BundleDescriptor &e, const SurfaceModel &x);

enum class PsiFibreKind { AutSL2, PicTimesAut, PicOnly };

struct PsiFibre {
  PsiFibreKind kind = PsiFibreKind::PicOnly;
  std::int64_t pic_degree = 0; ///< -h0 for PicTimesAut, -c2 for PicOnly
  std::string description() const;
};

/// Fibre of Psi at W, where W has c2, jump length l and first height h1
/// (present iff l > 0), and h0 is the height removed.
PsiFibre psi_fibre_classify(std::int64_t c2, int h0, std::optional<int> h1, int l);

/// Psi fibre types met while removing a jump with the given sequence, starting from c2.
std::vector<PsiFibre> psi_tower(std::int64_t c2, const std::vector<int> &sequence);

/// Every non-increasing sequence of positive integers summing to mu.
std::vector<std::vector<int>> jumping_sequences(int mu);

struct Finding {
  std::string code;
  std::string message;
};

/// Checks the descriptor against the structure results for spectral covers;
/// returns the violations found (empty when consistent).
std::vector<Finding> consistency_check(const BundleDescriptor &e, const NSLattice &ns,
                                       const SurfaceModel &x);

std::string_view to_string(SplittingKind kind);

} // namespace smod

#endif
