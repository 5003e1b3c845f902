#ifndef SMOD_JACOBIAN_HPP
#define SMOD_JACOBIAN_HPP

#include "smod/polynomial.hpp"
#include "smod/rational.hpp"
#include "smod/surface.hpp"
#include "smod/torus.hpp"
#include "smod/weierstrass.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace smod {

// ---------------------------------------------------------------------------
// Sections and the involution (b, lambda) -> (b, delta_b - lambda)

/// Throws ModelError unless the section is admissible on X: constants for
/// every genus, affine maps only over an elliptic base with u*Lambda_B in Lambda_{T*}.
void validate_section(const Section &section, const SurfaceModel &x);

struct Involution {
  Section delta_section;
};

/// Complex lift of delta_b / 2 used as the centre of the quotient chart.
/// Constant sections use the fundamental-domain representative; affine
/// sections use u*b + c evaluated at the given coordinate of b.
Complex chart_centre(const Involution &inv, const BasePoint &b);

TorusPoint involution_apply(const Involution &inv, const BasePoint &b, const TorusPoint &lambda);

/// eta(b, lambda) = p(lambda - delta_b / 2), a point of P^1.
P1Point eta_project(const WeierstrassP &wp, const Involution &inv, const BasePoint &b,
                    const TorusPoint &lambda);

struct TorusPair {
  TorusPoint first;
  TorusPoint second;

  bool contains(const TorusPoint &p, double tol = kPointTolerance) const {
    return same_point(first, p, tol) || same_point(second, p, tol);
  }
  double distance_to(const TorusPoint &p) const {
    return std::min(torus_distance(first, p), torus_distance(second, p));
  }
};

/// The unordered pair {lambda, delta_b - lambda} over b mapping to w.
TorusPair eta_fibre_lift(const WeierstrassInverse &inverse, const Involution &inv,
                         const BasePoint &b, const P1Point &w);

// ---------------------------------------------------------------------------
// Intersections and genus bookkeeping

struct IntersectionCount {
  bool coincident = false;
  std::int64_t count = 0;
};

/// |Sigma_1 cap Sigma_2|; the lattice index [Lambda_{T*} : (u1-u2) Lambda_B] for affine sections.
IntersectionCount section_intersections(const Section &s1, const Section &s2, const SurfaceModel &x);

/// Genus 4*Delta + 2g - 1 of a smooth invariant bisection.
std::int64_t bisection_genus(const Rational &discriminant, int base_genus);

/// Genus of a double cover of a genus-g curve with the given number of simple branch points.
std::int64_t riemann_hurwitz_check(int base_genus, std::int64_t branch_count);

// ---------------------------------------------------------------------------
// Sections of the ruled surface F_delta and divisors on it

/// A rational map P^1 -> P^1 given by a coprime pair of polynomials.
struct RationalMap {
  Polynomial numerator;
  Polynomial denominator;
};

struct MapSample {
  BasePoint b;
  P1Point w;
};

/// Values of a section of F_delta over closed loops in the base (genus 1).
struct SampledMap {
  std::vector<std::vector<MapSample>> loops;
  int degree = 0;
};

/// Only the numerical class is known.
struct AbstractSection {
  int degree = 0;
};

using RuledSection = std::variant<RationalMap, SampledMap, AbstractSection>;

/// Checks coprimality (rational maps) and well-formedness.
void validate_ruled_section(const RuledSection &section);

int ruled_degree(const RuledSection &section);

/// Value of a rational-map section over b.
P1Point evaluate(const RationalMap &map, const BasePoint &b);

struct ReducibleBisection {
  Section s1;
  Section s2;
};

struct IrreducibleBisection {
  RuledSection graph_section;
};

using Bisection = std::variant<ReducibleBisection, IrreducibleBisection>;

struct VerticalComponent {
  BasePoint base_point;
  int multiplicity = 1;
};

struct SpectralCover {
  std::vector<VerticalComponent> vertical;
  Bisection horizontal;
};

struct GraphDivisor {
  std::vector<VerticalComponent> vertical;
  RuledSection section;
};

/// Vertical multiplicities plus the section's degree equal c2.
bool numerical_class_check(const GraphDivisor &graph, std::int64_t c2);

enum class PullbackStatus { Reducible, Irreducible, Unknown };

struct PullbackResult {
  PullbackStatus status = PullbackStatus::Unknown;
  std::optional<Bisection> bisection;
  int loops_tracked = 0;
  int nontrivial_loops = 0;
  std::string diagnostics;
};

struct MonodromyOptions {
  int loop_points = 256;
};

/// eta^* A: splits into two sections or not, decided by tracking the two
/// preimages around loops in the base.
PullbackResult graph_pullback(const RuledSection &section, const Involution &inv,
                              const WeierstrassInverse &inverse, const SurfaceModel &x,
                              const MonodromyOptions &options = {});

/// Branch points of the cover eta^* A -> P^1 for a rational map: points where
/// A meets a branch value (e1, e2, e3, infinity) with odd multiplicity,
/// including b = infinity. Algebraic counterpart of the monodromy count.
struct BranchPoint {
  BasePoint b;
  int multiplicity = 1;
};
std::vector<BranchPoint> odd_branch_points(const RationalMap &map, const WeierstrassP &wp);

} // namespace smod

#endif
