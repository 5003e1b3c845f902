#include "smod/stability.hpp"

#include "smod/errors.hpp"

#include <sstream>

namespace smod {

StabilityVerdict is_stable_unfiltrable(const BundleDescriptor &e) {
  if (!std::holds_alternative<IrreducibleBisection>(e.cover.horizontal))
    throw DomainError("the unfiltrable criterion needs an irreducible spectral cover");
  StabilityVerdict v;
  v.stable = true;
  v.route = StabilityRoute::Unfiltrable;
  return v;
}

std::optional<StabilityVerdict> stable_by_band(const NSLattice &ns, const IntVector &c1, std::int64_t c2) {
  if (!c2_admissible_range(ns, c1).in_band(c2))
    return std::nullopt;
  StabilityVerdict v;
  v.stable = true;
  v.route = StabilityRoute::Unfiltrable;
  return v;
}

FiltrableCase classify_case(const BundleDescriptor &e) {
  if (!e.extension)
    return FiltrableCase::None;
  const ExtensionData &ext = *e.extension;
  if (!same_section(ext.destab_section, ext.other_section))
    return FiltrableCase::DistinctSections;
  switch (ext.splitting.kind) {
  case SplittingKind::SplitsEverywhere:
    return FiltrableCase::EqualSplitEverywhere;
  case SplittingKind::SplitsOnFinitely:
    return ext.splitting.n == 0 ? FiltrableCase::EqualSplitEverywhere : FiltrableCase::EqualSplitFinitely;
  case SplittingKind::NontrivialOnFinitely:
    break;
  }
  throw ModelError("equal spectral sections cannot carry an extension that is non-trivial on finitely many fibres");
}

namespace {

const ExtensionData &require_extension(const BundleDescriptor &e) {
  if (!e.extension)
    throw DomainError("destabilising degrees exist only for filtrable bundles");
  if (e.extension->splitting.n < 0)
    throw ModelError("splitting counts are non-negative");
  return *e.extension;
}

/// n as it enters the degree formulas; zero when the extension splits everywhere.
Rational splitting_count(const ExtensionData &ext) {
  if (ext.splitting.kind == SplittingKind::SplitsEverywhere)
    return Rational(0);
  return Rational(ext.splitting.n);
}

struct ReducedData {
  Degree delta;         ///< deg delta of E
  Degree reduced_delta; ///< deg of the determinant after all jumps are removed
  Rational nu;
};

ReducedData reduce(const BundleDescriptor &e, const SurfaceModel &x, double eps) {
  ReducedData r;
  r.delta = degree(e.determinant, x);
  r.nu = nu_invariant(e);
  BundleDescriptor clean = remove_all_jumps(e, x);
  r.reduced_delta = degree(clean.determinant, x);
  Degree expected = r.delta - Degree(r.nu);
  if (compare(r.reduced_delta, expected, eps).sign != 0)
    throw InvariantViolation("removing all jumps should lower deg delta by nu");
  return r;
}

std::pair<Degree, Degree> degrees_from(const BundleDescriptor &e, const SurfaceModel &x,
                                       const ReducedData &r, double eps) {
  const ExtensionData &ext = *e.extension;
  const Degree omega = relative_dualising_degree(x);
  const Rational n = splitting_count(ext);
  switch (classify_case(e)) {
  case FiltrableCase::EqualSplitEverywhere:
  case FiltrableCase::EqualSplitFinitely: {
    Degree k = (r.reduced_delta + Degree(n) + omega).half();
    if (ext.destab_bundle && compare(degree(*ext.destab_bundle, x), k, eps).sign != 0)
      throw ModelError("declared destabilising bundle contradicts K_1^2 = delta (x) H_+ (x) omega");
    return {k, k};
  }
  case FiltrableCase::DistinctSections: {
    if (!ext.destab_bundle)
      throw ModelError("distinct spectral sections need the destabilising bundle K_1");
    Degree k1 = degree(*ext.destab_bundle, x);
    Degree k2 = -k1 + r.reduced_delta - Degree(n) + omega;
    return {k1, k2};
  }
  case FiltrableCase::None:
    break;
  }
  throw DomainError("destabilising degrees exist only for filtrable bundles");
}

void note_margin(StabilityVerdict &v, const DegreeComparison &c, const char *what) {
  if (!c.margin)
    return;
  v.margin_warning = true;
  v.warnings.push_back(std::string("decided within epsilon: ") + what);
}

} // namespace

std::pair<Degree, Degree> destabilising_degrees(const BundleDescriptor &e, const SurfaceModel &x,
                                                double eps) {
  require_extension(e);
  return degrees_from(e, x, reduce(e, x, eps), eps);
}

StabilityVerdict stability_check(const BundleDescriptor &e, const SurfaceModel &x, double eps) {
  if (!e.extension)
    return is_stable_unfiltrable(e);
  const ExtensionData &ext = require_extension(e);
  const ReducedData r = reduce(e, x, eps);
  const Degree omega = relative_dualising_degree(x);
  const Rational n = splitting_count(ext);
  const Degree threshold = r.delta.half();

  StabilityVerdict v;
  v.route = StabilityRoute::ClosedForm;
  v.case_tag = classify_case(e);

  // Degree route: both destabilising degrees strictly below deg delta / 2.
  auto [k1, k2] = degrees_from(e, x, r, eps);
  DegreeComparison c1 = compare(k1, threshold, eps);
  DegreeComparison c2 = compare(k2, threshold, eps);
  note_margin(v, c1, "deg K_1 against deg delta / 2");
  note_margin(v, c2, "deg K_2 against deg delta / 2");
  const bool by_degrees = c1.sign < 0 && c2.sign < 0;

  // Closed-form criteria.
  bool closed = false;
  if (v.case_tag == FiltrableCase::DistinctSections) {
    Degree low = threshold - Degree(r.nu) - Degree(n) + omega;
    DegreeComparison above = compare(k1, low, eps);
    note_margin(v, above, "deg K against the lower end of the stability interval");
    closed = above.sign > 0 && c1.sign < 0;
  } else {
    closed = Degree(r.nu).rational > n + omega.rational;
  }

  if (closed != by_degrees) {
    if (!v.margin_warning) {
      std::ostringstream msg;
      msg << "stability routes disagree: closed form says " << (closed ? "stable" : "unstable")
          << ", destabilising degrees " << k1 << " and " << k2 << " against " << threshold;
      throw InvariantViolation(msg.str());
    }
    v.warnings.push_back("routes disagree within epsilon; the closed-form verdict is reported");
  }
  v.stable = closed;
  if (!v.stable) {
    Degree larger = compare(k1, k2, eps).sign >= 0 ? k1 : k2;
    v.witness = StabilityWitness{larger, threshold};
  }
  return v;
}

bool corollary_unstable(const BundleDescriptor &e, const NSLattice &ns, const SurfaceModel &x) {
  if (!e.extension)
    throw DomainError("the trivial-discriminant criterion concerns filtrable bundles");
  if (!e.jumps.empty())
    throw DomainError("the trivial-discriminant criterion needs a bundle without jumps");
  if (discriminant(e, ns) != Rational(0))
    throw DomainError("the trivial-discriminant criterion needs Delta = 0");
  StabilityVerdict v = stability_check(e, x);
  if (v.stable)
    throw InvariantViolation("a filtrable bundle with no jumps and Delta = 0 was found stable");
  return true;
}

std::string_view to_string(StabilityRoute route) {
  switch (route) {
  case StabilityRoute::Degrees:
    return "degrees";
  case StabilityRoute::ClosedForm:
    return "closed-form";
  case StabilityRoute::Unfiltrable:
    break;
  }
  return "unfiltrable";
}

std::string_view to_string(FiltrableCase c) {
  switch (c) {
  case FiltrableCase::EqualSplitEverywhere:
    return "(i)";
  case FiltrableCase::EqualSplitFinitely:
    return "(ii)";
  case FiltrableCase::DistinctSections:
    return "(iii)";
  case FiltrableCase::None:
    break;
  }
  return "";
}

} // namespace smod
