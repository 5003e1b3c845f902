#include "smod/moduli.hpp"

#include "smod/errors.hpp"

#include <cmath>
#include <numbers>

namespace smod {

ModuliContext make_context(const SurfaceModel &x, const NSLattice &ns, const IntVector &c1,
                           const LineBundleModel &determinant, std::int64_t c2) {
  if (c1.size() != ns.rank())
    throw ModelError("c1 does not have the rank of NS(X)");
  return {x, ns, c1, select_delta_class(ns, c1), determinant, degree(determinant, x), c2};
}

Rational context_m(const ModuliContext &ctx) { return m_two(ctx.ns, ctx.c1); }

Rational context_discriminant(const ModuliContext &ctx) {
  return context_m(ctx) + Rational(ctx.c2, 2);
}

bool GammaCondition::holds(const Rational &gamma) const {
  return lhs > Rational(base_genus - 1) + gamma / Rational(4);
}

namespace {

bool is_empty(const ModuliContext &ctx, std::string *reason) {
  Rational m = context_m(ctx);
  if (Rational(ctx.c2) < Rational(-2) * m) {
    if (reason)
      *reason = "c2 < -2 m(2,c1), so Delta < 0";
    return true;
  }
  if (m == Rational(0) && ctx.c2 == 0) {
    if (reason)
      *reason = "m(2,c1) = 0 and c2 = 0: every bundle is filtrable with Delta = 0 and no jumps";
    return true;
  }
  return false;
}

bool fibre_bundle_without_multiple_fibres(const SurfaceModel &x) {
  return x.fibre_count() == 0 && x.base_genus() <= 1;
}

/// The constant value of a degree-0 section, when it can be read off.
std::optional<P1Point> constant_value(const RuledSection &section) {
  if (ruled_degree(section) != 0)
    return std::nullopt;
  if (const auto *map = std::get_if<RationalMap>(&section))
    return evaluate(*map, P1Point::finite(0.0));
  if (const auto *sampled = std::get_if<SampledMap>(&section)) {
    std::optional<P1Point> value;
    for (const auto &loop : sampled->loops)
      for (const auto &s : loop) {
        if (!value)
          value = s.w;
        else if (!same_point(*value, s.w))
          return std::nullopt;
      }
    return value;
  }
  return std::nullopt;
}

bool member(const std::vector<P1Point> &set, const P1Point &w) {
  for (const auto &p : set)
    if (same_point(p, w))
      return true;
  return false;
}

} // namespace

ModuliReport moduli_report(const ModuliContext &ctx) {
  ModuliReport r;
  r.empty = is_empty(ctx, &r.reason);
  r.expected_dim = Rational(8) * context_discriminant(ctx);
  r.smooth_everywhere = fibre_bundle_without_multiple_fibres(ctx.surface);
  r.gamma_condition.lhs = Rational(ctx.c2) - Rational(ctx.ns.form(ctx.delta_class), 2);
  r.gamma_condition.base_genus = ctx.surface.base_genus();
  r.regular_locus_smooth = r.gamma_condition.holds(Rational(0));
  if (poisson_exists(ctx.surface) != PoissonVerdict::None)
    r.poisson = poisson_report(ctx, true);
  r.audit = integrable_audit(ctx);
  return r;
}

ImageVerdict graph_image_membership(const ModuliContext &ctx, const GraphQuery &q) {
  validate_ruled_section(q.graph.section);
  if (ctx.surface.fibre_count() != 0)
    return {ImageStatus::NeedsData,
            "graph image is decided only for surfaces without multiple fibres; "
            "the multiple-fibre analogues are stated without proof"};
  if (is_empty(ctx, nullptr))
    return {ImageStatus::NotInImage, "moduli empty"};

  const Rational m = context_m(ctx);
  const auto &graph = q.graph;
  if (m == Rational(0)) {
    if (!numerical_class_check(graph, ctx.c2))
      throw ModelError("graph is not numerically equivalent to eta_*(B_0) + c2 f");
    if (ctx.c2 >= 2)
      return {ImageStatus::InImage, "c2 >= 2: the graph map is surjective"};
    // c2 = 1: only one fibre plus a constant section can be excluded
    if (graph.vertical.size() != 1)
      return {ImageStatus::InImage, "c2 = 1 and the graph is not of the form {b} x P^1 + B x {w}"};
    auto w = constant_value(graph.section);
    if (!w)
      return {ImageStatus::NeedsData, "the constant value of the horizontal section"};
    if (!q.excluded_i)
      return {ImageStatus::NeedsData, "the excluded set I of projected constants"};
    if (member(*q.excluded_i, *w))
      return {ImageStatus::NotInImage, "graph lies in B x I"};
    return {ImageStatus::InImage, "constant section outside I"};
  }

  if (ctx.c2 < 0)
    return {ImageStatus::InImage, "c2 < 0: every bundle is unfiltrable and stable"};
  if (ctx.c2 >= 1 || m != Rational(1, 4))
    return {ImageStatus::InImage, "the graph map is surjective here"};
  // c2 = 0 and m = 1/4
  if (!graph.vertical.empty())
    return {ImageStatus::InImage, "a vertical component forces an irreducible bisection"};
  if (std::holds_alternative<RationalMap>(graph.section) && ruled_degree(graph.section) > 0)
    return {ImageStatus::InImage, "a non-constant section over P^1 has irreducible pullback"};
  auto w = constant_value(graph.section);
  if (!w)
    return {ImageStatus::NeedsData, "whether the section lies in J"};
  if (!q.excluded_j)
    return {ImageStatus::NeedsData, "the excluded set J"};
  if (member(*q.excluded_j, *w))
    return {ImageStatus::NotInImage, "graph lies in J"};
  return {ImageStatus::InImage, "section outside J"};
}

FibreDescription fibre_describe(const ModuliContext &ctx, const FibreQuery &q) {
  const GraphDivisor &graph = q.graph.graph;
  if (!graph.vertical.empty())
    throw DomainError("graphs with vertical components are described by jump_fibre_describe");
  if (is_empty(ctx, nullptr))
    throw DomainError("the moduli space is empty");
  const Rational delta = context_discriminant(ctx);
  const SurfaceModel &x = ctx.surface;

  WeierstrassInverse inverse(x.fibre(), q.wp_terms);
  PullbackResult pulled = graph_pullback(graph.section, q.involution, inverse, x, q.monodromy);

  FibreDescription out;
  out.diagnostics = pulled.diagnostics;
  if (pulled.status == PullbackStatus::Unknown) {
    out.type = FibreType::Indeterminate;
    return out;
  }
  if (pulled.status == PullbackStatus::Irreducible) {
    out.type = FibreType::Prym;
    out.prym_dim = Rational(4) * delta + Rational(x.base_genus() - 1);
    out.copies = x.fibre_count() == 0 ? "1" : "finite (unresolved count)";
    return out;
  }

  out.type = FibreType::ExtensionComponents;
  const auto &pair = std::get<ReducibleBisection>(*pulled.bisection);
  const Rational four_delta = Rational(4) * delta;
  if (!is_integer(four_delta))
    throw ModelError("4 Delta must be an integer for a reducible bisection");
  const Degree half = ctx.delta_degree.half();
  for (LineBundleModel k : q.candidates) {
    Section s1 = pair.s1, s2 = pair.s2;
    if (k.section) {
      if (same_section(*k.section, pair.s2) && !same_section(*k.section, pair.s1))
        std::swap(s1, s2);
      else if (!same_section(*k.section, pair.s1)) {
        ++out.rejected_candidates;
        continue;
      }
    }
    k.section = s1;
    ExtensionData ext;
    ext.destab_section = s1;
    ext.other_section = s2;
    ext.destab_bundle = k;
    ext.destab_class = IntVector(ctx.ns.rank(), 0);
    if (same_section(s1, s2))
      ext.splitting = {SplittingKind::SplitsEverywhere, 0};
    else
      ext.splitting = {SplittingKind::NontrivialOnFinitely, static_cast<int>(four_delta.numerator())};
    BundleDescriptor e = make_filtrable(ctx.determinant, ctx.delta_class, ctx.c2, ext);
    if (!stability_check(e, x).stable) {
      ++out.rejected_candidates;
      continue;
    }
    Degree dk = degree(k, x);
    out.components.push_back({k, dk, congruent_mod_z(dk, half) ? 2 : 1});
  }
  return out;
}

std::vector<JumpFibreChain> jump_fibre_describe(const ModuliContext &ctx, const GraphDivisor &graph,
                                                const std::vector<JumpPlan> &plan) {
  std::vector<JumpFibreChain> out;
  std::int64_t c2 = ctx.c2;
  for (const auto &v : graph.vertical) {
    const JumpPlan *match = nullptr;
    for (const auto &p : plan)
      if (same_point(p.base_point, v.base_point))
        match = &p;
    if (!match)
      throw DomainError("no jumping sequence supplied for a vertical component");
    int mu = 0;
    for (int h : match->sequence)
      mu += h;
    if (mu != v.multiplicity)
      throw DomainError("jumping sequence sums to " + std::to_string(mu) +
                        " but the vertical component has multiplicity " + std::to_string(v.multiplicity));
    out.push_back({v.base_point, psi_tower(c2, match->sequence)});
    c2 -= mu;
  }
  return out;
}

PoissonReport poisson_report(const ModuliContext &ctx, bool regular_over_divisor,
                             std::optional<std::int64_t> h0_ad_on_divisor) {
  PoissonVerdict kind = poisson_exists(ctx.surface);
  if (kind == PoissonVerdict::None)
    throw NoPoissonStructure("X carries no Poisson structure: it has multiple fibres or base genus >= 2");
  PoissonReport r;
  r.kind = kind;
  r.dim = Rational(8) * context_discriminant(ctx);
  r.regular_over_divisor = regular_over_divisor;
  if (kind == PoissonVerdict::Symplectic) {
    r.rank = r.dim;
    return r;
  }
  const Rational four_dim = Rational(4) * r.dim;
  r.generic_rank = four_dim - Rational(2);
  if (h0_ad_on_divisor) {
    if (*h0_ad_on_divisor < 0)
      throw DomainError("h0(D, ad E|_D) is non-negative");
    r.literal_rank = four_dim - Rational(*h0_ad_on_divisor);
  } else if (regular_over_divisor) {
    r.literal_rank = r.generic_rank;
  }
  r.discrepancy = *r.generic_rank > r.dim || (r.literal_rank && *r.literal_rank > r.dim);
  r.drop_locus = "bundles that are not regular over the fibres T_1 and T_2 with D = T_1 + T_2";
  return r;
}

AuditRecord integrable_audit(const ModuliContext &ctx) {
  AuditRecord a;
  const SurfaceModel &x = ctx.surface;
  a.applicable = fibre_bundle_without_multiple_fibres(x);
  const Rational delta = context_discriminant(ctx);
  a.dim = Rational(8) * delta;
  a.fibre_dim = Rational(4) * delta + Rational(x.base_genus() - 1);
  a.base_dim = a.dim - a.fibre_dim;
  if (x.base_genus() == 1)
    a.lagrangian_balance = a.fibre_dim == a.dim / Rational(2);
  return a;
}

TorusPoint lambda_from_alpha(Complex alpha, const EllipticCurve &fibre) {
  if (std::abs(alpha) == 0.0)
    throw DomainError("line bundle multiplier alpha must be nonzero");
  const Complex two_pi_i(0.0, 2.0 * std::numbers::pi);
  return torus_reduce(std::log(alpha) / two_pi_i, fibre);
}

std::vector<ExcludedCandidate> excluded_constants(const ModuliContext &ctx, const WeierstrassP &wp,
                                                  const Involution &inv, const std::vector<Complex> &alphas,
                                                  double eps) {
  std::vector<ExcludedCandidate> out;
  const Degree half = ctx.delta_degree.half();
  const BasePoint origin = P1Point::finite(0.0);
  for (Complex alpha : alphas) {
    LineBundleModel l = trivial_bundle(ctx.surface);
    l.alpha = alpha;
    if (!congruent_mod_z(degree(l, ctx.surface), half, eps))
      continue;
    TorusPoint lambda = lambda_from_alpha(alpha, ctx.surface.fibre());
    out.push_back({alpha, lambda, eta_project(wp, inv, origin, lambda)});
  }
  return out;
}

std::string_view to_string(ImageStatus s) {
  switch (s) {
  case ImageStatus::InImage:
    return "InImage";
  case ImageStatus::NotInImage:
    return "NotInImage";
  case ImageStatus::NeedsData:
    break;
  }
  return "NeedsData";
}

std::string_view to_string(FibreType t) {
  switch (t) {
  case FibreType::Prym:
    return "Prym";
  case FibreType::ExtensionComponents:
    return "ExtensionComponents";
  case FibreType::Indeterminate:
    break;
  }
  return "Indeterminate";
}

} // namespace smod
