#include <doctest.h>

#include "smod/errors.hpp"
#include "smod/moduli.hpp"

#include <cmath>

using namespace smod;

namespace {

const EllipticCurve kSquare({0.0, 1.0});

SurfaceModel hopf_like(std::vector<MultipleFibre> fibres = {}) {
  return SurfaceModel(0, std::nullopt, kSquare, 1, {2.0, 0.0}, std::move(fibres));
}

SurfaceModel kodaira_like() { return SurfaceModel(1, EllipticCurve({0.1, 1.2}), kSquare, 1, {2.0, 0.0}); }

LineBundleModel line(std::int64_t base_chern, std::size_t fibres = 0) {
  LineBundleModel l;
  l.base_chern = base_chern;
  l.fibre_coeffs.assign(fibres, 0);
  return l;
}

/// m = 0, 1/4, 1/2 for gram [0], [-2], [-4] with c1 = (1).
ModuliContext context(Rational m, std::int64_t c2, SurfaceModel x = hopf_like()) {
  std::int64_t g = m == Rational(0) ? 0 : m == Rational(1, 4) ? -2 : -4;
  return make_context(x, NSLattice(IntMatrix{{g}}), {1}, line(0, x.fibre_count()), c2);
}

RationalMap constant_map(Complex w) { return {{w}, {1.0}}; }

/// Degree-d map b -> b^d + 0.37.
RationalMap power_map(int d) {
  Polynomial num(d + 1, Complex{});
  num[0] = 0.37;
  num[d] = 1.0;
  return {num, {1.0}};
}

Involution zero_involution() { return {ConstantSection{TorusPoint(0.0, 0.0, kSquare)}}; }

} // namespace

TEST_CASE("context selects delta and Delta = m + c2/2") {
  for (Rational m : {Rational(0), Rational(1, 4), Rational(1, 2)}) {
    for (std::int64_t c2 = -1; c2 <= 3; ++c2) {
      ModuliContext ctx = context(m, c2);
      CHECK(context_m(ctx) == m);
      CHECK(context_discriminant(ctx) == m + Rational(c2, 2));
      CHECK(Rational(-ctx.ns.form(ctx.delta_class), 8) == m);
      CHECK(discriminant_numeric(ctx.ns, {ctx.delta_class, c2}) == context_discriminant(ctx));
    }
  }
  CHECK_THROWS_AS(make_context(hopf_like(), NSLattice(IntMatrix{{0}}), {1, 2}, line(0), 0), ModelError);
}

TEST_CASE("moduli report examples") {
  SUBCASE("Hopf-type, c2 = 1") {
    auto r = moduli_report(make_context(hopf_like(), NSLattice(IntMatrix{{0}}), {0}, line(0), 1));
    CHECK_FALSE(r.empty);
    CHECK(r.smooth_everywhere);
    CHECK(r.expected_dim == Rational(4));
    REQUIRE(r.poisson.has_value());
    CHECK(r.poisson->kind == PoissonVerdict::DegeneratePoisson);
  }
  SUBCASE("m = 0, c2 = 0 is empty") {
    auto r = moduli_report(context(Rational(0), 0));
    CHECK(r.empty);
    CHECK_FALSE(r.reason.empty());
  }
  SUBCASE("regular locus boundary on a genus-2 base") {
    SurfaceModel x(2, std::nullopt, kSquare, 1, {2.0, 0.0});
    auto r = moduli_report(make_context(x, NSLattice(IntMatrix{{0}}), {0}, line(0), 1));
    CHECK(r.gamma_condition.lhs == Rational(1));
    CHECK_FALSE(r.regular_locus_smooth);
    CHECK_FALSE(r.smooth_everywhere);
    CHECK_FALSE(r.poisson.has_value());
    auto r2 = moduli_report(make_context(x, NSLattice(IntMatrix{{0}}), {0}, line(0), 2));
    CHECK(r2.regular_locus_smooth);
    CHECK(r2.gamma_condition.holds(Rational(3)));
    CHECK_FALSE(r2.gamma_condition.holds(Rational(4)));
  }
  SUBCASE("multiple fibres are not smooth everywhere") {
    auto r = moduli_report(context(Rational(1, 4), 1, hopf_like({{2, P1Point::finite(0.0)}})));
    CHECK_FALSE(r.smooth_everywhere);
    CHECK_FALSE(r.poisson.has_value());
    CHECK_FALSE(r.audit.applicable);
  }
}

TEST_CASE("emptiness is monotone in c2") {
  for (Rational m : {Rational(0), Rational(1, 4), Rational(1, 2)}) {
    bool seen_nonempty = false;
    for (std::int64_t c2 = 4; c2 >= -4; --c2) {
      auto r = moduli_report(context(m, c2));
      if (!r.empty)
        seen_nonempty = true;
      if (Rational(c2) < Rational(-2) * m)
        CHECK(r.empty);
      if (r.empty && Rational(c2) < Rational(-2) * m) {
        auto lower = moduli_report(context(m, c2 - 1));
        CHECK(lower.empty);
        CHECK(lower.reason == r.reason);
      }
    }
    CHECK(seen_nonempty);
  }
}

TEST_CASE("graph image decision table") {
  const P1Point excluded = P1Point::finite(1.5);
  auto query = [&](std::vector<VerticalComponent> vertical, RuledSection section) {
    GraphQuery q{{std::move(vertical), std::move(section)}, std::vector<P1Point>{excluded},
                 std::vector<P1Point>{excluded}};
    return q;
  };
  const VerticalComponent fibre{P1Point::finite(2.0), 1};
  const auto in = ImageStatus::InImage, out = ImageStatus::NotInImage;

  // m = 0
  CHECK(graph_image_membership(context(Rational(0), 0), query({}, constant_map(1.5))).status == out);
  CHECK(graph_image_membership(context(Rational(0), 0), query({}, constant_map(1.5))).reason == "moduli empty");
  CHECK(graph_image_membership(context(Rational(0), -1), query({}, constant_map(1.5))).status == out);
  CHECK(graph_image_membership(context(Rational(0), 1), query({}, power_map(1))).status == in);
  CHECK(graph_image_membership(context(Rational(0), 1), query({fibre}, constant_map(1.5))).status == out);
  CHECK(graph_image_membership(context(Rational(0), 1), query({fibre}, constant_map(-0.25))).status == in);
  CHECK(graph_image_membership(context(Rational(0), 2), query({}, power_map(2))).status == in);
  CHECK(graph_image_membership(context(Rational(0), 2), query({fibre}, power_map(1))).status == in);
  CHECK(graph_image_membership(context(Rational(0), 3), query({fibre, fibre}, power_map(1))).status == in);

  // m = 1/4
  CHECK(graph_image_membership(context(Rational(1, 4), -1), query({}, AbstractSection{0})).status == out);
  CHECK(graph_image_membership(context(Rational(1, 4), 0), query({}, constant_map(1.5))).status == out);
  CHECK(graph_image_membership(context(Rational(1, 4), 0), query({}, constant_map(-0.25))).status == in);
  CHECK(graph_image_membership(context(Rational(1, 4), 0), query({fibre}, constant_map(1.5))).status == in);
  CHECK(graph_image_membership(context(Rational(1, 4), 1), query({}, constant_map(1.5))).status == in);
  CHECK(graph_image_membership(context(Rational(1, 4), -2), query({}, constant_map(1.5))).status == out);

  // m = 1/2
  CHECK(graph_image_membership(context(Rational(1, 2), 0), query({}, constant_map(1.5))).status == in);
  CHECK(graph_image_membership(context(Rational(1, 2), -1), query({}, constant_map(1.5))).status == in);

}

TEST_CASE("graph image needs data") {
  const VerticalComponent fibre{P1Point::finite(2.0), 1};
  GraphQuery no_i{{{fibre}, constant_map(1.5)}, std::nullopt, std::nullopt};
  CHECK(graph_image_membership(context(Rational(0), 1), no_i).status == ImageStatus::NeedsData);
  GraphQuery no_j{{{}, constant_map(1.5)}, std::nullopt, std::nullopt};
  CHECK(graph_image_membership(context(Rational(1, 4), 0), no_j).status == ImageStatus::NeedsData);
  GraphQuery abstract{{{}, AbstractSection{0}}, std::nullopt, std::vector<P1Point>{}};
  CHECK(graph_image_membership(context(Rational(1, 4), 0), abstract).status == ImageStatus::NeedsData);
  GraphQuery generic{{{}, power_map(2)}, std::nullopt, std::nullopt};
  CHECK(graph_image_membership(context(Rational(0), 2, hopf_like({{2, P1Point::finite(0.0)}})), generic).status ==
        ImageStatus::NeedsData);
  // a graph outside the numerical class is rejected
  CHECK_THROWS_AS(graph_image_membership(context(Rational(0), 2), GraphQuery{{{}, power_map(1)}, {}, {}}),
                  ModelError);
}

TEST_CASE("graph image is total on the case grid") {
  const VerticalComponent fibre{P1Point::finite(2.0), 1};
  for (Rational m : {Rational(0), Rational(1, 4), Rational(1, 2)})
    for (std::int64_t c2 = -1; c2 <= 3; ++c2)
      for (int shape = 0; shape < 3; ++shape) {
        std::vector<VerticalComponent> vertical;
        RuledSection section = constant_map(1.5);
        if (shape == 1 && c2 >= 1) {
          vertical.push_back(fibre);
          section = c2 == 1 ? RuledSection(constant_map(1.5)) : RuledSection(power_map(int(c2 - 1)));
        } else if (c2 >= 1) {
          section = power_map(int(c2));
        }
        GraphQuery q{{vertical, section}, std::vector<P1Point>{P1Point::finite(1.5)},
                     std::vector<P1Point>{P1Point::finite(1.5)}};
        ImageVerdict v;
        CHECK_NOTHROW(v = graph_image_membership(context(m, c2), q));
        CHECK(v.status != ImageStatus::NeedsData);
      }
}

TEST_CASE("fibre of the graph map") {
  SUBCASE("irreducible pullback over P^1 gives a Prym of dimension 1") {
    ModuliContext ctx = make_context(hopf_like(), NSLattice(IntMatrix{{0}}), {0}, line(0), 1);
    FibreQuery q{{{{}, power_map(1)}, {}, {}}, zero_involution(), 10, {}, {}};
    FibreDescription f = fibre_describe(ctx, q);
    CHECK(f.type == FibreType::Prym);
    REQUIRE(f.prym_dim.has_value());
    CHECK(*f.prym_dim == Rational(1));
    CHECK(f.copies == "1");
    // dimension bookkeeping: fibre + base = 8 Delta
    CHECK(*f.prym_dim + integrable_audit(ctx).base_dim == moduli_report(ctx).expected_dim);
  }
  SUBCASE("multiple fibres leave the number of copies unresolved") {
    SurfaceModel x = hopf_like({{3, P1Point::finite(5.0)}});
    ModuliContext ctx = make_context(x, NSLattice(IntMatrix{{0}}), {0}, line(0, 1), 1);
    FibreQuery q{{{{}, power_map(1)}, {}, {}}, zero_involution(), 10, {}, {}};
    FibreDescription f = fibre_describe(ctx, q);
    CHECK(f.type == FibreType::Prym);
    CHECK(f.copies == "finite (unresolved count)");
  }
  SUBCASE("reducible pullback parametrised by stable destabilising bundles") {
    // m = 1/2, c2 = 0: Delta = 1/2, so K must lie in (deg delta/2 - 2, deg delta/2)
    ModuliContext ctx = context(Rational(1, 2), 0);
    LineBundleModel half_unit = line(0);
    half_unit.alpha = std::sqrt(2.0); // degree -1/2 on this surface
    FibreQuery q{{{{}, constant_map(1.5)}, {}, {}}, zero_involution(), 10,
                 {line(0), line(-1), half_unit, line(-2), line(1)}, {}};
    FibreDescription f = fibre_describe(ctx, q);
    CHECK(f.type == FibreType::ExtensionComponents);
    REQUIRE(f.components.size() == 2);
    CHECK(f.rejected_candidates == 3);
    CHECK(f.components[0].degree.rational == Rational(-1));
    CHECK(f.components[0].required_regular_fibres == 2);
    CHECK(std::abs(f.components[1].degree.value() + 0.5) < 1e-12);
    CHECK(f.components[1].required_regular_fibres == 1);
  }
  SUBCASE("unknown pullback is indeterminate") {
    ModuliContext ctx = make_context(hopf_like(), NSLattice(IntMatrix{{0}}), {0}, line(0), 1);
    FibreQuery q{{{{}, AbstractSection{1}}, {}, {}}, zero_involution(), 10, {}, {}};
    CHECK(fibre_describe(ctx, q).type == FibreType::Indeterminate);
  }
  SUBCASE("vertical components are routed elsewhere") {
    ModuliContext ctx = make_context(hopf_like(), NSLattice(IntMatrix{{0}}), {0}, line(0), 2);
    FibreQuery q{{{{{P1Point::finite(1.0), 1}}, power_map(1)}, {}, {}}, zero_involution(), 10, {}, {}};
    CHECK_THROWS_AS(fibre_describe(ctx, q), DomainError);
  }
}

TEST_CASE("jump fibre chains") {
  ModuliContext ctx = make_context(hopf_like(), NSLattice(IntMatrix{{0}}), {0}, line(0), 3);
  GraphDivisor graph{{{P1Point::finite(1.0), 3}}, AbstractSection{0}};
  auto chains = jump_fibre_describe(ctx, graph, {{P1Point::finite(1.0), {2, 1}}});
  REQUIRE(chains.size() == 1);
  REQUIRE(chains[0].steps.size() == 2);
  CHECK(chains[0].steps[0].kind == PsiFibreKind::PicTimesAut);
  CHECK(chains[0].steps[0].pic_degree == -2);
  CHECK(chains[0].steps[1].kind == PsiFibreKind::PicOnly);
  CHECK(chains[0].steps[1].pic_degree == -1);

  auto single = jump_fibre_describe(ctx, GraphDivisor{{{P1Point::finite(1.0), 1}}, AbstractSection{2}},
                                    {{P1Point::finite(1.0), {1}}});
  CHECK(single[0].steps.size() == 1);
  CHECK(single[0].steps[0].kind == PsiFibreKind::PicOnly);

  CHECK_THROWS_AS(jump_fibre_describe(ctx, graph, {{P1Point::finite(1.0), {1, 1}}}), DomainError);
  CHECK_THROWS_AS(jump_fibre_describe(ctx, graph, {{P1Point::finite(1.0), {1, 2}}}), ModelError);
  CHECK_THROWS_AS(jump_fibre_describe(ctx, graph, {{P1Point::finite(4.0), {2, 1}}}), DomainError);

  // every jumping sequence of mu = 3 is classified
  for (const auto &seq : jumping_sequences(3))
    CHECK(jump_fibre_describe(ctx, graph, {{P1Point::finite(1.0), seq}})[0].steps.size() == seq.size());
}

TEST_CASE("Poisson rank reports") {
  SUBCASE("symplectic on an elliptic base") {
    ModuliContext ctx = make_context(kodaira_like(), NSLattice(IntMatrix{{0}}), {0}, line(0), 2);
    auto p = poisson_report(ctx, true);
    CHECK(p.kind == PoissonVerdict::Symplectic);
    REQUIRE(p.rank.has_value());
    CHECK(*p.rank == Rational(8));
    CHECK(p.dim == Rational(8));
    CHECK_FALSE(p.discrepancy);
  }
  SUBCASE("degenerate on a rational base") {
    ModuliContext ctx = make_context(hopf_like(), NSLattice(IntMatrix{{0}}), {0}, line(0), 1);
    auto p = poisson_report(ctx, true);
    CHECK(p.kind == PoissonVerdict::DegeneratePoisson);
    CHECK(*p.generic_rank == Rational(14));
    CHECK(*p.literal_rank == Rational(14));
    CHECK(p.discrepancy);
    auto dropped = poisson_report(ctx, false, 6);
    CHECK(*dropped.literal_rank == Rational(10));
    CHECK_FALSE(dropped.drop_locus.empty());
    CHECK_FALSE(poisson_report(ctx, false).literal_rank.has_value());
    CHECK_THROWS_AS(poisson_report(ctx, false, -1), DomainError);
  }
  SUBCASE("multiple fibres") {
    ModuliContext ctx = context(Rational(1, 4), 1, hopf_like({{2, P1Point::finite(0.0)}}));
    CHECK_THROWS_AS(poisson_report(ctx, true), NoPoissonStructure);
  }
}

TEST_CASE("integrable system audit") {
  for (std::int64_t c2 = 1; c2 <= 10; ++c2) {
    ModuliContext ctx = make_context(kodaira_like(), NSLattice(IntMatrix{{0}}), {0}, line(0), c2);
    AuditRecord a = integrable_audit(ctx);
    CHECK(a.applicable);
    REQUIRE(a.lagrangian_balance.has_value());
    CHECK(*a.lagrangian_balance);
    CHECK(a.fibre_dim * Rational(2) == a.dim);
  }
  ModuliContext ctx = make_context(hopf_like(), NSLattice(IntMatrix{{0}}), {0}, line(0), 1);
  AuditRecord a = integrable_audit(ctx);
  CHECK(a.dim == Rational(4));
  CHECK(a.fibre_dim == Rational(1));
  CHECK(a.base_dim == Rational(3));
  CHECK_FALSE(a.lagrangian_balance.has_value());
}

TEST_CASE("excluded constants from a multiplier grid") {
  ModuliContext ctx = make_context(hopf_like(), NSLattice(IntMatrix{{0}}), {0}, line(0), 1);
  WeierstrassP wp(kSquare, 10);
  std::vector<Complex> alphas{1.0, 2.0, std::sqrt(2.0), Complex(0.0, 4.0), 0.5};
  auto found = excluded_constants(ctx, wp, zero_involution(), alphas);
  REQUIRE(found.size() == 4);
  CHECK(found[0].projection.infinite); // alpha = 1 gives lambda_0 = 0
  for (const auto &c : found) {
    LineBundleModel l = line(0);
    l.alpha = c.alpha;
    CHECK(congruent_mod_z(degree(l, ctx.surface), ctx.delta_degree.half()));
    // exp(2 pi i lambda_0) recovers alpha up to the lattice
    Complex back = std::exp(Complex(0.0, 2.0 * std::numbers::pi) * c.lambda0.z());
    CHECK(kSquare.is_lattice_point((std::log(back) - std::log(c.alpha)) / Complex(0.0, 2.0 * std::numbers::pi),
                                   1e-9));
  }
  CHECK_THROWS_AS(lambda_from_alpha(0.0, kSquare), DomainError);
}
