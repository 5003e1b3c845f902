#include <doctest.h>

#include "../support/generators.hpp"
#include "smod/bundles.hpp"
#include "smod/errors.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace smod;

namespace {

const EllipticCurve kSquare({0.0, 1.0});

SurfaceModel hopf_like(std::vector<MultipleFibre> fibres = {}) {
  return SurfaceModel(0, std::nullopt, kSquare, 1, {2.0, 0.0}, std::move(fibres));
}

Section constant(double s, double t) { return ConstantSection{TorusPoint(s, t, kSquare)}; }

LineBundleModel line(std::int64_t base_chern, std::vector<std::int64_t> coeffs = {}) {
  LineBundleModel l;
  l.base_chern = base_chern;
  l.fibre_coeffs = std::move(coeffs);
  return l;
}

ExtensionData split_extension(Section s1, Section s2, SplittingKind kind, int n = 0) {
  ExtensionData ext;
  ext.destab_section = s1;
  ext.other_section = s2;
  ext.destab_class = {0};
  ext.splitting = {kind, n};
  return ext;
}

bool has_code(const std::vector<Finding> &findings, const std::string &code) {
  return std::any_of(findings.begin(), findings.end(), [&](const Finding &f) { return f.code == code; });
}

/// Partition numbers by the standard coin-counting recurrence.
std::int64_t partition_count(int n) {
  std::vector<std::int64_t> p(n + 1, 0);
  p[0] = 1;
  for (int part = 1; part <= n; ++part)
    for (int s = part; s <= n; ++s)
      p[s] += p[s - part];
  return p[n];
}

} // namespace

TEST_CASE("jump validation") {
  CHECK_NOTHROW(validate_jump({P1Point::finite(0.0), std::nullopt, 2, {3, 1}}));
  CHECK_THROWS_AS(validate_jump({P1Point::finite(0.0), std::nullopt, 0, {}}), ModelError);
  CHECK_THROWS_AS(validate_jump({P1Point::finite(0.0), std::nullopt, 2, {1}}), ModelError);
  CHECK_THROWS_AS(validate_jump({P1Point::finite(0.0), std::nullopt, 2, {1, 2}}), ModelError);
  CHECK_THROWS_AS(validate_jump({P1Point::finite(0.0), std::nullopt, 1, {0}}), ModelError);
  CHECK_THROWS_AS(validate_jump({P1Point::finite(0.0), 1, 1, {1}}), ModelError);
  JumpDescriptor j{P1Point::finite(0.0), std::nullopt, 3, {4, 2, 2}};
  CHECK(j.multiplicity() == 8);
}

TEST_CASE("jumping sequences are the partitions of mu") {
  CHECK_THROWS_AS(jumping_sequences(0), DomainError);
  for (int mu = 1; mu <= 12; ++mu) {
    auto seqs = jumping_sequences(mu);
    CHECK(static_cast<std::int64_t>(seqs.size()) == partition_count(mu));
    std::set<std::vector<int>> distinct(seqs.begin(), seqs.end());
    CHECK(distinct.size() == seqs.size());
    for (const auto &s : seqs) {
      int sum = 0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        sum += s[i];
        CHECK(s[i] >= 1);
        if (i > 0)
          CHECK(s[i] <= s[i - 1]);
      }
      CHECK(sum == mu);
      CHECK_NOTHROW(validate_jump({P1Point::finite(0.0), std::nullopt, static_cast<int>(s.size()), s}));
    }
  }
  CHECK(jumping_sequences(3) == std::vector<std::vector<int>>{{3}, {2, 1}, {1, 1, 1}});
}

TEST_CASE("discriminant and nu") {
  SurfaceModel x = hopf_like({{3, P1Point::finite(1.0)}});
  NSLattice ns(IntMatrix{{-2}});
  std::vector<JumpDescriptor> jumps{{P1Point::finite(1.0), 3, 2, {2, 1}},
                                    {P1Point::finite(0.0), std::nullopt, 1, {2}}};
  auto e = make_filtrable(line(0, {0}), {1}, 5, split_extension(constant(0.1, 0.2), constant(0.1, 0.2),
                                                                SplittingKind::SplitsEverywhere),
                          jumps);
  // Delta = (5 + 2/4) / 2
  CHECK(discriminant(e, ns) == Rational(11, 4));
  CHECK(jump_free_discriminant(e, ns) == Rational(11, 4) - Rational(5, 2));
  CHECK(nu_invariant(e) == Rational(2, 3) + Rational(1));
  CHECK(delta_from_extension({1}, {0}, ns) == Rational(1, 4));
  CHECK(delta_from_extension({2}, {1}, ns) == Rational(0));
  CHECK(e.cover.vertical.size() == 2);
  CHECK(e.cover.vertical[0].multiplicity == 3);
  CHECK(e.cover.vertical[1].multiplicity == 2);
  CHECK_THROWS_AS(make_filtrable(line(0, {0}), {1}, 5, split_extension(constant(0, 0), constant(0, 0),
                                                                       SplittingKind::SplitsEverywhere),
                                 {jumps[0], jumps[0]}),
                  ModelError);
}

TEST_CASE("allowable modification on a smooth fibre") {
  SurfaceModel x = hopf_like();
  NSLattice ns(IntMatrix{{-2}});
  BasePoint at = P1Point::finite(Complex(0.5, -0.5));
  auto e = make_filtrable(line(4), {1}, 6,
                          split_extension(constant(0.3, 0.3), constant(0.3, 0.3), SplittingKind::SplitsEverywhere),
                          {{at, std::nullopt, 3, {2, 2, 1}}});
  auto once = allowable_modification(e, at, x);
  CHECK(once.c2 == 4);
  CHECK(degree(once.determinant, x).rational == Rational(3));
  CHECK(once.determinant_class == e.determinant_class);
  REQUIRE(once.jumps.size() == 1);
  CHECK(once.jumps[0].sequence == std::vector<int>{2, 1});
  CHECK(once.jumps[0].length == 2);
  CHECK(once.cover.vertical[0].multiplicity == 3);
  CHECK(discriminant(e, ns) - discriminant(once, ns) == Rational(1));
  CHECK(jump_free_discriminant(once, ns) == jump_free_discriminant(e, ns));
  CHECK(nu_invariant(e) - nu_invariant(once) == Rational(1));

  auto clean = remove_jump(e, at, x);
  CHECK(clean.jumps.empty());
  CHECK(clean.cover.vertical.empty());
  CHECK(clean.c2 == 1);
  CHECK(degree(clean.determinant, x).rational == Rational(1));
  CHECK(discriminant(clean, ns) == jump_free_discriminant(e, ns));

  CHECK_THROWS_AS(allowable_modification(e, P1Point::finite(7.0), x), DomainError);
  CHECK_THROWS_AS(allowable_modification(clean, at, x), DomainError);
}

TEST_CASE("removing a jump on a multiple fibre of multiplicity 3 lowers the degree by 2/3") {
  BasePoint t0 = P1Point::infinity();
  SurfaceModel x = hopf_like({{3, t0}});
  NSLattice ns(IntMatrix{{0}});
  auto e = make_filtrable(line(1, {2}), {0}, 3,
                          split_extension(constant(0, 0), constant(0, 0), SplittingKind::SplitsEverywhere),
                          {{t0, 3, 2, {2, 1}}});
  Degree before = degree(e.determinant, x);
  auto after = remove_all_jumps(e, x);
  CHECK(before.rational - degree(after.determinant, x).rational == Rational(2, 3));
  CHECK(after.determinant.fibre_coeffs == std::vector<std::int64_t>{0});
  CHECK(after.determinant.base_chern == 1);
  CHECK(after.c2 == 0);
  CHECK(degree(after.determinant, x).rational == degree(e.determinant, x).rational - nu_invariant(e));

  // a jump declared on a smooth fibre where X has a multiple one is rejected
  auto wrong = make_filtrable(line(1, {2}), {0}, 3,
                              split_extension(constant(0, 0), constant(0, 0), SplittingKind::SplitsEverywhere),
                              {{t0, std::nullopt, 1, {1}}});
  CHECK_THROWS_AS(allowable_modification(wrong, t0, x), ModelError);
  auto wrong_m = make_filtrable(line(1, {2}), {0}, 3,
                                split_extension(constant(0, 0), constant(0, 0), SplittingKind::SplitsEverywhere),
                                {{t0, 2, 1, {1}}});
  CHECK_THROWS_AS(allowable_modification(wrong_m, t0, x), ModelError);
}

TEST_CASE("Psi fibre classification partitions the admissible triples") {
  int counts[3] = {0, 0, 0};
  int rejected = 0;
  for (std::int64_t c2 = 0; c2 <= 6; ++c2)
    for (int h0 = 1; h0 <= 6; ++h0)
      for (int h1 = 0; h1 <= 6; ++h1) // 0 encodes an absent h1
        for (int l = 0; l <= 6; ++l) {
          std::optional<int> first = h1 == 0 ? std::nullopt : std::optional<int>(h1);
          const bool admissible = c2 >= h0 && (h1 > 0) == (l > 0) && h1 <= h0;
          CAPTURE(c2);
          CAPTURE(h0);
          CAPTURE(h1);
          CAPTURE(l);
          if (!admissible) {
            CHECK_THROWS_AS(psi_fibre_classify(c2, h0, first, l), DomainError);
            ++rejected;
            continue;
          }
          PsiFibre f = psi_fibre_classify(c2, h0, first, l);
          const bool pic_only = c2 == h0 || l == 0;
          const bool aut = !pic_only && h1 == h0;
          const bool product = !pic_only && h1 < h0;
          CHECK(int(pic_only) + int(aut) + int(product) == 1);
          if (pic_only) {
            CHECK(f.kind == PsiFibreKind::PicOnly);
            CHECK(f.pic_degree == -c2);
          } else if (aut) {
            CHECK(f.kind == PsiFibreKind::AutSL2);
          } else {
            CHECK(f.kind == PsiFibreKind::PicTimesAut);
            CHECK(f.pic_degree == -h0);
          }
          ++counts[static_cast<int>(f.kind)];
        }
  CHECK(counts[0] > 0);
  CHECK(counts[1] > 0);
  CHECK(counts[2] > 0);
  CHECK(rejected > 0);
}

TEST_CASE("Psi tower along a jump") {
  auto tower = psi_tower(3, {2, 1});
  REQUIRE(tower.size() == 2);
  CHECK(tower[0].kind == PsiFibreKind::PicTimesAut);
  CHECK(tower[0].pic_degree == -2);
  CHECK(tower[1].kind == PsiFibreKind::PicOnly);
  CHECK(tower[1].pic_degree == -1);

  auto flat = psi_tower(5, {2, 2});
  CHECK(flat[0].kind == PsiFibreKind::AutSL2);
  CHECK(flat[1].kind == PsiFibreKind::PicOnly);
  CHECK(flat[1].pic_degree == -3);

  auto exact = psi_tower(4, {2, 2});
  CHECK(exact[0].kind == PsiFibreKind::AutSL2);
  CHECK(exact[1].pic_degree == -2);

  CHECK_THROWS_AS(psi_tower(2, {2, 1}), DomainError);
  CHECK_THROWS_AS(psi_tower(5, {1, 2}), ModelError);
  CHECK(tower[0].description().find("Pic^{-2}") != std::string::npos);
  CHECK(flat[0].description().find("Aut") != std::string::npos);
}

TEST_CASE("consistency: coincident sections need Delta = 0") {
  SurfaceModel x = hopf_like();
  NSLattice ns(IntMatrix{{0}});
  auto good = make_filtrable(line(2), {0}, 0,
                             split_extension(constant(0.2, 0.7), constant(0.2, 0.7), SplittingKind::SplitsEverywhere));
  CHECK(consistency_check(good, ns, x).empty());

  auto bad = make_filtrable(line(2), {0}, 2,
                            split_extension(constant(0.2, 0.7), constant(0.2, 0.7), SplittingKind::SplitsEverywhere));
  auto findings = consistency_check(bad, ns, x);
  CHECK(has_code(findings, "multiple-section-discriminant"));
  CHECK(has_code(findings, "extension-discriminant"));

  // jumps absorb the excess c2
  auto jumped = make_filtrable(line(2), {0}, 2,
                               split_extension(constant(0.2, 0.7), constant(0.2, 0.7), SplittingKind::SplitsEverywhere),
                               {{P1Point::finite(0.0), std::nullopt, 1, {2}}});
  CHECK(consistency_check(jumped, ns, x).empty());

  auto mode = make_filtrable(line(2), {0}, 0,
                             split_extension(constant(0.2, 0.7), constant(0.2, 0.7),
                                             SplittingKind::NontrivialOnFinitely, 1));
  CHECK(has_code(consistency_check(mode, ns, x), "splitting-mode"));
}

TEST_CASE("consistency: distinct sections meet in 4 Delta points") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    auto fx = gen::random_elliptic_extension(rng);
    CAPTURE(fx.intersections);
    CHECK(jump_free_discriminant(fx.bundle, fx.ns) * Rational(4) == Rational(fx.intersections));
    auto findings = consistency_check(fx.bundle, fx.ns, fx.surface);
    for (const auto &f : findings)
      MESSAGE(f.code << ": " << f.message);
    CHECK(findings.empty());

    // shifting c2 breaks the count
    auto off = fx.bundle;
    off.c2 += 2;
    auto broken = consistency_check(off, fx.ns, fx.surface);
    CHECK(has_code(broken, "intersection-count"));
    CHECK(has_code(broken, "extension-discriminant"));

    // more non-split fibres than intersection points
    auto many = fx.bundle;
    many.extension->splitting.n = static_cast<int>(fx.intersections) + 1;
    CHECK(has_code(consistency_check(many, fx.ns, fx.surface), "nontrivial-count"));
  }
}

TEST_CASE("consistency: Delta = 0 with distinct sections forces global splitting") {
  SurfaceModel x = hopf_like();
  NSLattice ns(IntMatrix{{0}});
  auto split = make_filtrable(line(0), {0}, 0,
                              split_extension(constant(0.1, 0.1), constant(0.6, 0.4), SplittingKind::SplitsEverywhere));
  CHECK(consistency_check(split, ns, x).empty());
  auto nontrivial = make_filtrable(line(0), {0}, 0,
                                   split_extension(constant(0.1, 0.1), constant(0.6, 0.4),
                                                   SplittingKind::NontrivialOnFinitely, 1));
  auto findings = consistency_check(nontrivial, ns, x);
  CHECK(has_code(findings, "trivial-discriminant-splitting"));
  CHECK(has_code(findings, "nontrivial-count"));
  auto finite = make_filtrable(line(0), {0}, 0,
                               split_extension(constant(0.1, 0.1), constant(0.6, 0.4), SplittingKind::SplitsOnFinitely, 1));
  CHECK(has_code(consistency_check(finite, ns, x), "splitting-mode"));
}

TEST_CASE("consistency: structural mismatches") {
  SurfaceModel x = hopf_like({{2, P1Point::finite(1.0)}});
  NSLattice ns(IntMatrix{{0}});
  BasePoint b = P1Point::finite(1.0);
  auto e = make_filtrable(line(0, {1}), {0}, 1,
                          split_extension(constant(0.5, 0.5), constant(0.5, 0.5), SplittingKind::SplitsEverywhere),
                          {{b, 2, 1, {1}}});
  CHECK(consistency_check(e, ns, x).empty());

  auto vertical = e;
  vertical.cover.vertical[0].multiplicity = 2;
  CHECK(has_code(consistency_check(vertical, ns, x), "vertical-jump-mismatch"));

  auto missing = e;
  missing.cover.vertical.clear();
  CHECK(has_code(consistency_check(missing, ns, x), "vertical-jump-mismatch"));

  auto fibre_type = e;
  fibre_type.jumps[0].fibre_multiplicity = 5;
  CHECK(has_code(consistency_check(fibre_type, ns, x), "jump-fibre-type"));

  auto cover = e;
  cover.cover.horizontal = ReducibleBisection{constant(0.1, 0.1), constant(0.5, 0.5)};
  CHECK(has_code(consistency_check(cover, ns, x), "cover-extension-mismatch"));

  auto unfiltrable = e;
  unfiltrable.extension.reset();
  CHECK(has_code(consistency_check(unfiltrable, ns, x), "unfiltrable-cover"));

  auto filtrable_irreducible = e;
  filtrable_irreducible.cover.horizontal = IrreducibleBisection{AbstractSection{2}};
  CHECK(has_code(consistency_check(filtrable_irreducible, ns, x), "filtrable-cover"));

  auto irreducible = make_unfiltrable(line(0, {0}), {0}, 2, AbstractSection{2});
  CHECK(consistency_check(irreducible, ns, x).empty());

  auto ranks = e;
  ranks.determinant_class = {0, 0};
  CHECK(has_code(consistency_check(ranks, ns, x), "class-rank"));
}

TEST_CASE("consistency: below the filtrability bound") {
  SurfaceModel x = hopf_like();
  NSLattice ns(IntMatrix{{-2}});
  // c1 = 1: m = 1/4, and c2 = -1 gives Delta = -1/4 < m
  auto e = make_filtrable(line(0), {1}, -1,
                          split_extension(constant(0, 0), constant(0, 0), SplittingKind::SplitsEverywhere));
  auto findings = consistency_check(e, ns, x);
  CHECK(has_code(findings, "not-filtrable"));
}

TEST_CASE("consistency: destabilising degree pinned when the sections coincide") {
  SurfaceModel x = hopf_like();
  NSLattice ns(IntMatrix{{0}});
  auto ext = split_extension(constant(0.25, 0.5), constant(0.25, 0.5), SplittingKind::SplitsOnFinitely, 2);
  ext.destab_bundle = line(2);
  // deg K_1 = (deg delta - nu + n + deg omega) / 2 = (2 - 0 + 2 + 0) / 2
  auto e = make_filtrable(line(2), {0}, 0, ext);
  CHECK(consistency_check(e, ns, x).empty());
  e.extension->destab_bundle = line(1);
  CHECK(has_code(consistency_check(e, ns, x), "destab-degree-pin"));

  e.extension->destab_bundle = line(2);
  e.extension->destab_bundle->section = constant(0.0, 0.25);
  CHECK(has_code(consistency_check(e, ns, x), "destab-section"));
}

TEST_CASE("splitting kind names") {
  CHECK(to_string(SplittingKind::SplitsEverywhere) == "splits-everywhere");
  CHECK(to_string(SplittingKind::SplitsOnFinitely) == "splits-on-finitely");
  CHECK(to_string(SplittingKind::NontrivialOnFinitely) == "nontrivial-on-finitely");
}
