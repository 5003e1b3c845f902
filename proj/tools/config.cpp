#include "config.hpp"

#include "schema.hpp"
#include "smod/errors.hpp"

namespace smod::cli {
namespace {

using nlohmann::json;

std::string join_problems(const std::vector<std::string> &problems) {
  std::string s = "config does not match the schema";
  for (const auto &p : problems)
    s += "\n  " + p;
  return s;
}

Rational rational_of(const json &j) {
  if (j.is_number())
    return Rational(j.get<std::int64_t>());
  return parse_rational(j.get<std::string>());
}

Complex complex_of(const json &j) { return {j.at("re").get<double>(), j.at("im").get<double>()}; }

P1Point point_of(const json &j) {
  if (j.contains("infinity"))
    return P1Point::infinity();
  return P1Point::finite(complex_of(j));
}

IntVector ints_of(const json &j) { return j.get<IntVector>(); }

TorusPoint lattice_point_of(const json &j, const EllipticCurve &curve) {
  return TorusPoint(to_double(rational_of(j.at("s"))), to_double(rational_of(j.at("t"))), curve);
}

Section section_of(const json &j, const EllipticCurve &curve) {
  if (j.contains("constant"))
    return ConstantSection{lattice_point_of(j.at("constant"), curve)};
  const json &a = j.at("affine");
  return AffineSection{complex_of(a.at("u")), lattice_point_of(a.at("c"), curve)};
}

LineBundleModel line_bundle_of(const json &j, const SurfaceModel &x) {
  LineBundleModel l = trivial_bundle(x);
  l.section.reset(); // an omitted section is unknown, not the trivial bundle's
  if (j.contains("base_chern"))
    l.base_chern = j.at("base_chern").get<std::int64_t>();
  if (j.contains("alpha"))
    l.alpha = complex_of(j.at("alpha"));
  if (j.contains("fibre_coeffs")) {
    l.fibre_coeffs = j.at("fibre_coeffs").get<std::vector<std::int64_t>>();
    if (l.fibre_coeffs.size() != x.fibre_count())
      throw ModelError("fibre_coeffs has " + std::to_string(l.fibre_coeffs.size()) + " entries but the surface has " +
                       std::to_string(x.fibre_count()) + " multiple fibres");
  }
  if (j.contains("section")) {
    l.section = section_of(j.at("section"), x.fibre());
    validate_section(*l.section, x);
  }
  return l;
}

Polynomial polynomial_of(const json &j) {
  Polynomial p;
  for (const auto &c : j)
    p.push_back(complex_of(c));
  return p;
}

RuledSection ruled_section_of(const json &j) {
  RuledSection out;
  if (j.contains("rational_map")) {
    const json &m = j.at("rational_map");
    out = RationalMap{polynomial_of(m.at("numerator")), polynomial_of(m.at("denominator"))};
  } else if (j.contains("sampled")) {
    const json &m = j.at("sampled");
    SampledMap s;
    s.degree = m.at("degree").get<int>();
    for (const auto &loop : m.at("loops")) {
      std::vector<MapSample> samples;
      for (const auto &p : loop)
        samples.push_back({point_of(p.at("b")), point_of(p.at("w"))});
      s.loops.push_back(std::move(samples));
    }
    out = std::move(s);
  } else {
    out = AbstractSection{j.at("abstract").at("degree").get<int>()};
  }
  validate_ruled_section(out);
  return out;
}

std::vector<int> heights_of(const json &j) { return j.get<std::vector<int>>(); }

std::vector<JumpDescriptor> jumps_of(const json &j) {
  std::vector<JumpDescriptor> out;
  for (const auto &item : j) {
    JumpDescriptor jump;
    jump.base_point = point_of(item.at("base_point"));
    if (item.contains("fibre_multiplicity"))
      jump.fibre_multiplicity = item.at("fibre_multiplicity").get<int>();
    jump.length = item.at("length").get<int>();
    jump.sequence = heights_of(item.at("sequence"));
    validate_jump(jump);
    out.push_back(std::move(jump));
  }
  return out;
}

SplittingKind splitting_kind_of(const std::string &name) {
  for (auto kind : {SplittingKind::SplitsEverywhere, SplittingKind::SplitsOnFinitely,
                    SplittingKind::NontrivialOnFinitely})
    if (to_string(kind) == name)
      return kind;
  throw ModelError("unknown splitting kind " + name);
}

BundleDescriptor bundle_of(const json &j, const SurfaceModel &x) {
  const LineBundleModel det = line_bundle_of(j.at("determinant"), x);
  const IntVector det_class = ints_of(j.at("determinant_class"));
  const auto c2 = j.at("c2").get<std::int64_t>();
  std::vector<JumpDescriptor> jumps = j.contains("jumps") ? jumps_of(j.at("jumps")) : std::vector<JumpDescriptor>{};

  if (j.contains("extension") == j.contains("graph_section"))
    throw ModelError("bundle needs exactly one of \"extension\" (filtrable) or \"graph_section\" (unfiltrable)");

  if (j.contains("graph_section"))
    return make_unfiltrable(det, det_class, c2, ruled_section_of(j.at("graph_section")), std::move(jumps));

  const json &e = j.at("extension");
  ExtensionData ext;
  ext.destab_section = section_of(e.at("destab_section"), x.fibre());
  ext.other_section = section_of(e.at("other_section"), x.fibre());
  ext.destab_class = ints_of(e.at("destab_class"));
  if (e.contains("destab_bundle"))
    ext.destab_bundle = line_bundle_of(e.at("destab_bundle"), x);
  const json &sp = e.at("splitting");
  ext.splitting.kind = splitting_kind_of(sp.at("kind").get<std::string>());
  ext.splitting.n = sp.value("n", 0);
  return make_filtrable(det, det_class, c2, ext, std::move(jumps));
}

std::vector<P1Point> points_of(const json &j) {
  std::vector<P1Point> out;
  for (const auto &p : j)
    out.push_back(point_of(p));
  return out;
}

GraphConfig graph_of(const json &j, const SurfaceModel &x) {
  GraphConfig g;
  g.query.graph.section = ruled_section_of(j.at("section"));
  if (j.contains("vertical"))
    for (const auto &v : j.at("vertical"))
      g.query.graph.vertical.push_back({point_of(v.at("base_point")), v.at("multiplicity").get<int>()});
  if (j.contains("excluded_i"))
    g.query.excluded_i = points_of(j.at("excluded_i"));
  if (j.contains("excluded_j"))
    g.query.excluded_j = points_of(j.at("excluded_j"));
  if (j.contains("involution")) {
    g.involution = section_of(j.at("involution"), x.fibre());
    validate_section(*g.involution, x);
  }
  if (j.contains("alpha_grid"))
    for (const auto &a : j.at("alpha_grid"))
      g.alpha_grid.push_back(complex_of(a));
  if (j.contains("candidates"))
    for (const auto &c : j.at("candidates"))
      g.candidates.push_back(line_bundle_of(c, x));
  if (j.contains("jump_plan")) {
    std::vector<JumpPlan> plan;
    for (const auto &p : j.at("jump_plan"))
      plan.push_back({point_of(p.at("base_point")), heights_of(p.at("sequence"))});
    g.jump_plan = std::move(plan);
  }
  return g;
}

SurfaceModel surface_of(const json &j) {
  const int g = j.at("base_genus").get<int>();
  std::optional<EllipticCurve> base;
  if (j.contains("base_tau"))
    base = EllipticCurve(complex_of(j.at("base_tau")));
  std::vector<MultipleFibre> fibres;
  if (j.contains("multiple_fibres"))
    for (const auto &f : j.at("multiple_fibres"))
      fibres.push_back({f.at("multiplicity").get<int>(), point_of(f.at("base_point"))});
  return SurfaceModel(g, base, EllipticCurve(complex_of(j.at("fibre_tau"))), j.at("theta_degree").get<int>(),
                      complex_of(j.at("tau")), std::move(fibres));
}

} // namespace

SchemaError::SchemaError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

ProblemConfig load_config(const nlohmann::json &doc) {
  auto problems = validate(doc, config_schema());
  if (!problems.empty())
    throw SchemaError(std::move(problems));

  ProblemConfig cfg{surface_of(doc.at("surface")), {}, {}, {}, {}, {}, {}, {}};
  const SurfaceModel &x = cfg.surface;
  if (doc.contains("ns"))
    cfg.ns = NSLattice(doc.at("ns").at("gram").get<IntMatrix>());
  if (doc.contains("chern")) {
    const json &c = doc.at("chern");
    cfg.chern = ChernData{ints_of(c.at("c1")), c.at("c2").get<std::int64_t>()};
  }
  if (doc.contains("determinant"))
    cfg.determinant = line_bundle_of(doc.at("determinant"), x);
  if (doc.contains("bundle"))
    cfg.bundle = bundle_of(doc.at("bundle"), x);
  if (doc.contains("graph"))
    cfg.graph = graph_of(doc.at("graph"), x);
  if (doc.contains("psi")) {
    const json &p = doc.at("psi");
    PsiConfig psi;
    psi.c2 = p.at("c2").get<std::int64_t>();
    if (p.contains("h0"))
      psi.h0 = p.at("h0").get<int>();
    if (p.contains("h1") && !p.at("h1").is_null())
      psi.h1 = p.at("h1").get<int>();
    if (p.contains("l"))
      psi.length = p.at("l").get<int>();
    if (p.contains("sequence"))
      psi.sequence = heights_of(p.at("sequence"));
    cfg.psi = psi;
  }
  if (doc.contains("options")) {
    const json &o = doc.at("options");
    cfg.options.epsilon = o.value("epsilon", cfg.options.epsilon);
    cfg.options.wp_terms = o.value("wp_terms", cfg.options.wp_terms);
    cfg.options.output = o.value("output", cfg.options.output);
    cfg.options.loop_points = o.value("loop_points", cfg.options.loop_points);
    if (o.contains("gamma"))
      cfg.options.gamma = rational_of(o.at("gamma"));
  }
  if (cfg.ns && cfg.chern && cfg.chern->c1.size() != cfg.ns->rank())
    throw ModelError("chern.c1 has " + std::to_string(cfg.chern->c1.size()) + " entries but NS has rank " +
                     std::to_string(cfg.ns->rank()));
  return cfg;
}

} // namespace smod::cli
