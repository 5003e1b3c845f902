#include "cli.hpp"

#include "config.hpp"
#include "schema.hpp"
#include "smod/errors.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace smod::cli {
namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Serialisation of library values

json real(double x) {
  if (!std::isfinite(x))
    return nullptr;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  double y = std::strtod(buf, nullptr);
  return y == 0.0 ? 0.0 : y;
}

json rational(const Rational &r) { return to_string(r); }

json optional_rational(const std::optional<Rational> &r) { return r ? rational(*r) : json(nullptr); }

json complex(Complex z) { return {{"re", real(z.real())}, {"im", real(z.imag())}}; }

json point(const P1Point &p) {
  if (p.infinite)
    return {{"infinity", true}};
  return complex(p.value);
}

json torus(const TorusPoint &p) { return {{"s", real(p.s())}, {"t", real(p.t())}}; }

json degree(const Degree &d) {
  return {{"rational", rational(d.rational)}, {"real", real(d.real)}, {"value", real(d.value())}};
}

json section(const Section &s) {
  if (const auto *c = std::get_if<ConstantSection>(&s))
    return {{"constant", torus(c->lambda)}};
  const auto &a = std::get<AffineSection>(s);
  return {{"affine", {{"u", complex(a.u)}, {"c", torus(a.c)}}}};
}

json line_bundle(const LineBundleModel &l) {
  json j = {{"base_chern", l.base_chern}, {"alpha", complex(l.alpha)}, {"fibre_coeffs", l.fibre_coeffs}};
  if (l.section)
    j["section"] = section(*l.section);
  return j;
}

std::string_view to_string(PsiFibreKind k) {
  switch (k) {
  case PsiFibreKind::AutSL2:
    return "AutSL2";
  case PsiFibreKind::PicTimesAut:
    return "PicTimesAut";
  case PsiFibreKind::PicOnly:
    break;
  }
  return "PicOnly";
}

json psi_fibre(const PsiFibre &f) {
  return {{"kind", to_string(f.kind)}, {"pic_degree", f.pic_degree}, {"fibre", f.description()}};
}

json error_report(const std::string &command, const std::string &kind, const std::string &message) {
  return {{"command", command}, {"error", {{"kind", kind}, {"message", message}}}};
}

// ---------------------------------------------------------------------------
// Shared pipeline pieces

const NSLattice &need_ns(const ProblemConfig &cfg) {
  if (!cfg.ns)
    throw MissingSection("config has no \"ns\" section");
  return *cfg.ns;
}

const ChernData &need_chern(const ProblemConfig &cfg) {
  if (!cfg.chern)
    throw MissingSection("config has no \"chern\" section");
  return *cfg.chern;
}

const GraphConfig &need_graph(const ProblemConfig &cfg) {
  if (!cfg.graph)
    throw MissingSection("config has no \"graph\" section");
  return *cfg.graph;
}

ModuliContext context_of(const ProblemConfig &cfg) {
  const ChernData &c = need_chern(cfg);
  const LineBundleModel det = cfg.determinant ? *cfg.determinant : trivial_bundle(cfg.surface);
  return make_context(cfg.surface, need_ns(cfg), c.c1, det, c.c2);
}

/// The section delta_b defining the involution: given explicitly, or read off the determinant.
std::optional<Section> involution_section(const ProblemConfig &cfg) {
  if (cfg.graph && cfg.graph->involution)
    return cfg.graph->involution;
  if (cfg.determinant && cfg.determinant->section)
    return cfg.determinant->section;
  return std::nullopt;
}

struct Part {
  json value;
  bool needs_data = false;
};

Part graph_image_part(const ModuliContext &ctx, const ProblemConfig &cfg, double eps) {
  const GraphConfig &g = need_graph(cfg);
  GraphQuery q = g.query;
  json out;
  const bool missing_set = !q.excluded_i || !q.excluded_j;
  if (missing_set && !g.alpha_grid.empty()) {
    if (auto inv = involution_section(cfg)) {
      WeierstrassP wp(cfg.surface.fibre(), cfg.options.wp_terms);
      const auto found = excluded_constants(ctx, wp, Involution{*inv}, g.alpha_grid, eps);
      std::vector<P1Point> points;
      json listed = json::array();
      for (const auto &c : found) {
        points.push_back(c.projection);
        listed.push_back({{"alpha", complex(c.alpha)}, {"lambda0", torus(c.lambda0)}, {"projection", point(c.projection)}});
      }
      if (!q.excluded_i)
        q.excluded_i = points;
      if (!q.excluded_j)
        q.excluded_j = points;
      out["excluded_candidates"] = listed;
    }
  }
  const ImageVerdict v = graph_image_membership(ctx, q);
  out["result"] = to_string(v.status);
  out["reason"] = v.reason;
  return {out, v.status == ImageStatus::NeedsData};
}

Part fibre_part(const ModuliContext &ctx, const ProblemConfig &cfg, const ModuliReport &rep) {
  const GraphConfig &g = need_graph(cfg);
  if (rep.empty)
    return {{{"type", "Empty"}, {"reason", rep.reason}}, false};

  if (!g.query.graph.vertical.empty()) {
    if (!g.jump_plan)
      return {{{"type", "NeedsData"},
               {"reason", "graph has vertical components; graph.jump_plan must give their jumping sequences"}},
              true};
    json chains = json::array();
    for (const auto &chain : jump_fibre_describe(ctx, g.query.graph, *g.jump_plan)) {
      json steps = json::array();
      for (const auto &s : chain.steps)
        steps.push_back(psi_fibre(s));
      chains.push_back({{"base_point", point(chain.base_point)}, {"steps", steps}});
    }
    return {{{"type", "JumpTower"}, {"chains", chains}}, false};
  }

  const auto inv = involution_section(cfg);
  if (!inv)
    return {{{"type", "NeedsData"},
             {"reason", "the involution needs delta_b: set graph.involution or determinant.section"}},
            true};
  FibreQuery q{g.query, Involution{*inv}, cfg.options.wp_terms, g.candidates, MonodromyOptions{cfg.options.loop_points}};
  const FibreDescription d = fibre_describe(ctx, q);
  json comps = json::array();
  for (const auto &c : d.components)
    comps.push_back({{"destab_bundle", line_bundle(c.destab_bundle)},
                     {"degree", degree(c.degree)},
                     {"required_regular_fibres", c.required_regular_fibres}});
  json out = {{"type", to_string(d.type)},
              {"prym_dim", optional_rational(d.prym_dim)},
              {"copies", d.copies.empty() ? json(nullptr) : json(d.copies)},
              {"components", comps},
              {"rejected_candidates", d.rejected_candidates},
              {"diagnostics", d.diagnostics}};
  return {out, d.type == FibreType::Indeterminate};
}

json poisson(const std::optional<PoissonReport> &p) {
  if (!p)
    return nullptr;
  return {{"kind", to_string(p->kind)},
          {"dim", rational(p->dim)},
          {"rank", optional_rational(p->rank)},
          {"literal_rank", optional_rational(p->literal_rank)},
          {"generic_rank", optional_rational(p->generic_rank)},
          {"regular_over_divisor", p->regular_over_divisor},
          {"discrepancy", p->discrepancy},
          {"drop_locus", p->drop_locus}};
}

json audit(const AuditRecord &a) {
  return {{"applicable", a.applicable},
          {"dim", rational(a.dim)},
          {"fibre_dim", rational(a.fibre_dim)},
          {"base_dim", rational(a.base_dim)},
          {"lagrangian_balance", a.lagrangian_balance ? json(*a.lagrangian_balance) : json(nullptr)}};
}

// ---------------------------------------------------------------------------
// Commands

CommandResult surface_info(const ProblemConfig &cfg) {
  const SurfaceModel &x = cfg.surface;
  json fibres = json::array();
  for (const auto &f : x.multiple_fibres())
    fibres.push_back({{"multiplicity", f.multiplicity}, {"base_point", point(f.base_point)}});
  json r = {{"base_genus", x.base_genus()},
            {"theta_degree", x.theta_degree()},
            {"tau", complex(x.tau())},
            {"tau_modulus", real(std::abs(x.tau()))},
            {"fibre_tau", complex(x.fibre().tau())},
            {"multiple_fibres", fibres},
            {"relative_dualising_degree", degree(relative_dualising_degree(x))},
            {"poisson", to_string(poisson_exists(x))}};
  return {r, kOk};
}

CommandResult stability(const ProblemConfig &cfg, double eps) {
  if (!cfg.bundle)
    throw MissingSection("config has no \"bundle\" section");
  const BundleDescriptor &e = *cfg.bundle;
  const NSLattice &ns = need_ns(cfg);
  const SurfaceModel &x = cfg.surface;

  const auto findings = consistency_check(e, ns, x);
  if (!findings.empty()) {
    json list = json::array();
    for (const auto &f : findings)
      list.push_back({{"code", f.code}, {"message", f.message}});
    json r = error_report("stability", "consistency", "bundle descriptor is inconsistent");
    r["error"]["findings"] = list;
    return {r, kInvalid};
  }

  const StabilityVerdict v = e.filtrable() ? stability_check(e, x, eps) : is_stable_unfiltrable(e);
  const Rational delta = discriminant(e, ns);
  const bool corollary = e.filtrable() && e.jumps.empty() && delta == Rational(0);
  if (corollary && corollary_unstable(e, ns, x) == v.stable)
    throw InvariantViolation("trivial-discriminant filtrable bundle was judged stable");

  json r = {{"filtrable", e.filtrable()},
            {"stable", v.stable},
            {"route", to_string(v.route)},
            {"case", v.case_tag == FiltrableCase::None ? json(nullptr) : json(to_string(v.case_tag))},
            {"discriminant", rational(delta)},
            {"nu", e.filtrable() ? rational(nu_invariant(e)) : json(nullptr)},
            {"corollary_applies", corollary},
            {"margin_warning", v.margin_warning},
            {"warnings", v.warnings}};
  r["witness"] = v.witness ? json{{"degree", degree(v.witness->degree)}, {"threshold", degree(v.witness->threshold)}}
                           : json(nullptr);
  return {r, v.stable ? kOk : kUnstable};
}

CommandResult moduli(const ProblemConfig &cfg, double eps) {
  const ModuliContext ctx = context_of(cfg);
  const ModuliReport rep = moduli_report(ctx);
  json smooth = {{"smooth_everywhere", rep.smooth_everywhere},
                 {"regular_locus_smooth", rep.regular_locus_smooth},
                 {"gamma_lhs", rational(rep.gamma_condition.lhs)},
                 {"gamma", optional_rational(cfg.options.gamma)},
                 {"gamma_holds", cfg.options.gamma ? json(rep.gamma_condition.holds(*cfg.options.gamma)) : json(nullptr)}};
  json r = {{"m", rational(context_m(ctx))},
            {"discriminant", rational(context_discriminant(ctx))},
            {"delta_class", ctx.delta_class},
            {"delta_degree", degree(ctx.delta_degree)},
            {"c2", ctx.c2},
            {"empty", rep.empty},
            {"reason", rep.reason},
            {"expected_dim", rational(rep.expected_dim)},
            {"smoothness", smooth},
            {"poisson", poisson(rep.poisson)},
            {"audit", audit(rep.audit)},
            {"graph_image", nullptr},
            {"fibre", nullptr}};
  bool needs = false;
  if (cfg.graph) {
    Part image = graph_image_part(ctx, cfg, eps);
    Part fibre = fibre_part(ctx, cfg, rep);
    r["graph_image"] = image.value;
    r["fibre"] = fibre.value;
    needs = image.needs_data || fibre.needs_data;
  }
  return {r, needs ? kNeedsData : kOk};
}

CommandResult graph_image(const ProblemConfig &cfg, double eps) {
  const ModuliContext ctx = context_of(cfg);
  Part p = graph_image_part(ctx, cfg, eps);
  return {p.value, p.needs_data ? kNeedsData : kOk};
}

CommandResult fibre(const ProblemConfig &cfg) {
  const ModuliContext ctx = context_of(cfg);
  Part p = fibre_part(ctx, cfg, moduli_report(ctx));
  return {p.value, p.needs_data ? kNeedsData : kOk};
}

CommandResult m2(const ProblemConfig &cfg) {
  const NSLattice &ns = need_ns(cfg);
  const ChernData &c = need_chern(cfg);
  const C2Range range = c2_admissible_range(ns, c.c1);
  json r = {{"m", rational(m_two(ns, c.c1))},
            {"delta_class", select_delta_class(ns, c.c1)},
            {"c2", c.c2},
            {"c2_min", rational(range.c2_min)},
            {"band", {{"low", rational(range.band_low)}, {"high", rational(range.band_high)}, {"empty", range.band_empty()}}},
            {"c2_in_band", range.in_band(c.c2)},
            {"discriminant", rational(discriminant_numeric(ns, c))},
            {"filtrable_exists", filtrable_exists(ns, c)}};
  return {r, kOk};
}

CommandResult psi(const ProblemConfig &cfg) {
  if (!cfg.psi)
    throw MissingSection("config has no \"psi\" section");
  const PsiConfig &p = *cfg.psi;
  if (!p.h0 && !p.sequence)
    throw MissingSection("psi needs h0 and l, or a jumping sequence");
  json r = {{"c2", p.c2}};
  if (p.h0) {
    if (!p.length)
      throw MissingSection("psi.h0 is given without psi.l");
    const PsiFibre f = psi_fibre_classify(p.c2, *p.h0, p.h1, *p.length);
    r.update(psi_fibre(f));
  }
  if (p.sequence) {
    json tower = json::array();
    for (const auto &f : psi_tower(p.c2, *p.sequence))
      tower.push_back(psi_fibre(f));
    r["tower"] = tower;
  }
  return {r, kOk};
}

CommandResult dispatch(const std::string &command, const ProblemConfig &cfg, double eps) {
  if (command == "surface-info")
    return surface_info(cfg);
  if (command == "stability")
    return stability(cfg, eps);
  if (command == "moduli")
    return moduli(cfg, eps);
  if (command == "graph-image")
    return graph_image(cfg, eps);
  if (command == "fibre")
    return fibre(cfg);
  if (command == "m2")
    return m2(cfg);
  if (command == "psi")
    return psi(cfg);
  throw MissingSection("unknown command " + command);
}

// ---------------------------------------------------------------------------
// Text rendering

std::string label(const std::string &key) {
  std::string s = key;
  std::replace(s.begin(), s.end(), '_', ' ');
  if (!s.empty())
    s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

std::string scalar_text(const json &v) {
  if (v.is_string())
    return v.get<std::string>();
  if (v.is_null())
    return "none";
  return v.dump();
}

bool flat(const json &v) {
  return std::all_of(v.begin(), v.end(), [](const json &e) { return !e.is_structured(); });
}

void render_text(const json &j, int indent, std::string &out) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (const auto &[key, v] : j.items()) {
    if (v.is_object() && !v.empty()) {
      out += pad + label(key) + ":\n";
      render_text(v, indent + 2, out);
    } else if (v.is_array() && !flat(v)) {
      out += pad + label(key) + ":\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        out += pad + "  [" + std::to_string(i) + "]\n";
        if (v[i].is_object())
          render_text(v[i], indent + 4, out);
        else
          out += pad + "    " + v[i].dump() + "\n";
      }
    } else if (v.is_array()) {
      std::string items;
      for (const auto &e : v)
        items += (items.empty() ? "" : ", ") + scalar_text(e);
      out += pad + label(key) + ": [" + items + "]\n";
    } else {
      out += pad + label(key) + ": " + scalar_text(v) + "\n";
    }
  }
}

// ---------------------------------------------------------------------------
// Batch mode

struct BatchItem {
  std::string name;
  CommandResult result;
};

std::vector<std::filesystem::path> config_files(const std::filesystem::path &dir) {
  std::vector<std::filesystem::path> files;
  for (const auto &entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

std::string format_of_file(const std::string &path, const RunOptions &opts) {
  if (opts.output)
    return *opts.output;
  try {
    std::ifstream in(path);
    return output_format(json::parse(in), opts);
  } catch (const std::exception &) {
    return "json";
  }
}

int run_batch(const std::string &command, const std::filesystem::path &dir, const RunOptions &opts, int jobs,
              std::ostream &out) {
  const auto files = config_files(dir);
  std::vector<BatchItem> items(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      items[i].name = files[i].filename().string();
      items[i].result = run_file(command, files[i].string(), opts);
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(files.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t)
    pool.emplace_back(worker);
  worker();
  for (auto &t : pool)
    t.join();

  int code = kOk;
  const std::string format = opts.output.value_or("json");
  if (format == "json") {
    json all = json::array();
    for (const auto &it : items)
      all.push_back({{"file", it.name}, {"exit_code", it.result.exit_code}, {"report", it.result.report}});
    out << all.dump(2) << "\n";
  } else {
    for (const auto &it : items)
      out << "== " << it.name << " (exit " << it.result.exit_code << ")\n" << render(it.result.report, "text");
  }
  for (const auto &it : items)
    code = std::max(code, it.result.exit_code);
  return code;
}

} // namespace

const std::vector<std::string> &command_names() {
  static const std::vector<std::string> names = {"surface-info", "stability", "moduli", "graph-image",
                                                 "fibre",        "m2",        "psi"};
  return names;
}

std::string output_format(const nlohmann::json &doc, const RunOptions &opts) {
  if (opts.output)
    return *opts.output;
  if (doc.is_object() && doc.contains("options") && doc["options"].is_object() && doc["options"].contains("output") &&
      doc["options"]["output"].is_string())
    return doc["options"]["output"].get<std::string>();
  return "json";
}

CommandResult run_command(const std::string &command, const nlohmann::json &doc, const RunOptions &opts) {
  CommandResult result;
  try {
    const ProblemConfig cfg = load_config(doc);
    const double eps = opts.epsilon.value_or(cfg.options.epsilon);
    result = dispatch(command, cfg, eps);
  } catch (const SchemaError &e) {
    result = {error_report(command, "schema", "config does not match the schema"), kInvalid};
    result.report["error"]["problems"] = e.problems();
  } catch (const MissingSection &e) {
    result = {error_report(command, "missing-section", e.what()), kInvalid};
  } catch (const NoPoissonStructure &e) {
    result = {error_report(command, "no-poisson-structure", e.what()), kInvalid};
  } catch (const ModelError &e) {
    result = {error_report(command, "model", e.what()), kInvalid};
  } catch (const DomainError &e) {
    result = {error_report(command, "domain", e.what()), kInvalid};
  } catch (const NoConvergence &e) {
    result = {error_report(command, "no-convergence", e.what()), kInvalid};
  } catch (const InvariantViolation &e) {
    result = {error_report(command, "invariant-violation", e.what()), kInvalid};
  } catch (const std::exception &e) {
    result = {error_report(command, "internal", e.what()), kInvalid};
  }
  result.report["command"] = command;
  return result;
}

CommandResult run_file(const std::string &command, const std::string &path, const RunOptions &opts) {
  std::ifstream in(path);
  if (!in)
    return {error_report(command, "io", "cannot open " + path), kInvalid};
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error &e) {
    return {error_report(command, "parse", e.what()), kInvalid};
  }
  return run_command(command, doc, opts);
}

std::string render(const nlohmann::json &report, const std::string &format) {
  if (format == "text") {
    std::string out;
    render_text(report, 0, out);
    return out;
  }
  return report.dump(2) + "\n";
}

int main_entry(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Stable rank-2 bundles on non-Kahler elliptic surfaces: stability, moduli and graph-map reports"};
  app.require_subcommand(1);

  std::string config;
  std::string output;
  double epsilon = 0.0;
  int jobs = 1;
  const std::vector<std::pair<std::string, std::string>> descriptions = {
      {"surface-info", "genus, fibre data, deg omega_{X/B} and Poisson structure of the surface"},
      {"stability", "stability verdict for the bundle descriptor (exit 1 when unstable)"},
      {"moduli", "emptiness, dimension, smoothness, Poisson and audit report for M_{delta,c2}"},
      {"graph-image", "whether the graph lies in the image of the graph map"},
      {"fibre", "fibre of the graph map over the graph"},
      {"m2", "m(2,c1), the selected delta class and the admissible c2 range"},
      {"psi", "fibre type of Psi, or the tower along a jumping sequence"}};
  std::vector<CLI::Option *> eps_opts;
  for (const auto &[name, text] : descriptions) {
    CLI::App *sub = app.add_subcommand(name, text);
    sub->add_option("--config", config, "config file, or a directory of *.json configs")->required();
    sub->add_option("--output", output, "json or text")->check(CLI::IsMember({"json", "text"}));
    eps_opts.push_back(sub->add_option("--epsilon", epsilon, "tolerance on real parts of degrees")
                           ->check(CLI::PositiveNumber));
    sub->add_option("--jobs", jobs, "worker threads for a config directory")->check(CLI::Range(1, 256));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalid;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  RunOptions opts;
  if (!output.empty())
    opts.output = output;
  for (const auto *o : eps_opts)
    if (o->count() > 0)
      opts.epsilon = epsilon;

  std::error_code ec;
  if (std::filesystem::is_directory(config, ec))
    return run_batch(command, config, opts, jobs, out);

  const CommandResult r = run_file(command, config, opts);
  out << render(r.report, format_of_file(config, opts));
  return r.exit_code;
}

} // namespace smod::cli
