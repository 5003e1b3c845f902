#ifndef SMOD_TOOLS_CONFIG_HPP
#define SMOD_TOOLS_CONFIG_HPP

#include "smod/bundles.hpp"
#include "smod/moduli.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace smod::cli {

/// The config failed schema validation; carries every violation found.
class SchemaError : public std::runtime_error {
public:
  explicit SchemaError(std::vector<std::string> problems);
  const std::vector<std::string> &problems() const { return problems_; }

private:
  std::vector<std::string> problems_;
};

/// A section of the config that the requested command cannot run without.
class MissingSection : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Options {
  double epsilon = kDefaultEpsilon;
  int wp_terms = kDefaultWpTerms;
  std::string output = "json";
  std::optional<Rational> gamma;
  int loop_points = 256;
};

struct GraphConfig {
  GraphQuery query;
  std::optional<Section> involution;
  std::vector<Complex> alpha_grid;
  std::vector<LineBundleModel> candidates;
  std::optional<std::vector<JumpPlan>> jump_plan;
};

struct PsiConfig {
  std::int64_t c2 = 0;
  std::optional<int> h0;
  std::optional<int> h1;
  std::optional<int> length;
  std::optional<std::vector<int>> sequence;
};

struct ProblemConfig {
  SurfaceModel surface;
  std::optional<NSLattice> ns;
  std::optional<ChernData> chern;
  std::optional<LineBundleModel> determinant;
  std::optional<BundleDescriptor> bundle;
  std::optional<GraphConfig> graph;
  std::optional<PsiConfig> psi;
  Options options;
};

/// Validates against the config schema, then builds the library objects.
/// Throws SchemaError, or the library's ModelError/DomainError for data the
/// schema accepts but the model rejects.
ProblemConfig load_config(const nlohmann::json &doc);

} // namespace smod::cli

#endif
