#ifndef SMOD_TOOLS_SCHEMA_HPP
#define SMOD_TOOLS_SCHEMA_HPP

#include <json.hpp>

#include <string>
#include <vector>

namespace smod::cli {

/// Validates against the subset of JSON Schema draft-07 used by the published
/// schemas: type, enum, const, properties, required, additionalProperties,
/// items, minItems, minimum, exclusiveMinimum, pattern, oneOf and local $ref.
/// Returns one message per violation, each prefixed with a JSON pointer.
std::vector<std::string> validate(const nlohmann::json &instance, const nlohmann::json &schema);

/// The schemas shipped in docs/, embedded at build time.
const nlohmann::json &config_schema();
const nlohmann::json &report_schema();

} // namespace smod::cli

#endif
