#pragma once

#include <json.hpp>

#include "realspec/distributions.hpp"

namespace realspec {

/// {"family": "...", "params": {...}, "scale": s}. Field names follow
/// schemas/distribution.schema.json.
nlohmann::json to_json(const DistributionSpec& spec);

/// Parses and validates a distribution object. Unknown families, unknown or
/// missing parameters and wrong types raise ConfigError; out-of-range values
/// raise ParameterDomainError.
DistributionSpec distribution_from_json(const nlohmann::json& j);

}  // namespace realspec
