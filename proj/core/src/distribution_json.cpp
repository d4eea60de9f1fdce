#include "realspec/distribution_json.hpp"

#include <set>
#include <string>

#include "realspec/error.hpp"

namespace realspec {
namespace {

const std::set<std::string>& allowed_params(Family f) {
  static const std::set<std::string> none;
  static const std::set<std::string> gamma = {"gamma"};
  static const std::set<std::string> beta = {"mu", "nu"};
  static const std::set<std::string> eta = {"eta"};
  static const std::set<std::string> a = {"a"};
  static const std::set<std::string> lognormal = {"mu_log", "sigma_log", "K", "base"};
  switch (f) {
    case Family::SymmetricGamma: return gamma;
    case Family::SymmetricBeta: return beta;
    case Family::SmoothBounded: return eta;
    case Family::PowerLaw: return a;
    case Family::LogNormalProduct: return lognormal;
    default: return none;
  }
}

double number_field(const nlohmann::json& params, const char* key) {
  if (!params.contains(key)) throw ConfigError(std::string("missing parameter '") + key + "'");
  const auto& v = params.at(key);
  if (!v.is_number()) throw ConfigError(std::string("parameter '") + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

nlohmann::json to_json(const DistributionSpec& spec) {
  nlohmann::json params = nlohmann::json::object();
  switch (spec.family) {
    case Family::SymmetricGamma: params["gamma"] = spec.gamma; break;
    case Family::SymmetricBeta:
      params["mu"] = spec.mu;
      params["nu"] = spec.nu;
      break;
    case Family::SmoothBounded: params["eta"] = spec.eta; break;
    case Family::PowerLaw: params["a"] = spec.a; break;
    case Family::LogNormalProduct:
      params["mu_log"] = spec.mu_log;
      params["sigma_log"] = spec.sigma_log;
      params["K"] = spec.K;
      break;
    default: break;
  }
  return {{"family", std::string(family_name(spec.family))}, {"params", params}, {"scale", spec.scale}};
}

DistributionSpec distribution_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("distribution must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "family" && key != "params" && key != "scale")
      throw ConfigError("unexpected distribution field '" + key + "'");
  }
  if (!j.contains("family") || !j.at("family").is_string())
    throw ConfigError("distribution.family must be a string");

  DistributionSpec spec;
  spec.family = family_from_name(j.at("family").get<std::string>());
  if (j.contains("scale")) {
    if (!j.at("scale").is_number()) throw ConfigError("distribution.scale must be a number");
    spec.scale = j.at("scale").get<double>();
  }

  nlohmann::json params = nlohmann::json::object();
  if (j.contains("params")) {
    params = j.at("params");
    if (!params.is_object()) throw ConfigError("distribution.params must be an object");
  }
  const auto& allowed = allowed_params(spec.family);
  for (const auto& [key, _] : params.items()) {
    if (!allowed.count(key))
      throw ConfigError("parameter '" + key + "' not valid for family " +
                        std::string(family_name(spec.family)));
  }

  switch (spec.family) {
    case Family::SymmetricGamma: spec.gamma = number_field(params, "gamma"); break;
    case Family::SymmetricBeta:
      spec.mu = number_field(params, "mu");
      spec.nu = number_field(params, "nu");
      break;
    case Family::SmoothBounded: spec.eta = number_field(params, "eta"); break;
    case Family::PowerLaw: spec.a = number_field(params, "a"); break;
    case Family::LogNormalProduct: {
      if (!params.contains("K") || !params.at("K").is_number_integer())
        throw ConfigError("lognormal_product needs integer parameter 'K'");
      const int K = params.at("K").get<int>();
      if (params.contains("base")) {
        if (params.contains("mu_log") || params.contains("sigma_log"))
          throw ConfigError("lognormal_product: give either 'base' or 'mu_log'/'sigma_log'");
        const double scale = spec.scale;
        spec = lognormal_surrogate(distribution_from_json(params.at("base")), K);
        spec.scale = scale;
      } else {
        spec.mu_log = number_field(params, "mu_log");
        spec.sigma_log = number_field(params, "sigma_log");
        spec.K = K;
      }
      break;
    }
    default: break;
  }
  spec.validate();
  return spec;
}

}  // namespace realspec
