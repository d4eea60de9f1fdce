#pragma once

#include <json.hpp>

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "realspec/fit.hpp"
#include "realspec/matrix_lab.hpp"

namespace realspec::cli {

/// A Monte Carlo sweep over K for one or more entry laws. Field names follow
/// schemas/experiment.schema.json.
struct McExperiment {
  std::string name;
  std::vector<DistributionSpec> distributions;
  int n = 2;
  std::vector<int> K;
  ProductMode mode = ProductMode::Ordinary;
  long long samples = 100000;
  std::uint64_t seed = 42;
  double eig_tol = 1e-9;
  int threads = 0;
  /// real counts to report; empty means every k with k = n (mod 2)
  std::vector<int> k;
  std::string output;

  ExperimentConfig point(const DistributionSpec& spec, int K_value) const;
  std::vector<int> reported_k() const;
};

/// Throws ConfigError on any schema violation.
McExperiment parse_experiment(const nlohmann::json& j);
nlohmann::json to_json(const McExperiment& e);

std::string mc_csv_header();
/// One row per reported k.
std::string mc_csv_rows(const McExperiment& e, const ExperimentConfig& cfg, const RealCountTally& t);

/// Series keyed by "family,params,mode,n" read from an mc CSV, keeping rows
/// with the given k (k < 0 picks k = n).
std::map<std::string, std::vector<SeriesPoint>> read_series(std::istream& in, int k = -1);

/// Fixed-format number used in every CSV column.
std::string format_number(double v);

}  // namespace realspec::cli
