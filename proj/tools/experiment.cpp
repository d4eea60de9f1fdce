#include "experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "realspec/distribution_json.hpp"
#include "realspec/error.hpp"

namespace realspec::cli {
namespace {

const std::set<std::string> kFields = {"name", "distribution", "distributions", "n", "K", "mode",
                                       "samples", "seed", "eig_tol", "threads", "k", "output"};

int positive_int(const nlohmann::json& v, const std::string& what, int minimum) {
  if (!v.is_number_integer()) throw ConfigError(what + " must be an integer");
  const long long x = v.get<long long>();
  if (x < minimum || x > 1000000000LL)
    throw ConfigError(what + " must be at least " + std::to_string(minimum));
  return static_cast<int>(x);
}

std::vector<int> int_list(const nlohmann::json& v, const std::string& what, int minimum) {
  std::vector<int> out;
  if (v.is_array()) {
    for (const auto& x : v) out.push_back(positive_int(x, what + " entry", minimum));
  } else if (v.is_object()) {
    for (const auto& [key, _] : v.items()) {
      if (key != "from" && key != "to" && key != "step")
        throw ConfigError("unexpected field '" + key + "' in " + what);
    }
    if (!v.contains("from") || !v.contains("to")) throw ConfigError(what + " range needs from and to");
    const int from = positive_int(v.at("from"), what + ".from", minimum);
    const int to = positive_int(v.at("to"), what + ".to", minimum);
    const int step = v.contains("step") ? positive_int(v.at("step"), what + ".step", 1) : 1;
    for (int x = from; x <= to; x += step) out.push_back(x);
  } else {
    out.push_back(positive_int(v, what, minimum));
  }
  if (out.empty()) throw ConfigError(what + " must not be empty");
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

ExperimentConfig McExperiment::point(const DistributionSpec& spec, int K_value) const {
  ExperimentConfig c;
  c.n = n;
  c.K = K_value;
  c.spec = spec;
  c.mode = mode;
  c.samples = samples;
  c.seed = seed;
  c.eig_tol = eig_tol;
  c.threads = threads;
  return c;
}

std::vector<int> McExperiment::reported_k() const {
  if (!k.empty()) return k;
  std::vector<int> out;
  for (int x = n % 2; x <= n; x += 2) out.push_back(x);
  return out;
}

McExperiment parse_experiment(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("experiment must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!kFields.count(key)) throw ConfigError("unexpected experiment field '" + key + "'");
  }
  McExperiment e;
  if (!j.contains("name") || !j.at("name").is_string()) throw ConfigError("name must be a string");
  e.name = j.at("name").get<std::string>();

  if (j.contains("distribution") == j.contains("distributions"))
    throw ConfigError("give exactly one of distribution or distributions");
  if (j.contains("distribution")) {
    e.distributions.push_back(distribution_from_json(j.at("distribution")));
  } else {
    const auto& list = j.at("distributions");
    if (!list.is_array() || list.empty()) throw ConfigError("distributions must be a non-empty array");
    for (const auto& d : list) e.distributions.push_back(distribution_from_json(d));
  }

  if (j.contains("n")) e.n = positive_int(j.at("n"), "n", 2);
  if (!j.contains("K")) throw ConfigError("K is required");
  e.K = int_list(j.at("K"), "K", 1);
  if (j.contains("mode")) {
    if (!j.at("mode").is_string()) throw ConfigError("mode must be a string");
    e.mode = mode_from_name(j.at("mode").get<std::string>());
  }
  if (j.contains("samples")) e.samples = positive_int(j.at("samples"), "samples", 1000);
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("seed must be a nonnegative integer");
    e.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("eig_tol")) {
    if (!j.at("eig_tol").is_number() || !(j.at("eig_tol").get<double>() > 0.0))
      throw ConfigError("eig_tol must be a positive number");
    e.eig_tol = j.at("eig_tol").get<double>();
  }
  if (j.contains("threads")) e.threads = positive_int(j.at("threads"), "threads", 0);
  if (j.contains("k")) {
    e.k = int_list(j.at("k"), "k", 0);
    for (int x : e.k) {
      if (x > e.n || (x - e.n) % 2 != 0)
        throw ConfigError("k = " + std::to_string(x) + " cannot occur for n = " + std::to_string(e.n));
    }
  }
  if (j.contains("output")) {
    if (!j.at("output").is_string()) throw ConfigError("output must be a string");
    e.output = j.at("output").get<std::string>();
  }
  return e;
}

nlohmann::json to_json(const McExperiment& e) {
  nlohmann::json d = nlohmann::json::array();
  for (const auto& s : e.distributions) d.push_back(realspec::to_json(s));
  nlohmann::json j = {{"name", e.name},       {"distributions", d},
                      {"n", e.n},             {"K", e.K},
                      {"mode", std::string(mode_name(e.mode))},
                      {"samples", e.samples}, {"seed", e.seed},
                      {"eig_tol", e.eig_tol}, {"threads", e.threads}};
  if (!e.k.empty()) j["k"] = e.k;
  if (!e.output.empty()) j["output"] = e.output;
  return j;
}

std::string mc_csv_header() {
  return "n,K,mode,family,params,k,count,samples,phat,stderr,seed,expected_real,expected_stderr\n";
}

std::string mc_csv_rows(const McExperiment& e, const ExperimentConfig& cfg, const RealCountTally& t) {
  std::string out;
  const std::string prefix = std::to_string(cfg.n) + "," + std::to_string(cfg.K) + "," +
                             std::string(mode_name(cfg.mode)) + "," +
                             std::string(family_name(cfg.spec.family)) + "," +
                             cfg.spec.params_string() + ",";
  for (int k : e.reported_k()) {
    const auto it = t.counts.find(k);
    const long long count = it == t.counts.end() ? 0 : it->second;
    out += prefix + std::to_string(k) + "," + std::to_string(count) + "," + std::to_string(t.samples) +
           "," + format_number(t.phat(k)) + "," + format_number(t.std_error(k)) + "," +
           std::to_string(cfg.seed) + "," + format_number(t.expected_real()) + "," +
           format_number(t.expected_real_stderr()) + "\n";
  }
  return out;
}

std::map<std::string, std::vector<SeriesPoint>> read_series(std::istream& in, int k) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("series CSV is empty");
  const auto header = split_csv(line);
  auto column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ConfigError("series CSV lacks column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t cn = column("n"), cK = column("K"), cmode = column("mode"),
                    cfam = column("family"), cpar = column("params"), ck = column("k"),
                    cp = column("phat"), cs = column("stderr");
  std::map<std::string, std::vector<SeriesPoint>> out;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size())
      throw ConfigError("series CSV row " + std::to_string(row) + " has " +
                        std::to_string(cells.size()) + " cells");
    try {
      const int n = std::stoi(cells[cn]);
      const int wanted = k < 0 ? n : k;
      if (std::stoi(cells[ck]) != wanted) continue;
      const std::string key = cells[cfam] + "," + cells[cpar] + "," + cells[cmode] + "," + cells[cn];
      out[key].push_back({std::stoi(cells[cK]), std::stod(cells[cp]), std::stod(cells[cs])});
    } catch (const std::logic_error&) {
      throw ConfigError("series CSV row " + std::to_string(row) + " is malformed");
    }
  }
  for (auto& [_, s] : out)
    std::sort(s.begin(), s.end(), [](const SeriesPoint& a, const SeriesPoint& b) { return a.K < b.K; });
  return out;
}

}  // namespace realspec::cli
