#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "experiment.hpp"
#include "realspec/distribution_json.hpp"
#include "realspec/error.hpp"
#include "realspec/fit.hpp"
#include "realspec/matrix_lab.hpp"
#include "realspec/quadrature.hpp"
#include "realspec/registry.hpp"

#ifndef REALSPEC_GIT_DESCRIBE
#define REALSPEC_GIT_DESCRIBE "unknown"
#endif

using namespace realspec;
using realspec::cli::format_number;

namespace {

enum Exit { kOk = 0, kNonconvergence = 2, kUnsupported = 3, kSchema = 4, kModel = 5 };

struct FamilyArgs {
  std::string family = "gaussian";
  double gamma = 1.0;
  double mu = 0.0;
  double nu = 0.0;
  double eta = 0.0;
  double a = 1.0;
  double scale = 1.0;

  void add_to(CLI::App* app) {
    app->add_option("--family", family,
                    "uniform, gaussian, laplace, gamma, beta, smooth_bounded, cauchy, powerlaw, bernoulli")
        ->capture_default_str();
    app->add_option("--gamma", gamma, "symmetric gamma shape");
    app->add_option("--mu", mu, "beta exponent of (1-|x|)");
    app->add_option("--nu", nu, "beta exponent of |x|");
    app->add_option("--eta", eta, "smooth bounded exponent of (1-x^2)");
    app->add_option("--a", a, "power law exponent in 1/(1+|x|^{2a})");
    app->add_option("--scale", scale, "scale factor")->capture_default_str();
  }

  DistributionSpec spec() const {
    DistributionSpec s;
    s.family = family_from_name(family);
    s.gamma = gamma;
    s.mu = mu;
    s.nu = nu;
    s.eta = eta;
    s.a = a;
    s.scale = scale;
    s.validate();
    return s;
  }
};

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

std::string full_precision(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_exact(const std::string& output) {
  emit(output, registry_csv());
  return kOk;
}

int cmd_quad(const FamilyArgs& fa, const std::string& route, double tol, int hadamard_K) {
  const DistributionSpec spec = fa.spec();
  const std::string header = "family,params,method,value,error,evaluations\n";
  std::string params = spec.params_string();
  if (hadamard_K > 1) params += (params.empty() ? "" : ";") + std::string("K=") + std::to_string(hadamard_K);
  try {
    QuadratureResult r;
    if (hadamard_K > 1) {
      if (route == "cf") throw UnsupportedRouteError("product laws use the convolution route");
      r = prob_real_product_law({spec, hadamard_K}, tol,
                                route == "tensor" ? Reduction::Tensor : Reduction::Auto);
    } else if (route == "cf") {
      r = prob_real_cf_route(spec, tol);
    } else {
      r = prob_real_convolution_route(spec, tol, route == "tensor" ? Reduction::Tensor : Reduction::Auto);
    }
    std::cout << header << family_name(spec.family) << "," << params << "," << method_name(r.method)
              << "," << full_precision(r.value) << "," << format_number(r.abs_error_estimate) << ","
              << r.evaluations << "\n";
    return kOk;
  } catch (const ConvergenceError& e) {
    std::cerr << "quad: " << e.what() << "\nbest estimate " << full_precision(e.best_estimate())
              << " +- " << format_number(e.error_estimate()) << "\n";
    return kNonconvergence;
  }
}

int cmd_mc(const std::string& config_path, std::string output, int threads) {
  std::ifstream in(config_path);
  if (!in) throw ConfigError("cannot read " + config_path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  cli::McExperiment e = cli::parse_experiment(j);
  if (!output.empty()) e.output = output;
  if (threads > 0) e.threads = threads;

  const auto start = std::chrono::steady_clock::now();
  std::string csv = cli::mc_csv_header();
  int workers = 1;
  long long discarded = 0;
  long long resampled = 0;
  long long ties = 0;
  for (const auto& spec : e.distributions) {
    for (int K : e.K) {
      const ExperimentConfig cfg = e.point(spec, K);
      const RealCountTally t = estimate_Pnk(cfg);
      workers = t.workers;
      discarded += t.discarded;
      resampled += t.resampled;
      ties += t.ties;
      if (t.discard_warning())
        std::cerr << "warning: " << spec.label() << " K=" << K << " discarded " << t.discarded
                  << " samples (QR nonconvergence)\n";
      csv += cli::mc_csv_rows(e, cfg, t);
    }
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  emit(e.output, csv);

  nlohmann::json manifest = {
      {"experiment", e.name},
      {"config", cli::to_json(e)},
      {"git_describe", REALSPEC_GIT_DESCRIBE},
      {"wall_time_s", wall},
      {"seed", e.seed},
      {"workers", workers},
      {"realspec_threads_env", std::getenv("REALSPEC_THREADS") ? std::getenv("REALSPEC_THREADS") : ""},
      {"discarded", discarded},
      {"resampled", resampled},
      {"ties", ties},
      {"outputs", e.output.empty() ? nlohmann::json::array() : nlohmann::json::array({e.output})}};
  if (e.output.empty()) {
    std::cerr << manifest.dump(2) << "\n";
  } else {
    std::ofstream(e.output + ".manifest.json") << manifest.dump(2) << "\n";
  }
  return kOk;
}

int cmd_fit(const std::string& input, std::optional<double> fix_Pinf, int k, const std::string& output) {
  std::ifstream in(input);
  if (!in) throw ConfigError("cannot read " + input);
  const auto series = cli::read_series(in, k);
  if (series.empty()) throw ConfigError("no rows with the requested k in " + input);
  std::string text = "series,P_inf,C,theta,residual,points,P_inf_fixed\n";
  for (const auto& [key, points] : series) {
    const PowerLawFit f = fit_saturation(points, fix_Pinf);
    text += quote(key) + "," + format_number(f.P_inf) + "," + format_number(f.C) + "," +
            format_number(f.theta) + "," + format_number(f.residual) + "," +
            std::to_string(points.size()) + "," + (f.P_inf_fixed ? "true" : "false") + "\n";
  }
  emit(output, text);
  return kOk;
}

int cmd_correlations(const FamilyArgs& fa, const std::vector<int>& Ks, long long samples,
                     std::uint64_t seed, bool renormalized, bool divide_by_K, const std::string& output) {
  const DistributionSpec spec = fa.spec();
  CorrelationOptions opt;
  opt.renormalized = renormalized;
  opt.divide_by_K = divide_by_K;
  std::string text = "family,params,K,renormalized,divide_by_K,i,C,stderr,covariance,defined,samples,seed\n";
  for (int K : Ks) {
    const CorrelationReport r = correlation_metric(K, spec, samples, RandomStream(seed), opt);
    for (int i = 0; i < 4; ++i) {
      text += std::string(family_name(spec.family)) + "," + spec.params_string() + "," + std::to_string(K) +
              "," + (renormalized ? "true" : "false") + "," + (divide_by_K ? "true" : "false") + "," +
              std::to_string(i + 1) + "," + format_number(r.C[i]) + "," + format_number(r.std_error[i]) +
              "," + format_number(r.covariance[i]) + "," + (r.defined[i] ? "true" : "false") + "," +
              std::to_string(samples) + "," + std::to_string(seed) + "\n";
    }
  }
  emit(output, text);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"realspec: probability of real eigenvalues of random matrices and their products"};
  app.require_subcommand(1);

  std::string output;

  auto* exact = app.add_subcommand("exact", "print the exact-value registry");
  exact->add_option("-o,--output", output, "CSV path (stdout when omitted)");

  FamilyArgs quad_family;
  std::string route = "conv";
  double tol = 0.0;
  int hadamard_K = 1;
  auto* quad = app.add_subcommand("quad", "P_{2,2} by deterministic quadrature");
  quad_family.add_to(quad);
  quad->add_option("--route", route, "conv, tensor or cf")
      ->check(CLI::IsMember({"conv", "tensor", "cf"}))
      ->capture_default_str();
  quad->add_option("--tol", tol, "absolute tolerance (0 picks the route default)");
  quad->add_option("--hadamard-K", hadamard_K, "use the marginal of a K-fold Hadamard product")
      ->check(CLI::PositiveNumber);

  std::string config;
  int threads = 0;
  auto* mc = app.add_subcommand("mc", "Monte Carlo sweep from a JSON experiment config");
  mc->add_option("config", config, "experiment JSON")->required();
  mc->add_option("-o,--output", output, "CSV path (overrides the config)");
  mc->add_option("--threads", threads, "worker threads (overrides config and REALSPEC_THREADS)");

  std::string input;
  std::optional<double> fix_Pinf;
  int fit_k = -1;
  auto* fit = app.add_subcommand("fit", "saturation power-law fit of an mc series");
  fit->add_option("input", input, "CSV written by mc")->required();
  fit->add_option("--fix-pinf", fix_Pinf, "hold P_inf fixed");
  fit->add_option("--k", fit_k, "real count to fit (default k = n)");
  fit->add_option("-o,--output", output, "CSV path (stdout when omitted)");

  FamilyArgs corr_family;
  std::vector<int> Ks{2};
  long long samples = 1000000;
  std::uint64_t seed = 42;
  bool renormalized = false;
  bool divide_by_K = true;
  auto* corr = app.add_subcommand("correlations", "entry correlation metric of 2x2 ordinary products");
  corr_family.add_to(corr);
  corr->add_option("-K", Ks, "product lengths")->capture_default_str();
  corr->add_option("--samples", samples, "Monte Carlo samples")->capture_default_str();
  corr->add_option("--seed", seed, "master seed")->capture_default_str();
  corr->add_flag("--renormalized", renormalized, "Frobenius renormalization after each step");
  corr->add_flag("--divide-by-K,!--no-divide-by-K", divide_by_K,
                 "divide the covariance by K before the K-th root (default on)");
  corr->add_option("-o,--output", output, "CSV path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*exact) return cmd_exact(output);
    if (*quad) return cmd_quad(quad_family, route, tol, hadamard_K);
    if (*mc) return cmd_mc(config, output, threads);
    if (*fit) return cmd_fit(input, fix_Pinf, fit_k, output);
    if (*corr) return cmd_correlations(corr_family, Ks, samples, seed, renormalized, divide_by_K, output);
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNonconvergence;
  } catch (const UnsupportedRouteError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUnsupported;
  } catch (const DensityUnknownError& e) {
    std::cerr << "error: " << e.what() << " (use the mc subcommand)\n";
    return kUnsupported;
  } catch (const ModelViolationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kModel;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSchema;
  } catch (const ParameterDomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSchema;
  }
  return kOk;
}
