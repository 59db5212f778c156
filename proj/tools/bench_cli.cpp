// Benchmark driver: convergence tables, penalty sweeps, the nearly
// incompressible study and the polynomial patch test, written as CSV.
#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "elastdg/experiments.hpp"

namespace {

using namespace elastdg;

std::vector<double> parse_a_grid(const std::string& spec) {
  double lo = 0, hi = 0;
  int count = 0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 ||
      !(lo > 0) || !(hi >= lo) || count < 1)
    throw ConfigError("--a-grid expects LO:HI:COUNT with 0 < LO <= HI");
  std::vector<double> grid;
  if (count == 1) return {lo};
  for (int i = 0; i < count; ++i)
    grid.push_back(std::pow(10.0, std::log10(lo) + i * (std::log10(hi) - std::log10(lo)) /
                                                       (count - 1)));
  return grid;
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  const auto dot = path.rfind('.');
  if (dot == std::string::npos || path.find('/', dot) != std::string::npos)
    return path + suffix;
  return path.substr(0, dot) + suffix + path.substr(dot);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed BDM / interior-penalty DG benchmark for time-harmonic "
               "elasticity with weakly imposed stress symmetry"};

  std::string scheme_str, experiment_str = "convergence", out_path = "results.csv";
  std::string a_grid_str;
  int k = 2, quad_bump = 0;
  std::vector<double> kappas;
  std::vector<int> ns;
  std::optional<double> a, young, poisson, lambda, mu;
  bool allow_large = false;

  app.add_option("--scheme", scheme_str, "cg or dg")
      ->check(CLI::IsMember({"cg", "dg"}));
  app.add_option("--k", k, "polynomial degree (>= 1)");
  app.add_option("--kappa", kappas, "wave numbers, comma separated")->delimiter(',');
  app.add_option("--n", ns, "mesh subdivisions, comma separated")->delimiter(',');
  app.add_option("--a", a, "DG penalty parameter");
  app.add_option("--a-grid", a_grid_str, "penalty sweep grid LO:HI:COUNT (log)");
  app.add_option("--E", young, "Young modulus");
  app.add_option("--nu", poisson, "Poisson ratio");
  app.add_option("--lambda", lambda, "first Lame constant");
  app.add_option("--mu", mu, "second Lame constant");
  app.add_option("--experiment", experiment_str, "convergence|penalty|locking|patch")
      ->check(CLI::IsMember({"convergence", "penalty", "locking", "patch"}));
  app.add_option("--quad-bump", quad_bump, "extra quadrature degree for data/errors");
  app.add_option("--out", out_path, "output CSV path");
  app.add_flag("--allow-large", allow_large, "lift the desk-scale mesh cap");

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig config;
    config.k = k;
    config.kappas = kappas;
    config.ns = ns;
    config.quad_bump = quad_bump;
    config.allow_large = allow_large;
    config.out_path = out_path;

    if (experiment_str == "convergence") config.kind = ExperimentKind::convergence;
    else if (experiment_str == "penalty") config.kind = ExperimentKind::penalty;
    else if (experiment_str == "locking") config.kind = ExperimentKind::locking;
    else config.kind = ExperimentKind::patch;

    const bool needs_scheme = config.kind == ExperimentKind::convergence;
    if (scheme_str.empty()) {
      if (needs_scheme) throw ConfigError("--scheme is required");
      config.scheme = Scheme::DG;  // penalty/locking presets are DG
    } else {
      config.scheme = scheme_str == "cg" ? Scheme::CG : Scheme::DG;
    }

    if (config.scheme == Scheme::CG && a && config.kind != ExperimentKind::patch)
      throw ConfigError("--a applies to the DG scheme only");
    config.penalty = a;

    if ((young.has_value() != poisson.has_value()) ||
        (lambda.has_value() != mu.has_value()))
      throw ConfigError("material needs both --E and --nu, or both --lambda and --mu");
    if (young && lambda)
      throw ConfigError("give the material as (E, nu) or (lambda, mu), not both");
    if (young) config.params = lame_from_poisson(*young, *poisson);
    if (lambda) config.params = LameParams{*lambda, *mu};
    if (!a_grid_str.empty()) config.a_grid = parse_a_grid(a_grid_str);

    switch (config.kind) {
      case ExperimentKind::convergence:
      case ExperimentKind::locking: {
        const ConvergenceStudy study = config.kind == ExperimentKind::locking
                                           ? run_locking(config)
                                           : run_convergence(config);
        const std::string sigma_path = with_suffix(out_path, "_sigma");
        const std::string rot_path = with_suffix(out_path, "_rot");
        write_text_file(sigma_path, study.sigma_table().text);
        write_text_file(rot_path, study.rotation_table().text);
        std::printf("wrote %s and %s\n", sigma_path.c_str(), rot_path.c_str());
        return study.any_failed ? 2 : 0;
      }
      case ExperimentKind::penalty: {
        const PenaltySweep sweep = run_penalty_sweep(config);
        write_text_file(out_path, sweep.table().text);
        std::printf("wrote %s\n", out_path.c_str());
        return sweep.any_failed ? 2 : 0;
      }
      case ExperimentKind::patch: {
        const PatchResult result = run_patch(config);
        write_text_file(out_path, result.table().text);
        std::printf("%s", result.table().text.c_str());
        std::printf("patch test %s\n", result.passed() ? "passed" : "FAILED");
        return result.passed() ? 0 : 2;
      }
    }
  } catch (const ConfigError& err) {
    std::fprintf(stderr, "configuration error: %s\n", err.what());
    std::fprintf(stderr, "run with --help for usage\n");
    return 1;
  } catch (const DomainError& err) {
    std::fprintf(stderr, "configuration error: %s\n", err.what());
    return 1;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 2;
  }
  return 0;
}
