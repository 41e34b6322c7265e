// Command-line front end for the anisotropic-scattering decay experiments.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "anisoscat/analysis.hpp"
#include "anisoscat/presets.hpp"
#include "anisoscat/theory.hpp"
#include "anisoscat/transport.hpp"
#include "anisoscat/verification.hpp"

namespace fs = std::filesystem;
using namespace anisoscat;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct ExperimentConfig {
  std::string kernel_spec = "isotropic";
  double sigma = 10.0;
  double c = 1.0;
  std::int64_t particles = 10'000'000;  // full-scale defaults; see configs/
  int cells = 1000;
  double t_end = -1.0;       // < 0: run until the theory amplitude drops to 1/3
  double census_dt = 0.25;
  std::uint64_t seed = 1;
  double tolerance = 0.03;
  std::string out_dir = "out";
  double fit_t_min = -1.0;   // < 0: drop the first 3 mean free times
  double noise_floor = -1.0; // < 0: five sigma of the per-cell census noise
};

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

// Flat `key = value` file with '#' comments.
void load_config_file(const std::string& path, ExperimentConfig& config) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string entry = trim(line);
    if (entry.empty()) continue;
    const auto eq = entry.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": expected key = value");
    }
    const std::string key = trim(entry.substr(0, eq));
    const std::string value = trim(entry.substr(eq + 1));
    try {
      if (key == "kernel") {
        config.kernel_spec = value;
      } else if (key == "sigma") {
        config.sigma = std::stod(value);
      } else if (key == "c") {
        config.c = std::stod(value);
      } else if (key == "particles") {
        config.particles = std::stoll(value);
      } else if (key == "cells") {
        config.cells = std::stoi(value);
      } else if (key == "t_end") {
        config.t_end = std::stod(value);
      } else if (key == "census_dt") {
        config.census_dt = std::stod(value);
      } else if (key == "seed") {
        config.seed = std::stoull(value);
      } else if (key == "tolerance") {
        config.tolerance = std::stod(value);
      } else if (key == "out") {
        config.out_dir = value;
      } else if (key == "fit_t_min") {
        config.fit_t_min = std::stod(value);
      } else if (key == "noise_floor") {
        config.noise_floor = std::stod(value);
      } else {
        throw ConfigError(path + ":" + std::to_string(line_no) +
                          ": unknown key '" + key + "'");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": bad value '" +
                        value + "' for key '" + key + "'");
    }
  }
}

SimulationConfig to_simulation_config(const ExperimentConfig& config,
                                      const ScatteringKernel& kernel,
                                      double t_end) {
  SimulationConfig sim;
  sim.kernel = kernel;
  sim.sigma = config.sigma;
  sim.c = config.c;
  sim.n_particles = config.particles;
  sim.n_cells = config.cells;
  sim.t_end = t_end;
  sim.census_dt = config.census_dt;
  sim.seed = config.seed;
  return sim;
}

double auto_t_end(double theory_rate, double census_dt) {
  const double span = std::log(3.0) / theory_rate;
  return std::ceil(span / census_dt) * census_dt;
}

struct RunResult {
  DiffusionPrediction prediction;
  std::vector<CensusRecord> series;
  std::optional<DecayFit> fit_peak;
  std::optional<DecayFit> fit_valley;
  std::optional<DecayFit> fit_combined;
  std::optional<TheoryComparison> comparison;  // combined fit vs theory
  double noise_floor = 0.0;
  double fit_t_min = 0.0;
};

std::vector<AmplitudeSample> window_filter(const std::vector<AmplitudeSample>& in,
                                           double t_min) {
  std::vector<AmplitudeSample> out;
  for (const auto& sample : in) {
    if (sample.t >= t_min) out.push_back(sample);
  }
  return out;
}

RunResult run_experiment(const ExperimentConfig& config) {
  const ScatteringKernel kernel = normalize(resolve_kernel(config.kernel_spec));
  validate_positivity(kernel);

  const double theory_rate = theory_decay_rate(predict(kernel, config.sigma, config.c).D);
  const double t_end =
      config.t_end >= 0.0 ? config.t_end : auto_t_end(theory_rate, config.census_dt);

  DecayExperiment experiment =
      run_decay_experiment(to_simulation_config(config, kernel, t_end),
                           config.tolerance, config.fit_t_min, config.noise_floor);

  RunResult result;
  result.prediction = experiment.prediction;
  result.series = std::move(experiment.series);
  result.fit_combined = experiment.fit;
  result.comparison = experiment.comparison;
  result.fit_t_min = experiment.fit_t_min;
  result.noise_floor = experiment.noise_floor;

  // Per-probe fits are reported alongside the joint one.
  const auto peak = window_filter(extract_amplitude(result.series, 1.0), result.fit_t_min);
  const auto valley =
      window_filter(extract_amplitude(result.series, -1.0), result.fit_t_min);
  try {
    result.fit_peak = fit_decay_rate(peak, result.noise_floor);
  } catch (const InsufficientData&) {
  }
  std::vector<AmplitudeSample> flipped = valley;
  for (auto& sample : flipped) sample.amplitude = -sample.amplitude;
  try {
    result.fit_valley = fit_decay_rate(flipped, result.noise_floor);
  } catch (const InsufficientData&) {
  }
  return result;
}

void write_summary_csv(const fs::path& path, const RunResult& result) {
  std::ofstream out(path);
  out << "t,A_peak,A_valley,A_theory_peak,A_theory_valley\n";
  const auto peak = extract_amplitude(result.series, 1.0);
  const auto valley = extract_amplitude(result.series, -1.0);
  const TallyGrid& grid = result.series.front().grid;
  const double x_peak = grid.cell_center(grid.cell_index(1.0));
  const double x_valley = grid.cell_center(grid.cell_index(-1.0));
  char row[256];
  for (std::size_t i = 0; i < peak.size(); ++i) {
    std::snprintf(row, sizeof(row), "%.17g,%.17g,%.17g,%.17g,%.17g\n", peak[i].t,
                  peak[i].amplitude, valley[i].amplitude,
                  amplitude(x_peak, peak[i].t, result.prediction.D),
                  amplitude(x_valley, valley[i].t, result.prediction.D));
    out << row;
  }
}

void describe_fit(std::ostream& out, const char* label,
                  const std::optional<DecayFit>& fit) {
  out << label;
  if (!fit) {
    out << "unavailable (insufficient data above the noise floor)\n";
    return;
  }
  char text[256];
  std::snprintf(text, sizeof(text),
                "rate %.10g +/- %.3g (n=%d, window [%.6g, %.6g])\n", fit->rate,
                fit->rate_stderr, fit->n_points, fit->t_min, fit->t_max);
  out << text;
}

void write_report(const fs::path& path, const ExperimentConfig& config,
                  const RunResult& result) {
  std::ofstream out(path);
  out.precision(12);
  out << "kernel: " << config.kernel_spec << "\n"
      << "sigma: " << config.sigma << "\n"
      << "c: " << config.c << "\n"
      << "particles: " << config.particles << "\n"
      << "cells: " << config.cells << "\n"
      << "seed: " << config.seed << "\n"
      << "mean cosine g_bar: " << result.prediction.g_bar << "\n"
      << "transport mfp: " << result.prediction.lambda_tr << "\n"
      << "diffusion coefficient D: " << result.prediction.D << "\n"
      << "theory decay rate D(pi/2)^2: " << theory_decay_rate(result.prediction.D)
      << "\n"
      << "fit window start: " << result.fit_t_min << "\n"
      << "noise floor: " << result.noise_floor << "\n";
  describe_fit(out, "peak fit: ", result.fit_peak);
  describe_fit(out, "valley fit: ", result.fit_valley);
  describe_fit(out, "combined fit: ", result.fit_combined);
  if (result.comparison) {
    out << "relative error (combined vs theory): " << result.comparison->rel_error
        << "\n"
        << "tolerance: " << result.comparison->tolerance << "\n"
        << "result: " << (result.comparison->pass ? "PASS" : "FAIL") << "\n";
  } else {
    out << "result: NO-FIT\n";
  }
}

int write_run_outputs(const ExperimentConfig& config, const RunResult& result) {
  fs::create_directories(config.out_dir);
  {
    std::ofstream out(fs::path(config.out_dir) / "tally.csv");
    write_tally_csv(out, result.series);
  }
  write_summary_csv(fs::path(config.out_dir) / "summary.csv", result);
  write_report(fs::path(config.out_dir) / "report.txt", config, result);

  if (result.series.back().t <= 0.0) return kExitPass;  // initial tally only
  if (!result.comparison) return kExitFail;
  return result.comparison->pass ? kExitPass : kExitFail;
}

int cmd_run(const ExperimentConfig& config) {
  const RunResult result = run_experiment(config);
  const int code = write_run_outputs(config, result);
  if (result.comparison) {
    std::printf("%s: fitted %.8g, theory %.8g, rel err %.3g -> %s\n",
                config.kernel_spec.c_str(), result.comparison->fitted_rate,
                result.comparison->theory_rate, result.comparison->rel_error,
                result.comparison->pass ? "PASS" : "FAIL");
  } else {
    std::printf("%s: no decay fit (t_end %.6g)\n", config.kernel_spec.c_str(),
                result.series.back().t);
  }
  return code;
}

int cmd_verify_kernel(const ExperimentConfig& config, std::int64_t draws, int bins) {
  const ScatteringKernel kernel = normalize(resolve_kernel(config.kernel_spec));
  validate_positivity(kernel);

  const auto sampler_check =
      check_sampler(kernel, draws, RandomStream(config.seed, 0), bins);
  std::printf("kernel: %s\n", config.kernel_spec.c_str());
  std::printf("analytic mean cosine: %.17g\n", sampler_check.analytic_g);
  std::printf("sampled mean cosine (%lld draws): %.17g (bound %.3g) -> %s\n",
              static_cast<long long>(draws), sampler_check.sampled_g,
              4.0 / std::sqrt(static_cast<double>(draws)),
              sampler_check.mean_ok() ? "ok" : "VIOLATION");
  std::printf("histogram chi2 (%d bins): %.6g, p-value %.6g -> %s\n", bins,
              sampler_check.chi2, sampler_check.p_value,
              sampler_check.histogram_ok() ? "ok" : "VIOLATION");

  bool all_ok = sampler_check.mean_ok() && sampler_check.histogram_ok();

  const ScatteringKernel mono = to_monomial(kernel);
  bool even_only = true;
  for (int l = 1; l <= mono.order(); l += 2) {
    if (mono.coeffs[l] != 0.0) even_only = false;
  }
  if (even_only) {
    const auto isotropy =
        check_isotropy_preservation(kernel, draws, RandomStream(config.seed, 1));
    std::printf(
        "isotropy preservation: <mu>=%.3e <xi>=%.3e <zeta>=%.3e <mu^2>=%.6f -> %s\n",
        isotropy.mean_mu, isotropy.mean_xi, isotropy.mean_zeta, isotropy.mean_mu2,
        isotropy.ok() ? "ok" : "VIOLATION");
    all_ok = all_ok && isotropy.ok();
  }
  return all_ok ? kExitPass : kExitFail;
}

std::vector<double> parse_sigma_list(const std::string& text) {
  std::vector<double> sigmas;
  std::stringstream items(text);
  std::string item;
  while (std::getline(items, item, ',')) {
    const std::string value = trim(item);
    if (value.empty()) continue;
    try {
      sigmas.push_back(std::stod(value));
    } catch (const std::exception&) {
      throw ConfigError("bad sigma value: '" + value + "'");
    }
  }
  if (sigmas.empty()) throw ConfigError("sweep needs a non-empty sigma list");
  return sigmas;
}

int cmd_sweep(const ExperimentConfig& base, const std::vector<double>& sigmas) {
  fs::create_directories(base.out_dir);
  std::ofstream table(fs::path(base.out_dir) / "convergence.csv");
  table << "sigma,fitted_rate,theory_rate,rel_error,pass\n";

  std::vector<double> errors;
  bool largest_sigma_pass = false;
  for (double sigma : sigmas) {
    ExperimentConfig config = base;
    config.sigma = sigma;
    std::ostringstream dir;
    dir << base.out_dir << "/sigma_" << sigma;
    config.out_dir = dir.str();
    const RunResult result = run_experiment(config);
    write_run_outputs(config, result);
    if (!result.comparison) {
      throw ConfigError("sweep at sigma " + std::to_string(sigma) +
                        " produced no decay fit; adjust t_end/census_dt/particles");
    }
    const auto& cmp = *result.comparison;
    char row[160];
    std::snprintf(row, sizeof(row), "%.17g,%.17g,%.17g,%.17g,%d\n", sigma,
                  cmp.fitted_rate, cmp.theory_rate, cmp.rel_error,
                  cmp.pass ? 1 : 0);
    table << row;
    std::printf("sigma %-8g rel err %.4g %s\n", sigma, cmp.rel_error,
                cmp.pass ? "(within tolerance)" : "");
    errors.push_back(cmp.rel_error);
    largest_sigma_pass = cmp.pass;
  }

  bool monotone = true;
  for (std::size_t i = 1; i < errors.size(); ++i) {
    if (errors[i] > errors[i - 1]) monotone = false;
  }
  std::printf("relative error monotone non-increasing in sigma: %s\n",
              monotone ? "yes" : "NO");
  return (monotone && largest_sigma_pass) ? kExitPass : kExitFail;
}

int cmd_tables() {
  std::printf("%-10s %-22s %-22s %s\n", "kernel", "mean_cosine", "D_sigma_over_c",
              "D");
  for (const std::string& name : preset_names()) {
    const auto prediction = predict(normalize(preset_kernel(name)), 1.0, 1.0);
    const double coeff = prediction.D;  // sigma = c = 1
    const char* closed_form = coeff > 0.4   ? "c/2sigma"
                              : coeff > 0.3 ? "c/3sigma"
                                            : "c/4sigma";
    std::printf("%-10s %-22.17g %-22.17g %s\n", name.c_str(), prediction.g_bar,
                coeff, closed_form);
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo anisotropic-scattering transport and its diffusion limit"};
  app.require_subcommand(1);

  ExperimentConfig config;
  std::string config_path;
  std::string sigma_list;
  std::int64_t draws = 1'000'000;
  int bins = 50;

  auto add_common = [&](CLI::App* cmd, bool with_sim_flags) {
    cmd->add_option("--config", config_path, "flat key = value config file");
    cmd->add_option("--kernel", config.kernel_spec,
                    "preset name or 'basis=...; coeffs=...'");
    cmd->add_option("--seed", config.seed, "random seed");
    cmd->add_option("--out", config.out_dir, "output directory");
    if (with_sim_flags) {
      cmd->add_option("--particles", config.particles, "history count");
      cmd->add_option("--cells", config.cells, "tally cells");
      cmd->add_option("--t-end", config.t_end, "end time (default: decay to 1/3)");
      cmd->add_option("--census-dt", config.census_dt, "census interval");
      cmd->add_option("--tolerance", config.tolerance, "pass/fail tolerance");
    }
  };

  CLI::App* run = app.add_subcommand("run", "simulate one kernel and compare to theory");
  add_common(run, true);
  run->add_option("--sigma", config.sigma, "scattering coefficient");

  CLI::App* verify = app.add_subcommand("verify-kernel", "check the cosine sampler");
  add_common(verify, false);
  verify->add_option("--draws", draws, "number of sample draws");
  verify->add_option("--bins", bins, "histogram bins");

  CLI::App* sweep = app.add_subcommand("sweep", "run over a sigma list");
  add_common(sweep, true);
  sweep->add_option("--sigma", sigma_list, "comma-separated sigma list")->required();

  CLI::App* tables = app.add_subcommand("tables", "print preset mean cosines and D");

  // The config file seeds the defaults; explicitly given flags then override
  // them during the normal parse (CLI11 only assigns options it saw).
  try {
    for (int i = 1; i < argc; ++i) {
      const std::string arg = argv[i];
      if (arg == "--config" && i + 1 < argc) {
        load_config_file(argv[i + 1], config);
      } else if (arg.rfind("--config=", 0) == 0) {
        load_config_file(arg.substr(9), config);
      }
    }
  } catch (const ConfigError& err) {
    std::fprintf(stderr, "config error: %s\n", err.what());
    return kExitConfig;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitPass : kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(config);
    if (verify->parsed()) return cmd_verify_kernel(config, draws, bins);
    if (sweep->parsed()) return cmd_sweep(config, parse_sigma_list(sigma_list));
    if (tables->parsed()) return cmd_tables();
  } catch (const ConfigError& err) {
    std::fprintf(stderr, "config error: %s\n", err.what());
    return kExitConfig;
  } catch (const KernelError& err) {
    std::fprintf(stderr, "kernel error: %s\n", err.what());
    return kExitConfig;
  } catch (const DomainError& err) {
    std::fprintf(stderr, "config error: %s\n", err.what());
    return kExitConfig;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kExitConfig;
  }
  return kExitConfig;
}
