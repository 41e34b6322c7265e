#include "anisoscat/analysis.hpp"

#include <cmath>
#include <string>

namespace anisoscat {

std::vector<AmplitudeSample> extract_amplitude(std::span<const CensusRecord> series,
                                               double x_probe) {
  if (!(x_probe >= kDomainMin && x_probe < kDomainMax)) {
    throw DomainError("probe position outside [-2, 2)");
  }
  std::vector<AmplitudeSample> samples;
  samples.reserve(series.size());
  for (const CensusRecord& record : series) {
    const TallyGrid& grid = record.grid;
    const int i = grid.cell_index(x_probe);
    const double mean_density = grid.total_weight() / kDomainLength;
    samples.push_back({record.t, grid.rho()[i] - mean_density});
  }
  return samples;
}

DecayFit fit_decay_rate(std::span<const AmplitudeSample> series, double noise_floor) {
  std::vector<AmplitudeSample> used;
  used.reserve(series.size());
  double sign = 0.0;
  for (const AmplitudeSample& sample : series) {
    if (!(std::abs(sample.amplitude) > noise_floor)) continue;
    if (sign == 0.0) sign = sample.amplitude > 0.0 ? 1.0 : -1.0;
    if (sample.amplitude * sign <= 0.0) break;  // sign flip: noise has taken over
    used.push_back(sample);
  }
  const int n = static_cast<int>(used.size());
  if (n < 3) {
    throw InsufficientData("decay fit needs >= 3 points above the noise floor, got " +
                           std::to_string(n));
  }

  Eigen::ArrayXd t(n);
  Eigen::ArrayXd log_a(n);
  for (int i = 0; i < n; ++i) {
    t[i] = used[i].t;
    log_a[i] = std::log(std::abs(used[i].amplitude));
  }
  const double t_mean = t.mean();
  const double y_mean = log_a.mean();
  const Eigen::ArrayXd dt = t - t_mean;
  const double s_tt = (dt * dt).sum();
  if (!(s_tt > 0.0)) throw InsufficientData("decay fit needs distinct census times");
  const double slope = (dt * (log_a - y_mean)).sum() / s_tt;
  const Eigen::ArrayXd residual = log_a - (y_mean + slope * dt);
  const double residual_var = (residual * residual).sum() / (n - 2);

  DecayFit fit;
  fit.rate = std::abs(slope);
  fit.rate_stderr = std::sqrt(residual_var / s_tt);
  fit.intercept = y_mean - slope * t_mean;
  fit.t_min = t[0];
  fit.t_max = t[n - 1];
  fit.n_points = n;
  return fit;
}

double default_noise_floor(const TallyGrid& grid) {
  if (grid.n_deposits() < 1) return 0.0;
  const double mean_weight = grid.total_weight() / grid.n_deposits();
  const double mean_density = grid.total_weight() / kDomainLength;
  return 5.0 * std::sqrt(mean_weight * mean_density / (grid.dx() * grid.n_merged()));
}

TheoryComparison compare_to_theory(const DecayFit& fit,
                                   const DiffusionPrediction& prediction,
                                   double tolerance) {
  TheoryComparison report;
  report.theory_rate = theory_decay_rate(prediction.D);
  report.fitted_rate = fit.rate;
  report.rel_error = std::abs(fit.rate - report.theory_rate) / report.theory_rate;
  report.tolerance = tolerance;
  report.pass = report.rel_error <= tolerance;
  return report;
}

DiffusiveDiagnostics diffusive_diagnostics(const TallyGrid& grid,
                                           const DiffusionPrediction& prediction) {
  const int n = grid.n_cells();
  const Eigen::ArrayXd rho = grid.rho();
  const Eigen::ArrayXd jx = grid.jx();
  const Eigen::ArrayXd jxx = grid.jxx();

  DiffusiveDiagnostics report;
  report.mean_jxx_over_rho = (jxx / rho).mean();

  // Periodic central difference of rho and its Poisson-noise floor.
  Eigen::ArrayXd drho(n);
  for (int i = 0; i < n; ++i) {
    drho[i] = (rho[(i + 1) % n] - rho[(i + n - 1) % n]) / (2.0 * grid.dx());
  }
  const double mean_weight =
      grid.n_deposits() > 0 ? grid.total_weight() / grid.n_deposits() : 0.0;
  const double rho_var = mean_weight * rho.mean() / (grid.dx() * grid.n_merged());
  const double gradient_floor = 5.0 * std::sqrt(rho_var / 2.0) / grid.dx();

  const double flux_coeff = -prediction.lambda_tr / 3.0;
  double numerator = 0.0;
  double denominator = 0.0;
  int used = 0;
  for (int i = 0; i < n; ++i) {
    if (std::abs(drho[i]) <= gradient_floor) continue;
    const double fick = flux_coeff * drho[i];
    numerator += (jx[i] - fick) * (jx[i] - fick);
    denominator += fick * fick;
    ++used;
  }
  report.fick_cells_used = used;
  report.fick_l2_error = used > 0 ? std::sqrt(numerator / denominator) : 0.0;
  return report;
}

DecayExperiment run_decay_experiment(const SimulationConfig& config, double tolerance,
                                     double fit_t_min, double noise_floor) {
  DecayExperiment experiment;
  experiment.prediction =
      predict(normalize(config.kernel), config.sigma, config.c);
  experiment.series = run_simulation(config);
  experiment.fit_t_min =
      fit_t_min >= 0.0 ? fit_t_min : 3.0 / (config.c * config.sigma);
  experiment.noise_floor = noise_floor >= 0.0
                               ? noise_floor
                               : default_noise_floor(experiment.series.front().grid);

  const auto peak = extract_amplitude(experiment.series, 1.0);
  const auto valley = extract_amplitude(experiment.series, -1.0);
  std::vector<AmplitudeSample> joint;
  joint.reserve(2 * peak.size());
  for (std::size_t i = 0; i < peak.size(); ++i) {
    if (peak[i].t < experiment.fit_t_min) continue;
    joint.push_back(peak[i]);
    joint.push_back({valley[i].t, -valley[i].amplitude});
  }
  try {
    experiment.fit = fit_decay_rate(joint, experiment.noise_floor);
    experiment.comparison =
        compare_to_theory(*experiment.fit, experiment.prediction, tolerance);
  } catch (const InsufficientData&) {
  }
  return experiment;
}

}  // namespace anisoscat
