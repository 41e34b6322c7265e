#pragma once

#include <optional>
#include <span>
#include <vector>

#include "anisoscat/theory.hpp"
#include "anisoscat/transport.hpp"

namespace anisoscat {

struct AmplitudeSample {
  double t = 0.0;
  double amplitude = 0.0;  // rho at the probe cell minus the mean density
};

// A(t) = rho(cell nearest x_probe, t) - mean density. The mean density is the
// tallied total weight over the domain length (10 for the standard setup).
std::vector<AmplitudeSample> extract_amplitude(std::span<const CensusRecord> series,
                                               double x_probe);

struct DecayFit {
  double rate = 0.0;         // magnitude of the fitted ln|A| slope, 1/time
  double rate_stderr = 0.0;
  double intercept = 0.0;    // fitted ln|A| at t = 0
  double t_min = 0.0;        // window actually used
  double t_max = 0.0;
  int n_points = 0;
};

// Ordinary least squares of ln|A| against t over samples with |A| above the
// noise floor. Samples whose sign disagrees with the first qualifying sample
// are dropped (along with everything after the flip). Throws
// InsufficientData with fewer than three qualifying points.
DecayFit fit_decay_rate(std::span<const AmplitudeSample> series, double noise_floor);

// Default floor under the fit: five standard deviations of the per-cell
// census noise, sqrt(w_bar rho_bar / dx) with rho_bar the mean density.
double default_noise_floor(const TallyGrid& grid);

struct TheoryComparison {
  double theory_rate = 0.0;  // D (pi/2)^2
  double fitted_rate = 0.0;
  double rel_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

TheoryComparison compare_to_theory(const DecayFit& fit,
                                   const DiffusionPrediction& prediction,
                                   double tolerance);

struct DiffusiveDiagnostics {
  double mean_jxx_over_rho = 0.0;  // 1/3 in the diffusive regime
  double fick_l2_error = 0.0;      // relative L2 of J_x vs -lambda_tr/3 drho/dx
  int fick_cells_used = 0;         // cells with gradient above the noise floor
};

// Moment diagnostics of one (possibly census-merged) tally against the
// diffusion prediction. The density gradient uses periodic central
// differences of the tallied rho.
DiffusiveDiagnostics diffusive_diagnostics(const TallyGrid& grid,
                                           const DiffusionPrediction& prediction);

// One full decay experiment: simulate, probe the peak and valley cells at
// x = +/-1, fit ln|A| jointly over both probes, compare to the prediction.
// fit/comparison stay empty when too little signal survives the window and
// noise floor (t_end = 0 runs included).
struct DecayExperiment {
  DiffusionPrediction prediction;
  std::vector<CensusRecord> series;
  std::optional<DecayFit> fit;  // joint peak+valley fit
  std::optional<TheoryComparison> comparison;
  double fit_t_min = 0.0;       // window start actually applied
  double noise_floor = 0.0;
};

// Negative fit_t_min / noise_floor select the defaults: the first three mean
// free times are dropped and the floor comes from the t = 0 census.
DecayExperiment run_decay_experiment(const SimulationConfig& config, double tolerance,
                                     double fit_t_min = -1.0, double noise_floor = -1.0);

}  // namespace anisoscat
