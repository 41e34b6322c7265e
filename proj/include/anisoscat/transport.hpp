#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "anisoscat/angular_sampling.hpp"
#include "anisoscat/phase_function.hpp"

namespace anisoscat {

// Periodic slab domain of the decay experiment.
inline constexpr double kDomainMin = -2.0;
inline constexpr double kDomainMax = 2.0;
inline constexpr double kDomainLength = kDomainMax - kDomainMin;

struct Particle {
  double x = 0.0;      // position in [-2, 2)
  Direction dir = Direction::UnitX();
  double weight = 0.0; // constant for the particle's whole life
  double t = 0.0;      // local clock
};

struct SimulationConfig {
  ScatteringKernel kernel;
  double sigma = 1.0;          // scattering coefficient, 1/length
  double c = 1.0;              // particle speed
  std::int64_t n_particles = 0;
  int n_cells = 0;
  double t_end = 0.0;
  double census_dt = 0.25;
  std::uint64_t seed = 0;
  int n_threads = 0;           // 0: hardware default, capped by ANISOSCAT_THREADS
};

// Throws ConfigError when a field is out of contract.
void validate_config(const SimulationConfig& config);

// Per-cell census accumulators for density and the first two x moments.
class TallyGrid {
 public:
  explicit TallyGrid(int n_cells);

  int n_cells() const { return static_cast<int>(weight_sum_.size()); }
  double dx() const { return kDomainLength / n_cells(); }
  double cell_center(int i) const { return kDomainMin + (i + 0.5) * dx(); }
  int cell_index(double x) const;

  void deposit(const Particle& p);

  // Summing another census into this grid averages the estimators over the
  // merged censuses (each accessor divides by the census count).
  void merge(const TallyGrid& other);
  int n_merged() const { return n_merged_; }

  // Census estimators rho, J_x, J_xx (weight per unit length).
  Eigen::ArrayXd rho() const { return weight_sum_ / (dx() * n_merged_); }
  Eigen::ArrayXd jx() const { return weight_mu_sum_ / (dx() * n_merged_); }
  Eigen::ArrayXd jxx() const { return weight_mu2_sum_ / (dx() * n_merged_); }

  // Ensemble weight summed in particle-index order during the tally pass;
  // bit-identical across censuses because weights never change.
  double total_weight() const { return total_weight_ / n_merged_; }
  std::int64_t n_deposits() const { return n_deposits_ / n_merged_; }

 private:
  Eigen::ArrayXd weight_sum_;
  Eigen::ArrayXd weight_mu_sum_;
  Eigen::ArrayXd weight_mu2_sum_;
  double total_weight_ = 0.0;
  std::int64_t n_deposits_ = 0;
  int n_merged_ = 1;
};

struct CensusRecord {
  double t = 0.0;
  TallyGrid grid;
};

// Wraps a coordinate into [-2, 2).
double apply_periodic(double x);

// Positions from the density 10 + 5 sin(pi x / 2) by rejection under a
// constant envelope of 15; isotropic directions; equal weights summing to 40.
// When `streams` is given it receives the per-history streams positioned
// after the initialization draws, ready for transport.
std::vector<Particle> sample_initial_ensemble(const SimulationConfig& config,
                                              std::vector<RandomStream>* streams = nullptr);

// Everything a history needs besides its own state.
struct TransportContext {
  double sigma;
  double c;
  CosineSampler sampler;
};

// Advances one history to the census time: exponential flight lengths, then
// either a scatter or a truncated final flight that lands exactly on the
// census. Position wraps periodically; weight never changes.
void advance_particle(Particle& p, double t_census, const TransportContext& ctx,
                      RandomStream& stream);

// Census estimator over a synchronized ensemble, deposited in index order.
TallyGrid tally(std::span<const Particle> particles, int n_cells);

// Full experiment: census tallies at t = 0, census_dt, ..., t_end.
// Bitwise reproducible for a fixed seed, independent of worker count.
std::vector<CensusRecord> run_simulation(const SimulationConfig& config);

// CSV rows `t,cell_center,rho,jx,jxx` at 17 significant digits.
void write_tally_csv(std::ostream& out, std::span<const CensusRecord> series);

// Worker count: `requested` if positive, else hardware concurrency; either
// way capped by the ANISOSCAT_THREADS environment variable when set.
int resolve_thread_count(int requested);

}  // namespace anisoscat
