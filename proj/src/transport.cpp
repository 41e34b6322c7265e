#include "anisoscat/transport.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <ostream>
#include <thread>

namespace anisoscat {

namespace {

// Chunked parallel loop over [0, n). Work items must be independent; the
// assignment of items to workers is unspecified and must not matter.
void parallel_for(std::size_t n, int n_threads,
                  const std::function<void(std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  if (n_threads <= 1) {
    body(0, n);
    return;
  }
  constexpr std::size_t kChunk = 4096;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t begin = next.fetch_add(kChunk);
      if (begin >= n) return;
      body(begin, std::min(begin + kChunk, n));
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(n_threads - 1);
  for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

}  // namespace

int resolve_thread_count(int requested) {
  int count = requested > 0 ? requested
                            : static_cast<int>(std::thread::hardware_concurrency());
  if (count < 1) count = 1;
  if (const char* cap_text = std::getenv("ANISOSCAT_THREADS")) {
    const int cap = std::atoi(cap_text);
    if (cap > 0 && cap < count) count = cap;
  }
  return count;
}

void validate_config(const SimulationConfig& config) {
  if (!(config.sigma > 0.0)) throw ConfigError("sigma must be positive");
  if (!(config.c > 0.0)) throw ConfigError("particle speed must be positive");
  if (config.n_particles < 1) throw ConfigError("need at least one particle");
  if (config.n_cells < 2) throw ConfigError("need at least two tally cells");
  if (!(config.census_dt > 0.0)) throw ConfigError("census_dt must be positive");
  if (config.t_end < 0.0) throw ConfigError("t_end must be non-negative");
  if (config.t_end > 0.0 && config.census_dt > config.t_end) {
    throw ConfigError("census_dt must not exceed t_end");
  }
}

double apply_periodic(double x) {
  const double period_fraction = (x - kDomainMin) / kDomainLength;
  const double wrapped = period_fraction - std::floor(period_fraction);
  double out = kDomainMin + kDomainLength * wrapped;
  if (out >= kDomainMax) out = kDomainMin;  // guard the wrapped == 1 rounding case
  return out;
}

TallyGrid::TallyGrid(int n_cells)
    : weight_sum_(Eigen::ArrayXd::Zero(n_cells)),
      weight_mu_sum_(Eigen::ArrayXd::Zero(n_cells)),
      weight_mu2_sum_(Eigen::ArrayXd::Zero(n_cells)) {
  if (n_cells < 1) throw ConfigError("tally grid needs at least one cell");
}

int TallyGrid::cell_index(double x) const {
  int i = static_cast<int>((x - kDomainMin) / dx());
  if (i < 0) i = 0;
  if (i >= n_cells()) i = n_cells() - 1;
  return i;
}

void TallyGrid::deposit(const Particle& p) {
  const int i = cell_index(p.x);
  const double mu = p.dir.x();
  weight_sum_[i] += p.weight;
  weight_mu_sum_[i] += p.weight * mu;
  weight_mu2_sum_[i] += p.weight * mu * mu;
  total_weight_ += p.weight;
  ++n_deposits_;
}

void TallyGrid::merge(const TallyGrid& other) {
  if (other.n_cells() != n_cells()) {
    throw ConfigError("cannot merge tally grids of different sizes");
  }
  weight_sum_ += other.weight_sum_;
  weight_mu_sum_ += other.weight_mu_sum_;
  weight_mu2_sum_ += other.weight_mu2_sum_;
  total_weight_ += other.total_weight_;
  n_deposits_ += other.n_deposits_;
  n_merged_ += other.n_merged_;
}

std::vector<Particle> sample_initial_ensemble(const SimulationConfig& config,
                                              std::vector<RandomStream>* streams) {
  validate_config(config);
  const std::size_t n = static_cast<std::size_t>(config.n_particles);
  std::vector<Particle> particles(n);
  std::vector<RandomStream> local_streams(n);
  const double weight = 40.0 / static_cast<double>(config.n_particles);

  parallel_for(n, resolve_thread_count(config.n_threads), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      RandomStream stream(config.seed, static_cast<std::uint64_t>(i));
      double x = 0.0;
      while (true) {
        x = kDomainMin + kDomainLength * stream.uniform();
        const double density = 10.0 + 5.0 * std::sin(M_PI_2 * x);
        if (15.0 * stream.uniform() <= density) break;
      }
      particles[i] = Particle{x, sample_isotropic(stream), weight, 0.0};
      local_streams[i] = stream;
    }
  });

  if (streams) *streams = std::move(local_streams);
  return particles;
}

void advance_particle(Particle& p, double t_census, const TransportContext& ctx,
                      RandomStream& stream) {
  while (p.t < t_census) {
    // Exponential flight length; log1p keeps u = 0 finite.
    const double s = -std::log1p(-stream.uniform()) / ctx.sigma;
    const double flight_dt = s / ctx.c;
    const double remaining = t_census - p.t;
    if (flight_dt >= remaining) {
      p.x = apply_periodic(p.x + p.dir.x() * ctx.c * remaining);
      p.t = t_census;
      return;
    }
    p.x = apply_periodic(p.x + p.dir.x() * s);
    p.t += flight_dt;
    const double cos_theta = ctx.sampler.sample(stream);
    const double phi = sample_azimuth(stream);
    p.dir = rotate_direction(p.dir, cos_theta, phi);
  }
}

TallyGrid tally(std::span<const Particle> particles, int n_cells) {
  TallyGrid grid(n_cells);
  for (const Particle& p : particles) grid.deposit(p);
  return grid;
}

std::vector<CensusRecord> run_simulation(const SimulationConfig& config) {
  validate_config(config);
  const ScatteringKernel kernel = normalize(config.kernel);
  validate_positivity(kernel);

  const int n_threads = resolve_thread_count(config.n_threads);
  std::vector<RandomStream> streams;
  std::vector<Particle> particles = sample_initial_ensemble(config, &streams);

  std::vector<double> census_times{0.0};
  for (int k = 1; k * config.census_dt < config.t_end; ++k) {
    census_times.push_back(k * config.census_dt);
  }
  if (config.t_end > 0.0) census_times.push_back(config.t_end);

  const TransportContext ctx{config.sigma, config.c, CosineSampler(kernel)};

  std::vector<CensusRecord> series;
  series.reserve(census_times.size());
  series.push_back({0.0, tally(particles, config.n_cells)});
  for (std::size_t k = 1; k < census_times.size(); ++k) {
    const double t_census = census_times[k];
    parallel_for(particles.size(), n_threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        advance_particle(particles[i], t_census, ctx, streams[i]);
      }
    });
    // Serial tally in index order keeps the output independent of worker count.
    series.push_back({t_census, tally(particles, config.n_cells)});
  }
  return series;
}

void write_tally_csv(std::ostream& out, std::span<const CensusRecord> series) {
  out << "t,cell_center,rho,jx,jxx\n";
  char row[256];
  for (const CensusRecord& record : series) {
    const Eigen::ArrayXd rho = record.grid.rho();
    const Eigen::ArrayXd jx = record.grid.jx();
    const Eigen::ArrayXd jxx = record.grid.jxx();
    for (int i = 0; i < record.grid.n_cells(); ++i) {
      std::snprintf(row, sizeof(row), "%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    record.t, record.grid.cell_center(i), rho[i], jx[i], jxx[i]);
      out << row;
    }
  }
}

}  // namespace anisoscat
