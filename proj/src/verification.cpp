#include "anisoscat/verification.hpp"

#include <cmath>
#include <vector>

#include "anisoscat/stats.hpp"

namespace anisoscat {

bool SamplerCheck::mean_ok() const {
  return std::abs(sampled_g - analytic_g) <= 4.0 / std::sqrt(static_cast<double>(n_draws));
}

SamplerCheck check_sampler(const ScatteringKernel& kernel, std::int64_t n_draws,
                           RandomStream stream, int n_bins) {
  const ScatteringKernel normalized = normalize(kernel);
  const CosineSampler sampler(normalized);

  SamplerCheck check;
  check.analytic_g = mean_cosine(normalized);
  check.n_draws = n_draws;
  check.dof = n_bins - 1;

  std::vector<std::int64_t> observed(n_bins, 0);
  double sum = 0.0;
  for (std::int64_t i = 0; i < n_draws; ++i) {
    const double mu = sampler.sample(stream);
    sum += mu;
    int bin = static_cast<int>((mu + 1.0) / 2.0 * n_bins);
    if (bin < 0) bin = 0;
    if (bin >= n_bins) bin = n_bins - 1;
    ++observed[bin];
  }
  check.sampled_g = sum / static_cast<double>(n_draws);

  for (int b = 0; b < n_bins; ++b) {
    const double lo = -1.0 + 2.0 * b / n_bins;
    const double hi = -1.0 + 2.0 * (b + 1) / n_bins;
    const double expected = n_draws * (sampler.cdf(hi) - sampler.cdf(lo));
    if (expected > 0.0) {
      const double diff = observed[b] - expected;
      check.chi2 += diff * diff / expected;
    }
  }
  check.p_value = chi_squared_p_value(check.chi2, check.dof);
  return check;
}

bool IsotropyCheck::ok() const {
  const double bound = 4.0 / std::sqrt(static_cast<double>(n_samples));
  return std::abs(mean_mu) <= bound && std::abs(mean_xi) <= bound &&
         std::abs(mean_zeta) <= bound && std::abs(mean_mu2 - 1.0 / 3.0) <= bound;
}

IsotropyCheck check_isotropy_preservation(const ScatteringKernel& kernel,
                                          std::int64_t n_samples, RandomStream stream) {
  const ScatteringKernel normalized = normalize(kernel);
  const CosineSampler sampler(normalized);

  IsotropyCheck check;
  check.n_samples = n_samples;
  Eigen::Vector3d first = Eigen::Vector3d::Zero();
  double mu2 = 0.0;
  for (std::int64_t i = 0; i < n_samples; ++i) {
    const Direction incoming = sample_isotropic(stream);
    const double cos_theta = sampler.sample(stream);
    const double phi = sample_azimuth(stream);
    const Direction outgoing = rotate_direction(incoming, cos_theta, phi);
    first += outgoing;
    mu2 += outgoing.x() * outgoing.x();
  }
  const double n = static_cast<double>(n_samples);
  check.mean_mu = first.x() / n;
  check.mean_xi = first.y() / n;
  check.mean_zeta = first.z() / n;
  check.mean_mu2 = mu2 / n;
  return check;
}

}  // namespace anisoscat
