#pragma once

#include <cstdint>

#include "anisoscat/angular_sampling.hpp"
#include "anisoscat/phase_function.hpp"

namespace anisoscat {

// Monte Carlo checks of the cosine sampler against the analytic kernel.
struct SamplerCheck {
  double analytic_g = 0.0;
  double sampled_g = 0.0;
  double chi2 = 0.0;
  int dof = 0;
  double p_value = 0.0;
  std::int64_t n_draws = 0;

  // |sampled - analytic| <= 4/sqrt(N) and chi-squared p-value > 0.001.
  bool mean_ok() const;
  bool histogram_ok() const { return p_value > 1e-3; }
};

// Draws n cosines, compares the sampled mean against mean_cosine and a
// 50-bin (by default) histogram against the bin-integrated density.
SamplerCheck check_sampler(const ScatteringKernel& kernel, std::int64_t n_draws,
                           RandomStream stream, int n_bins = 50);

// One scatter applied to an isotropic ensemble; for even-only kernels the
// outgoing moments must stay isotropic.
struct IsotropyCheck {
  double mean_mu = 0.0;
  double mean_xi = 0.0;
  double mean_zeta = 0.0;
  double mean_mu2 = 0.0;
  std::int64_t n_samples = 0;

  // First moments within 4/sqrt(N) of 0 and <mu^2> within 4/sqrt(N) of 1/3.
  bool ok() const;
};

IsotropyCheck check_isotropy_preservation(const ScatteringKernel& kernel,
                                          std::int64_t n_samples, RandomStream stream);

}  // namespace anisoscat
