#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

#include "anisoscat/phase_function.hpp"

namespace anisoscat {

// Unit direction in 3D Cartesian components (mu, xi, zeta).
using Direction = Eigen::Vector3d;

// Counter-based random stream: the n-th draw is a pure function of
// (seed, stream_id, n). One stream per particle history makes results
// independent of thread count and scheduling. The generator is the
// splitmix64 output function applied to a keyed Weyl sequence.
class RandomStream {
 public:
  RandomStream() = default;
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

// Exact polynomial CDF of a normalized kernel, used for inverse-CDF draws.
// F(mu) = sum_l c*_l (mu^{l+1} - (-1)^{l+1}) / (l+1), so F(-1)=0 and F(1)=1.
class CosineSampler {
 public:
  // The kernel must be normalized (and should be positivity-validated).
  explicit CosineSampler(const ScatteringKernel& kernel);

  double pdf(double mu) const;
  double cdf(double mu) const;

  // Solves F(mu) = u by bisection to |F(mu) - u| <= 1e-12 within 60
  // iterations; throws ConvergenceFailure otherwise (non-monotone CDF). A
  // precomputed CDF table narrows the starting bracket from [-1, 1].
  double invert(double u) const;

  double sample(RandomStream& stream) const { return invert(stream.uniform()); }

 private:
  // Second-order Horner in mu^2: the pair terms evaluate in parallel, which
  // halves the dependency chain inside the bisection loop.
  double cdf_horner(double mu) const {
    const double t = mu * mu;
    const double* c = cdf_flat_.data();
    double value = c[2 * n_pairs_ - 2] + c[2 * n_pairs_ - 1] * mu;
    for (int k = 2 * n_pairs_ - 4; k >= 0; k -= 2) {
      value = value * t + (c[k] + c[k + 1] * mu);
    }
    return value;
  }

  Eigen::VectorXd pdf_coeffs_;  // monomial c*_0 .. c*_L
  Eigen::VectorXd cdf_coeffs_;  // degree L+1 polynomial including constant
  std::array<double, 36> cdf_flat_{};  // zero-padded hot-loop copy
  int n_pairs_ = 0;
  Eigen::ArrayXd cdf_table_;          // F on a uniform mu grid
  std::vector<std::int16_t> bracket_lo_;  // per u-slot: largest grid i with F_i <= slot start
};

// Convenience wrapper; prefer a CosineSampler in hot loops.
double sample_cosine(const ScatteringKernel& kernel, RandomStream& stream);

// Azimuth is uniform by the azimuthal symmetry of p(Omega' -> Omega).
inline double azimuth_from_uniform(double u) { return 2.0 * M_PI * u; }
double sample_azimuth(RandomStream& stream);

// Rotates `incoming` by scattering angle acos(cos_theta) and azimuth phi in a
// right-handed frame about the incoming direction. Near the z pole
// (|z| > 1 - 1e-10) the frame is seeded from the x axis instead.
Direction rotate_direction(const Direction& incoming, double cos_theta, double phi);

// Uniform direction on the unit sphere: z = 2 u1 - 1, azimuth 2 pi u2.
Direction isotropic_from_uniforms(double u1, double u2);
Direction sample_isotropic(RandomStream& stream);

}  // namespace anisoscat
