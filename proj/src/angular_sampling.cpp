#include "anisoscat/angular_sampling.hpp"

#include <algorithm>
#include <cmath>

namespace anisoscat {

namespace {

// splitmix64 output function (Steele, Lea, Flood 2014).
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : key_(mix64(mix64(seed + kGolden) + stream_id)), counter_(0) {}

std::uint64_t RandomStream::next_u64() {
  counter_ += kGolden;
  return mix64(key_ + counter_);
}

namespace {
constexpr int kCdfTableBins = 4096;
constexpr int kUSlots = 4096;
}

CosineSampler::CosineSampler(const ScatteringKernel& kernel) {
  if (!kernel.normalized) {
    throw KernelError("cosine sampler requires a normalized kernel");
  }
  pdf_coeffs_ = to_monomial(kernel).coeffs;
  const int n = static_cast<int>(pdf_coeffs_.size());
  cdf_coeffs_ = Eigen::VectorXd::Zero(n + 1);
  for (int l = 0; l < n; ++l) cdf_coeffs_[l + 1] = pdf_coeffs_[l] / (l + 1.0);
  // Constant term anchors F(-1) = 0.
  double at_minus_one = 0.0;
  for (int j = n; j >= 1; --j) at_minus_one = -at_minus_one + cdf_coeffs_[j];
  cdf_coeffs_[0] = at_minus_one;  // = -A(-1) since degree >= 1 terms flip sign

  n_pairs_ = (n + 2) / 2;
  for (int j = 0; j <= n; ++j) cdf_flat_[j] = cdf_coeffs_[j];

  cdf_table_ = Eigen::ArrayXd(kCdfTableBins + 1);
  for (int i = 0; i <= kCdfTableBins; ++i) {
    cdf_table_[i] = cdf(-1.0 + 2.0 * i / kCdfTableBins);
  }

  // For each u slot, the last grid index whose F value does not exceed the
  // slot start; gives an O(1) starting bracket for the bisection.
  bracket_lo_.assign(kUSlots + 1, 0);
  int i = 0;
  for (int j = 0; j <= kUSlots; ++j) {
    const double u_edge = static_cast<double>(j) / kUSlots;
    while (i < kCdfTableBins && cdf_table_[i + 1] <= u_edge) ++i;
    bracket_lo_[j] = static_cast<std::int16_t>(i);
  }
}

double CosineSampler::pdf(double mu) const {
  double value = 0.0;
  for (int l = static_cast<int>(pdf_coeffs_.size()) - 1; l >= 0; --l) {
    value = value * mu + pdf_coeffs_[l];
  }
  return value;
}

double CosineSampler::cdf(double mu) const {
  double value = 0.0;
  for (int j = static_cast<int>(cdf_coeffs_.size()) - 1; j >= 0; --j) {
    value = value * mu + cdf_coeffs_[j];
  }
  return value;
}

double CosineSampler::invert(double u) const {
  // Slot lookup shrinks the starting bracket; for a monotone CDF the root
  // stays inside it, and for a corrupt table the residual check still fails.
  int slot = static_cast<int>(u * kUSlots);
  if (slot < 0) slot = 0;
  if (slot >= kUSlots) slot = kUSlots - 1;
  const int lo_idx = bracket_lo_[slot];
  int hi_idx = bracket_lo_[slot + 1] + 1;
  if (hi_idx > kCdfTableBins) hi_idx = kCdfTableBins;
  double lo = -1.0 + 2.0 * lo_idx / kCdfTableBins;
  double hi = -1.0 + 2.0 * hi_idx / kCdfTableBins;

  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double residual = cdf_horner(mid) - u;
    if (std::abs(residual) <= 1e-12) return mid;
    // Ternaries compile to conditional moves; the branch itself would be
    // unpredictable by construction.
    const bool go_right = residual < 0.0;
    lo = go_right ? mid : lo;
    hi = go_right ? hi : mid;
  }
  // A monotone CDF always hits the tolerance well inside 60 halvings.
  const double mid = 0.5 * (lo + hi);
  if (std::abs(cdf_horner(mid) - u) <= 1e-12) return mid;
  throw ConvergenceFailure("inverse-CDF bisection stalled; kernel CDF is not monotone");
}

double sample_cosine(const ScatteringKernel& kernel, RandomStream& stream) {
  return CosineSampler(kernel).sample(stream);
}

double sample_azimuth(RandomStream& stream) {
  return azimuth_from_uniform(stream.uniform());
}

Direction rotate_direction(const Direction& incoming, double cos_theta, double phi) {
  const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
  const Direction axis = std::abs(incoming.z()) > 1.0 - 1e-10
                             ? Direction::UnitX()
                             : Direction::UnitZ();
  const Direction e1 = (axis - axis.dot(incoming) * incoming).normalized();
  const Direction e2 = incoming.cross(e1);
  return cos_theta * incoming + sin_theta * (std::cos(phi) * e1 + std::sin(phi) * e2);
}

Direction isotropic_from_uniforms(double u1, double u2) {
  const double z = 2.0 * u1 - 1.0;
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double phi = azimuth_from_uniform(u2);
  return {r * std::cos(phi), r * std::sin(phi), z};
}

Direction sample_isotropic(RandomStream& stream) {
  const double u1 = stream.uniform();
  const double u2 = stream.uniform();
  return isotropic_from_uniforms(u1, u2);
}

}  // namespace anisoscat
