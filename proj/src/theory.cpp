#include "anisoscat/theory.hpp"

#include <cmath>
#include <string>

namespace anisoscat {

namespace {

void require_subcritical(double g_bar) {
  if (!(g_bar < 1.0)) {
    throw SingularKernel("mean cosine " + std::to_string(g_bar) +
                         " >= 1: no diffusion limit");
  }
}

// (n)!! with (-1)!! = 1.
double double_factorial(int n) {
  double value = 1.0;
  for (int k = n; k >= 2; k -= 2) value *= k;
  return value;
}

}  // namespace

double diffusion_coefficient(double c, double sigma, double g_bar) {
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  require_subcritical(g_bar);
  return c / (3.0 * (1.0 - g_bar) * sigma);
}

double transport_mfp(double sigma, double g_bar) {
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  require_subcritical(g_bar);
  return (1.0 / sigma) / (1.0 - g_bar);
}

double amplitude(double x, double t, double D) {
  return 5.0 * std::sin(M_PI_2 * x) * std::exp(-theory_decay_rate(D) * t);
}

double theory_decay_rate(double D) { return D * M_PI_2 * M_PI_2; }

double sphere_monomial_moment(int r, int s, int t) {
  if (r < 0 || s < 0 || t < 0) throw DomainError("exponents must be non-negative");
  if (r % 2 == 1 || s % 2 == 1 || t % 2 == 1) return 0.0;
  return 4.0 * M_PI * double_factorial(r - 1) * double_factorial(s - 1) *
         double_factorial(t - 1) / double_factorial(r + s + t + 1);
}

DiffusionPrediction predict(const ScatteringKernel& kernel, double sigma, double c) {
  DiffusionPrediction prediction;
  prediction.g_bar = mean_cosine(kernel);
  prediction.lambda_s = 1.0 / sigma;
  prediction.lambda_tr = transport_mfp(sigma, prediction.g_bar);
  prediction.D = c * prediction.lambda_tr / 3.0;
  return prediction;
}

}  // namespace anisoscat
