#pragma once

#include <Eigen/Dense>
#include <string>

#include "anisoscat/errors.hpp"

namespace anisoscat {

enum class Basis { Legendre, Monomial };

// Polynomial scattering phase function p(mu), mu = cos(theta) in [-1, 1],
// written either as sum_l c_l P_l(mu) or as sum_l c_l mu^l. The function is
// the azimuthally integrated density of the scattering cosine, so the
// isotropic kernel is the constant 1/2.
struct ScatteringKernel {
  Basis basis = Basis::Monomial;
  Eigen::VectorXd coeffs;  // c_0 .. c_L
  bool normalized = false;

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
};

// Double precision carries exact dyadic Legendre coefficients comfortably to
// this order; beyond it the basis conversion loses accuracy.
inline constexpr int kMaxKernelOrder = 32;

// Throws KernelError unless the kernel has 1..kMaxKernelOrder+1 finite
// coefficients.
void validate_kernel(const ScatteringKernel& kernel);

// Column l holds the monomial coefficients of P_l.
Eigen::MatrixXd legendre_to_monomial_matrix(int order);

// Rewrites the kernel in the monomial basis; identity if already monomial.
ScatteringKernel to_monomial(const ScatteringKernel& kernel);

// integral_{-1}^{1} p(mu) dmu, evaluated exactly from the coefficients.
double normalization_integral(const ScatteringKernel& kernel);

// Scales coefficients so the kernel integrates to one. Idempotent; throws
// NonPositiveNormalization when the integral is <= 0.
ScatteringKernel normalize(const ScatteringKernel& kernel);

// p(mu) by Horner evaluation in the monomial basis. Throws DomainError for
// |mu| > 1.
double evaluate(const ScatteringKernel& kernel, double mu);

// integral_{-1}^{1} mu^k p(mu) dmu = sum_l c*_l 2/(l+k+1) over even l+k.
// Requires a normalized kernel.
double polynomial_moment(const ScatteringKernel& kernel, int k);

// Mean scattering cosine: the first polynomial moment.
double mean_cosine(const ScatteringKernel& kernel);

// Evaluates p on a uniform grid and throws NegativeDensity at the most
// negative point if the minimum drops below -1e-12.
void validate_positivity(const ScatteringKernel& kernel, int grid_points = 10001);

// Textual kernel format used by config files:
//   basis=legendre|monomial; coeffs=c0,c1,...
// Case-insensitive, whitespace ignored.
ScatteringKernel parse_kernel(const std::string& text);
std::string format_kernel(const ScatteringKernel& kernel);

}  // namespace anisoscat
