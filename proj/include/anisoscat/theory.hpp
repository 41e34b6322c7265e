#pragma once

#include "anisoscat/phase_function.hpp"

namespace anisoscat {

// Closed-form asymptotic prediction for a (kernel, sigma, c) triple.
struct DiffusionPrediction {
  double g_bar = 0.0;      // mean scattering cosine
  double D = 0.0;          // diffusion coefficient, length^2/time
  double lambda_tr = 0.0;  // transport mean free path
  double lambda_s = 0.0;   // scattering mean free path, 1/sigma
};

// D = c / (3 (1 - g_bar) sigma). Throws SingularKernel for g_bar >= 1.
double diffusion_coefficient(double c, double sigma, double g_bar);

// lambda_tr = (1/sigma) / (1 - g_bar): the geometric series of persistence
// of direction. Throws SingularKernel for g_bar >= 1.
double transport_mfp(double sigma, double g_bar);

// Amplitude of the sinusoidal density perturbation under the reduced model:
// A(x, t) = 5 sin(pi x / 2) exp(-D (pi/2)^2 t).
double amplitude(double x, double t, double D);

// Decay rate of the fundamental mode, D (pi/2)^2.
double theory_decay_rate(double D);

// integral over the unit sphere of mu^r xi^s zeta^t: zero when any exponent
// is odd, else 4 pi (r-1)!!(s-1)!!(t-1)!! / (r+s+t+1)!!.
double sphere_monomial_moment(int r, int s, int t);

// Assembles g_bar, lambda_s, lambda_tr and D = c lambda_tr / 3 (exact by
// construction). The kernel must be normalized.
DiffusionPrediction predict(const ScatteringKernel& kernel, double sigma, double c);

}  // namespace anisoscat
