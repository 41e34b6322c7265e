#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "anisoscat/presets.hpp"
#include "anisoscat/theory.hpp"
#include "oracles.hpp"

using namespace anisoscat;

TEST_CASE("diffusion coefficient") {
  CHECK(diffusion_coefficient(1.0, 10.0, 0.0) == doctest::Approx(1.0 / 30.0).epsilon(1e-15));
  CHECK(diffusion_coefficient(1.0, 10.0, 1.0 / 3.0) == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(diffusion_coefficient(1.0, 10.0, -1.0 / 3.0) == doctest::Approx(0.025).epsilon(1e-15));
  CHECK_THROWS_AS(diffusion_coefficient(1.0, 10.0, 1.0), SingularKernel);
  CHECK_THROWS_AS(diffusion_coefficient(1.0, 10.0, 1.5), SingularKernel);
  CHECK_THROWS_AS(diffusion_coefficient(1.0, -1.0, 0.0), DomainError);
}

TEST_CASE("transport mean free path") {
  CHECK(transport_mfp(1.0, 0.0) == 1.0);
  CHECK(transport_mfp(10.0, 1.0 / 3.0) == doctest::Approx(0.15).epsilon(1e-15));
  CHECK(transport_mfp(10.0, -1.0 / 3.0) == doctest::Approx(0.075).epsilon(1e-15));
  CHECK_THROWS_AS(transport_mfp(10.0, 1.0), SingularKernel);
}

TEST_CASE("amplitude of the decaying mode") {
  CHECK(amplitude(1.0, 0.0, 0.123) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(std::abs(amplitude(0.0, 3.7, 0.02)) <= 1e-14);
  // D = c/(3 sigma) at sigma = 10: frozen from 5 exp(-pi^2/40).
  CHECK(amplitude(1.0, 3.0, 1.0 / 30.0) ==
        doctest::Approx(3.906718652737221).epsilon(1e-14));
  CHECK(amplitude(-1.0, 1.0, 0.05) == doctest::Approx(-amplitude(1.0, 1.0, 0.05)).epsilon(1e-15));
}

TEST_CASE("sphere monomial moments") {
  CHECK(sphere_monomial_moment(1, 0, 0) == 0.0);
  CHECK(sphere_monomial_moment(0, 0, 0) == doctest::Approx(4.0 * M_PI).epsilon(1e-15));
  // Quadrature oracle fixes the value before the closed form is trusted.
  CHECK(oracles::sphere_moment(2, 0, 0) == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-12));
  CHECK(sphere_monomial_moment(2, 0, 0) == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-15));

  for (int r = 0; r <= 8; ++r) {
    for (int s = 0; r + s <= 8; ++s) {
      for (int t = 0; r + s + t <= 8; ++t) {
        CAPTURE(r);
        CAPTURE(s);
        CAPTURE(t);
        const double closed = sphere_monomial_moment(r, s, t);
        if (r % 2 == 1 || s % 2 == 1 || t % 2 == 1) {
          CHECK(closed == 0.0);
        } else {
          const double reference = oracles::sphere_moment(r, s, t);
          CHECK(std::abs(closed - reference) <= 1e-10 * std::abs(reference));
        }
      }
    }
  }
  CHECK_THROWS_AS(sphere_monomial_moment(-1, 0, 0), DomainError);
}

TEST_CASE("predictions for every preset match the tabulated D") {
  struct Expected {
    const char* name;
    double g;
    double d_coeff;  // D sigma / c
  };
  const Expected table[] = {
      {"isotropic", 0.0, 1.0 / 3.0}, {"S2", 0.0, 1.0 / 3.0},
      {"S4", 0.0, 1.0 / 3.0},        {"S6", 0.0, 1.0 / 3.0},
      {"F1", 1.0 / 3.0, 0.5},        {"F3", 1.0 / 3.0, 0.5},
      {"F5", 1.0 / 3.0, 0.5},        {"F7", 1.0 / 3.0, 0.5},
      {"B1", -1.0 / 3.0, 0.25},      {"B3", -1.0 / 3.0, 0.25},
      {"B5", -1.0 / 3.0, 0.25},      {"B7", -1.0 / 3.0, 0.25},
  };
  for (const auto& row : table) {
    CAPTURE(row.name);
    const double sigma = 25.0;
    const double c = 1.0;
    const auto prediction = predict(normalize(preset_kernel(row.name)), sigma, c);
    CHECK(prediction.g_bar == doctest::Approx(row.g).epsilon(1e-14));
    CHECK(prediction.D * sigma / c == doctest::Approx(row.d_coeff).epsilon(1e-14));
    // The two derivations of D agree to machine precision.
    CHECK(prediction.D ==
          doctest::Approx(diffusion_coefficient(c, sigma, prediction.g_bar)).epsilon(1e-15));
    // D = c lambda_tr / 3 holds exactly by construction.
    CHECK(prediction.D == c * prediction.lambda_tr / 3.0);
    // lambda_tr straddles lambda_s according to the sign of g_bar.
    if (prediction.g_bar >= 0.0) {
      CHECK(prediction.lambda_tr >= prediction.lambda_s);
    } else {
      CHECK(prediction.lambda_tr <= prediction.lambda_s);
    }
  }
  CHECK(predict(normalize(preset_kernel("isotropic")), 10.0, 1.0).D ==
        doctest::Approx(1.0 / 30.0).epsilon(1e-15));
  CHECK(predict(normalize(preset_kernel("F7")), 25.0, 1.0).D ==
        doctest::Approx(0.02).epsilon(1e-14));
  CHECK(predict(normalize(preset_kernel("B3")), 25.0, 1.0).D ==
        doctest::Approx(0.01).epsilon(1e-14));
}

TEST_CASE("fully forward scattering has no diffusion limit") {
  // No polynomial density reaches g_bar = 1, so drive the scalar forms.
  CHECK_THROWS_AS(transport_mfp(1.0, 1.0), SingularKernel);
  CHECK_THROWS_AS(diffusion_coefficient(1.0, 1.0, 1.0 + 1e-12), SingularKernel);
}

TEST_CASE("decay rate") {
  CHECK(theory_decay_rate(1.0 / 30.0) ==
        doctest::Approx(0.082246703342411).epsilon(1e-12));
}
