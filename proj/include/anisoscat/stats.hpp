#pragma once

namespace anisoscat {

// Regularized upper incomplete gamma function Q(a, x), a > 0, x >= 0.
// Series expansion for x < a + 1, Lentz continued fraction otherwise.
double gamma_q(double a, double x);

// Survival function of the chi-squared distribution: P(X > chi2) with
// `dof` degrees of freedom.
double chi_squared_p_value(double chi2, int dof);

}  // namespace anisoscat
