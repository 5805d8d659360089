#pragma once

namespace sncert {

// Regularized incomplete beta I_x(a, b) via the modified Lentz continued
// fraction; relative accuracy ~1e-14 over the parameter ranges used here.
double regularized_incomplete_beta(double a, double b, double x);

// Standard normal quantile, safeguarded Newton on the CDF (erfc based).
double normal_quantile(double p);

// Student-t CDF with dof degrees of freedom.
double student_t_cdf(double t, double dof);

// Upper critical value for a central two-sided interval: the t with
// P(|T| <= t) = level. Solved by Newton on the CDF (bisection fallback,
// tolerance 1e-9 in probability) with a large-dof series for dof >= 1e5.
double t_quantile(double level, double dof);

}  // namespace sncert
