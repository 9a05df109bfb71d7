#pragma once

// Normalising constants of the isotropic alpha-stable process with
// characteristic exponent |xi|^alpha, and the incomplete-beta integral that
// appears in the ball Green function.

namespace martinpot::special {

double gamma(double x);
double log_gamma(double x);
double beta(double a, double b);

// Surface area of the unit sphere S^{d-1}.
double sphere_area(int d);
// Volume of the unit ball in R^d.
double ball_volume(int d);

// Levy density constant A: j(r) = A r^{-d-alpha}.
double stable_levy_constant(int d, double alpha);
// Ball Poisson kernel constant Gamma(d/2) pi^{-d/2-1} sin(pi alpha / 2).
double stable_poisson_constant(int d, double alpha);
// Ball Green constant Gamma(d/2) / (2^alpha pi^{d/2} Gamma(alpha/2)^2).
double stable_green_constant(int d, double alpha);
// Expected exit time constant Gamma(d/2) / (2^alpha Gamma(1+alpha/2) Gamma((d+alpha)/2)).
double stable_exit_constant(int d, double alpha);
// Whole-space Green constant Gamma((d-alpha)/2) / (2^alpha pi^{d/2} Gamma(alpha/2)); alpha < d.
double stable_riesz_constant(int d, double alpha);

// I(w) = int_0^w s^{a-1} (1+s)^{-b} ds for w >= 0, a > 0, by adaptive
// quadrature after endpoint-regularising substitutions; when b > a and the
// upper limit is past the midpoint of the beta variable the complementary
// tail is integrated instead. Relative accuracy ~1e-10.
double green_integral(double w, double a, double b);

}  // namespace martinpot::special
