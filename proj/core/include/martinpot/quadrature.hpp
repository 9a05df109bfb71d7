#pragma once

#include <functional>
#include <limits>

namespace martinpot::quad {

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_intervals = 2000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

// Globally adaptive 15-point Gauss-Kronrod on a finite interval. The interval
// with the largest error estimate is bisected until the total estimate meets
// max(abs_tol, rel_tol * |value|) or the interval budget is spent. Integrable
// endpoint singularities are tolerated (nodes never touch the endpoints).
Result integrate(const Integrand& f, double a, double b, const Options& opt = {});

// Integral over [a, +inf) through x = a + t / (1 - t).
Result integrate_to_infinity(const Integrand& f, double a, const Options& opt = {});

// Integral over [a, b] of an integrand with an algebraic endpoint singularity
// (x - a)^(-p), p < 1, at the left end; uses x = a + (b - a) s^(1/(1-p)).
Result integrate_left_singular(const Integrand& f, double a, double b, double p,
                               const Options& opt = {});

// Nested two-dimensional integral over [a0,b0] x [a1(x), b1(x)].
Result integrate_2d(const std::function<double(double, double)>& f, double a0, double b0,
                    const std::function<double(double)>& a1, const std::function<double(double)>& b1,
                    const Options& outer = {}, const Options& inner = {});

}  // namespace martinpot::quad
