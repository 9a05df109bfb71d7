#include "martinpot/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "martinpot/quadrature.hpp"

namespace martinpot::special {

using std::numbers::pi;

double gamma(double x) { return std::tgamma(x); }
double log_gamma(double x) { return std::lgamma(x); }

double beta(double a, double b) { return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b)); }

double sphere_area(int d) { return 2.0 * std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d); }

double ball_volume(int d) { return std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0); }

double stable_levy_constant(int d, double alpha) {
  return alpha * std::pow(2.0, alpha - 1.0) * std::tgamma(0.5 * (d + alpha)) /
         (std::pow(pi, 0.5 * d) * std::tgamma(1.0 - 0.5 * alpha));
}

double stable_poisson_constant(int d, double alpha) {
  return std::tgamma(0.5 * d) * std::pow(pi, -0.5 * d - 1.0) * std::sin(0.5 * pi * alpha);
}

double stable_green_constant(int d, double alpha) {
  const double g = std::tgamma(0.5 * alpha);
  return std::tgamma(0.5 * d) / (std::pow(2.0, alpha) * std::pow(pi, 0.5 * d) * g * g);
}

double stable_exit_constant(int d, double alpha) {
  return std::tgamma(0.5 * d) /
         (std::pow(2.0, alpha) * std::tgamma(1.0 + 0.5 * alpha) * std::tgamma(0.5 * (d + alpha)));
}

double stable_riesz_constant(int d, double alpha) {
  if (!(alpha < d)) throw std::invalid_argument("whole-space Green function requires alpha < d");
  return std::tgamma(0.5 * (d - alpha)) /
         (std::pow(2.0, alpha) * std::pow(pi, 0.5 * d) * std::tgamma(0.5 * alpha));
}

double green_integral(double w, double a, double b) {
  if (w < 0.0 || !(a > 0.0)) throw std::invalid_argument("green_integral: need w >= 0, a > 0");
  if (w == 0.0) return 0.0;
  const quad::Options opt{0.0, 1e-11, 4000};
  const double c = b - a;  // second beta parameter
  if (std::isinf(w)) {
    if (!(c > 0.0)) return std::numeric_limits<double>::infinity();
    return beta(a, c);
  }
  // t = s/(1+s) maps to the incomplete beta B(T; a, c), T = w/(1+w).
  const double T = w / (1.0 + w);
  const double one_minus_T = 1.0 / (1.0 + w);
  if (c > 0.0 && T > 0.5) {
    // B(a,c) - int_T^1, with v = (1-t)^c.
    const double upper = std::pow(one_minus_T, c);
    auto tail = [&](double v) { return std::pow(1.0 - std::pow(v, 1.0 / c), a - 1.0); };
    const double t = quad::integrate(tail, 0.0, upper, opt).value / c;
    return beta(a, c) - t;
  }
  // u = t^a.
  const double upper = std::pow(T, a);
  auto head = [&](double u) {
    const double t = std::pow(u, 1.0 / a);
    return std::pow(1.0 - t, c - 1.0);
  };
  return quad::integrate(head, 0.0, upper, opt).value / a;
}

}  // namespace martinpot::special
