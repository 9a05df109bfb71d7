#include "martinpot/closed_forms.hpp"

#include <cmath>
#include <stdexcept>

#include "martinpot/special.hpp"

namespace martinpot {

BallSpec::BallSpec(Point c, double r, double a) : center(c), radius(r), alpha(a) {
  if (!(r > 0.0)) throw std::invalid_argument("ball radius must be positive");
  if (!(a > 0.0 && a < 2.0)) throw std::invalid_argument("ball alpha must lie in (0, 2)");
}

namespace {

double interior_gap(const BallSpec& b, const Point& x, const char* what) {
  if (x.dim() != b.d()) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  const double g = b.radius * b.radius - (x - b.center).norm2();
  if (!(g > 0.0)) throw std::invalid_argument(std::string(what) + ": point " + x.to_string() + " not inside the ball");
  return g;
}

}  // namespace

double ball_poisson_kernel(const BallSpec& ball, const Point& x, const Point& z) {
  const double gx = interior_gap(ball, x, "ball_poisson_kernel");
  const double gz = (z - ball.center).norm2() - ball.radius * ball.radius;
  if (!(gz > 0.0))
    throw std::invalid_argument("ball_poisson_kernel: z " + z.to_string() + " not outside the closed ball");
  const int d = ball.d();
  return special::stable_poisson_constant(d, ball.alpha) * std::pow(gx / gz, 0.5 * ball.alpha) *
         std::pow(distance(x, z), -d);
}

double ball_green(const BallSpec& ball, const Point& x, const Point& y) {
  const double gx = interior_gap(ball, x, "ball_green");
  const double gy = interior_gap(ball, y, "ball_green");
  const double dxy2 = (x - y).norm2();
  if (dxy2 == 0.0) throw std::invalid_argument("ball_green: diagonal x == y");
  const int d = ball.d();
  const double w = gx * gy / (ball.radius * ball.radius * dxy2);
  return special::stable_green_constant(d, ball.alpha) * std::pow(dxy2, 0.5 * (ball.alpha - d)) *
         special::green_integral(w, 0.5 * ball.alpha, 0.5 * d);
}

double ball_green_from_center(int d, double alpha, double radius, double rho) {
  if (!(rho > 0.0 && rho < radius)) throw std::invalid_argument("ball_green_from_center: need 0 < rho < r");
  const double w = (radius * radius - rho * rho) / (rho * rho);
  return special::stable_green_constant(d, alpha) * std::pow(rho, alpha - d) *
         special::green_integral(w, 0.5 * alpha, 0.5 * d);
}

double ball_expected_exit(const BallSpec& ball, const Point& x) {
  const double gx = interior_gap(ball, x, "ball_expected_exit");
  return special::stable_exit_constant(ball.d(), ball.alpha) * std::pow(gx, 0.5 * ball.alpha);
}

double ball_martin_kernel(const BallSpec& ball, const Point& x, const Point& z, const Point& x0) {
  const double gx = interior_gap(ball, x, "ball_martin_kernel");
  const double g0 = interior_gap(ball, x0, "ball_martin_kernel");
  const double rz = distance(z, ball.center);
  if (std::abs(rz - ball.radius) > 1e-9 * ball.radius)
    throw std::invalid_argument("ball_martin_kernel: z " + z.to_string() + " not on the sphere");
  return std::pow(gx / g0, 0.5 * ball.alpha) * std::pow(distance(x0, z) / distance(x, z), ball.d());
}

double riesz_green(double alpha, int d, const Point& x, const Point& y) {
  if (!(alpha < d)) throw std::invalid_argument("riesz_green: requires alpha < d (transience)");
  const double r = distance(x, y);
  if (r == 0.0) throw std::invalid_argument("riesz_green: diagonal x == y");
  return special::stable_riesz_constant(d, alpha) * std::pow(r, alpha - d);
}

}  // namespace martinpot
