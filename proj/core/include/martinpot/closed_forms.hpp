#pragma once

#include "martinpot/point.hpp"

// Closed-form potential theory of the isotropic alpha-stable process on balls
// and on the whole space. These are the oracles every Monte Carlo estimator in
// the toolkit is checked against.

namespace martinpot {

struct BallSpec {
  Point center;
  double radius;
  double alpha;

  BallSpec(Point c, double r, double a);
  int d() const { return center.dim(); }
};

// C(d,alpha) [(r^2 - |x-c|^2) / (|z-c|^2 - r^2)]^{alpha/2} |x - z|^{-d}
// for |x - c| < r < |z - c|.
double ball_poisson_kernel(const BallSpec& ball, const Point& x, const Point& z);

// B(d,alpha) |x-y|^{alpha-d} int_0^w s^{alpha/2-1} (1+s)^{-d/2} ds,
// w = (r^2 - |x-c|^2)(r^2 - |y-c|^2) / (r^2 |x-y|^2). Throws on x == y.
double ball_green(const BallSpec& ball, const Point& x, const Point& y);

// Green function with the first argument at the centre, as a function of
// rho = |y - c| < r. Used on the hot path of walk-on-spheres scoring.
double ball_green_from_center(int d, double alpha, double radius, double rho);

// c(d,alpha) (r^2 - |x-c|^2)^{alpha/2}.
double ball_expected_exit(const BallSpec& ball, const Point& x);

// [(r^2 - |x-c|^2) / (r^2 - |x0-c|^2)]^{alpha/2} (|x0 - z| / |x - z|)^d for |z - c| = r.
double ball_martin_kernel(const BallSpec& ball, const Point& x, const Point& z, const Point& x0);

// A(d,alpha) |x - y|^{alpha - d}; requires alpha < d.
double riesz_green(double alpha, int d, const Point& x, const Point& y);

}  // namespace martinpot
