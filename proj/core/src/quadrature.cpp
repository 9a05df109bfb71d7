#include "martinpot/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace martinpot::quad {
namespace {

// Kronrod nodes on [0,1] half of [-1,1]; index 0 is the centre.
constexpr std::array<double, 8> kXgk = {
    0.000000000000000000000000000000000, 0.207784955007898467600689403773245,
    0.405845151377397166906606412076961, 0.586087235467691130294144845693013,
    0.741531185599394439863864773280788, 0.864864423359769072789712788640926,
    0.949107912342758524526189684047851, 0.991455371120812639206854697526329};
constexpr std::array<double, 8> kWgk = {
    0.209482141084727828012999174891714, 0.204432940075298892414161999234649,
    0.190350578064785409913256402421014, 0.169004726639267902826583426598550,
    0.140653259715525918745189590510238, 0.104790010322250183839876322541518,
    0.063092092629978553290700663189204, 0.022935322010529224963732008058970};
// Gauss weights attached to the odd-indexed Kronrod nodes (2,4,6) and centre.
constexpr double kWgCentre = 0.417959183673469387755102040816327;
constexpr std::array<double, 3> kWg = {0.381830050505118944950369775488975,
                                       0.279705391489276667901467771423780,
                                       0.129484966168869693270611432679082};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const Integrand& f, double a, double b, int& evals) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  std::array<double, 15> fv{};
  fv[0] = f(c);
  for (int j = 1; j < 8; ++j) {
    const double dx = h * kXgk[j];
    fv[2 * j - 1] = f(c - dx);
    fv[2 * j] = f(c + dx);
  }
  evals += 15;
  double resk = fv[0] * kWgk[0];
  double resg = fv[0] * kWgCentre;
  for (int j = 1; j < 8; ++j) {
    const double s = fv[2 * j - 1] + fv[2 * j];
    resk += kWgk[j] * s;
    if (j % 2 == 0) resg += kWg[j / 2 - 1] * s;
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[0] * std::abs(fv[0] - mean);
  for (int j = 1; j < 8; ++j)
    resasc += kWgk[j] * (std::abs(fv[2 * j - 1] - mean) + std::abs(fv[2 * j] - mean));
  resasc *= std::abs(h);
  const double value = resk * h;
  double err = std::abs((resk - resg) * h);
  // QUADPACK error scaling.
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (!std::isfinite(value)) err = std::numeric_limits<double>::infinity();
  return {a, b, value, std::max(err, 50.0 * std::numeric_limits<double>::epsilon() * std::abs(value))};
}

}  // namespace

Result integrate(const Integrand& f, double a, double b, const Options& opt) {
  Result r;
  if (a == b) {
    r.converged = true;
    return r;
  }
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  std::priority_queue<Segment> heap;
  Segment first = gk15(f, a, b, r.evaluations);
  heap.push(first);
  double total = first.value;
  double total_err = first.error;
  int intervals = 1;
  while (total_err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) &&
         intervals < opt.max_intervals) {
    Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) break;  // interval at machine resolution
    heap.pop();
    Segment left = gk15(f, worst.a, mid, r.evaluations);
    Segment right = gk15(f, mid, worst.b, r.evaluations);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }
  // Re-sum to shed the drift of the running updates.
  total = 0.0;
  total_err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    total_err += heap.top().error;
    heap.pop();
  }
  r.value = sign * total;
  r.error = total_err;
  r.converged = std::isfinite(total) && total_err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
  return r;
}

Result integrate_to_infinity(const Integrand& f, double a, const Options& opt) {
  auto g = [&](double t) {
    const double one_minus = 1.0 - t;
    const double x = a + t / one_minus;
    const double v = f(x);
    return v == 0.0 ? 0.0 : v / (one_minus * one_minus);
  };
  return integrate(g, 0.0, 1.0, opt);
}

Result integrate_left_singular(const Integrand& f, double a, double b, double p, const Options& opt) {
  const double q = 1.0 - p;  // x - a = (b - a) s^(1/q)
  auto g = [&](double s) {
    const double sp = std::pow(s, 1.0 / q);
    const double jac = (b - a) / q * std::pow(s, 1.0 / q - 1.0);
    return f(a + (b - a) * sp) * jac;
  };
  return integrate(g, 0.0, 1.0, opt);
}

Result integrate_2d(const std::function<double(double, double)>& f, double a0, double b0,
                    const std::function<double(double)>& a1, const std::function<double(double)>& b1,
                    const Options& outer, const Options& inner) {
  bool all_inner = true;
  int inner_evals = 0;
  auto row = [&](double x) {
    Result r = integrate([&](double y) { return f(x, y); }, a1(x), b1(x), inner);
    all_inner = all_inner && r.converged;
    inner_evals += r.evaluations;
    return r.value;
  };
  Result r = integrate(row, a0, b0, outer);
  r.evaluations += inner_evals;
  r.converged = r.converged && all_inner;
  return r;
}

}  // namespace martinpot::quad
