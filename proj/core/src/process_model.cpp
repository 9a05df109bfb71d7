#include "martinpot/process_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "martinpot/special.hpp"

namespace martinpot {
namespace {

// log(log(1 + e^x)) without overflow or underflow.
double log_log1p_exp(double x) {
  if (x < -35.0) return x;                  // log1p(e^x) = e^x (1 - e^x / 2 + ...)
  if (x > 35.0) return std::log(x + std::exp(-x));  // log1p(e^x) = x + log1p(e^-x)
  return std::log(std::log1p(std::exp(x)));
}

}  // namespace

double geometric_laplace_exponent(double lambda, double alpha, int iterations) {
  double v = lambda;
  for (int k = 0; k < iterations; ++k) v = std::log1p(std::pow(v, 0.5 * alpha));
  return v;
}

double ProcessSpec::psi0(double t) const {
  if (t < 0.0) throw std::invalid_argument("psi0: argument must be nonnegative");
  switch (tag_.kind) {
    case ModelKind::stable:
      return std::pow(t, tag_.alpha);
    case ModelKind::geometric_stable:
      return geometric_laplace_exponent(t * t, tag_.alpha, tag_.iterations);
    case ModelKind::custom:
      return custom_psi0_(t);
  }
  return 0.0;
}

double ProcessSpec::log_psi0_at_log(double v) const {
  switch (tag_.kind) {
    case ModelKind::stable:
      return tag_.alpha * v;
    case ModelKind::geometric_stable: {
      double log_lambda = 2.0 * v;
      for (int k = 0; k < tag_.iterations; ++k) log_lambda = log_log1p_exp(0.5 * tag_.alpha * log_lambda);
      return log_lambda;
    }
    case ModelKind::custom:
      return std::log(custom_psi0_(std::exp(v)));
  }
  return 0.0;
}

double ProcessSpec::levy_density(double r) const {
  if (!(r > 0.0)) throw std::invalid_argument("levy_density: r must be positive");
  switch (tag_.kind) {
    case ModelKind::stable:
      return levy_constant_ * std::pow(r, -d_ - tag_.alpha);
    case ModelKind::geometric_stable:
      return psi0(1.0 / r) * std::pow(r, -d_);
    case ModelKind::custom:
      return custom_levy_(r);
  }
  return 0.0;
}

std::string ProcessSpec::describe() const {
  std::ostringstream os;
  switch (tag_.kind) {
    case ModelKind::stable:
      os << "stable(alpha=" << tag_.alpha << ", d=" << d_ << ")";
      break;
    case ModelKind::geometric_stable:
      os << "geometric_stable(alpha=" << tag_.alpha << ", d=" << d_ << ", iterations=" << tag_.iterations
         << ")";
      break;
    case ModelKind::custom:
      os << "custom(d=" << d_ << ")";
      break;
  }
  return os.str();
}

ProcessSpec make_stable(double alpha, int d) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("stable: alpha must lie in (0, 2)");
  if (d < 1) throw std::invalid_argument("stable: dimension must be >= 1");
  ProcessSpec p;
  p.d_ = d;
  p.tag_ = {ModelKind::stable, alpha, 0};
  p.levy_constant_ = special::stable_levy_constant(d, alpha);
  const ScalingIndices exact{0.5 * alpha, 0.5 * alpha, 1.0, 1.0};
  p.h1_ = exact;
  p.h2_ = exact;
  return p;
}

ProcessSpec make_geometric_stable(double alpha, int d, int iterations) {
  if (d < 1) throw std::invalid_argument("geometric_stable: dimension must be >= 1");
  if (iterations < 1) throw std::invalid_argument("geometric_stable: iterations must be >= 1");
  const bool alpha_ok = d >= 3 ? (alpha > 0.0 && alpha <= 2.0) : (alpha > 0.0 && alpha < 2.0);
  if (!alpha_ok)
    throw std::invalid_argument(d >= 3 ? "geometric_stable: alpha must lie in (0, 2] for d >= 3"
                                       : "geometric_stable: alpha must lie in (0, 2) for d <= 2");
  ProcessSpec p;
  p.d_ = d;
  p.tag_ = {ModelKind::geometric_stable, alpha, iterations};
  // psi0 grows logarithmically at infinity: no H1. Near zero psi0(t) ~ t^{2 (alpha/2)^n}.
  const double delta0 = std::pow(0.5 * alpha, iterations);
  if (delta0 < 1.0) p.h2_ = ScalingIndices{delta0, delta0, 0.0, 1.0};
  return p;
}

ProcessSpec make_custom(int d, RadialFunction psi0, RadialFunction levy_density,
                        std::optional<ScalingIndices> h1, std::optional<ScalingIndices> h2) {
  if (d < 1) throw std::invalid_argument("custom: dimension must be >= 1");
  if (!psi0 || !levy_density) throw std::invalid_argument("custom: psi0 and levy density are required");
  ProcessSpec p;
  p.d_ = d;
  p.tag_ = {ModelKind::custom, 0.0, 0};
  p.custom_psi0_ = std::move(psi0);
  p.custom_levy_ = std::move(levy_density);
  p.h1_ = h1;
  p.h2_ = h2;
  return p;
}

std::vector<ScalingPair> log_pair_grid(double lo, double hi, int points) {
  if (!(lo > 0.0 && hi > lo) || points < 2) throw std::invalid_argument("log_pair_grid: bad range");
  std::vector<double> nodes(static_cast<std::size_t>(points));
  const double step = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) nodes[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
  nodes.back() = hi;
  std::vector<ScalingPair> grid;
  for (int i = 0; i < points; ++i)
    for (int j = i + 1; j < points; ++j) grid.push_back({nodes[static_cast<std::size_t>(i)], nodes[static_cast<std::size_t>(j)]});
  return grid;
}

ScalingReport check_scaling(const ProcessSpec& spec, ScalingRegime which, const std::vector<ScalingPair>& grid,
                            double delta_floor) {
  ScalingReport rep;
  rep.which = which;
  for (const auto& [s, t] : grid) {
    const bool ok = which == ScalingRegime::h1 ? (t >= s && s >= 1.0) : (s > 0.0 && s <= t && t <= 1.0);
    if (!ok) {
      ++rep.rejected_pairs;
      continue;
    }
    rep.samples.push_back({s, t, spec.psi0(t) / spec.psi0(s)});
  }
  if (rep.samples.empty()) throw std::invalid_argument("check_scaling: no admissible (s, t) pairs in grid");

  // Least squares through the origin: log ratio = 2 delta log(t/s).
  double sxy = 0.0, sxx = 0.0;
  rep.delta_low = std::numeric_limits<double>::infinity();
  rep.delta_high = -std::numeric_limits<double>::infinity();
  for (const auto& smp : rep.samples) {
    const double x = std::log(smp.t / smp.s);
    if (x <= 0.0) continue;
    const double y = std::log(smp.ratio);
    sxy += x * y;
    sxx += x * x;
    const double local = y / (2.0 * x);
    rep.delta_low = std::min(rep.delta_low, local);
    rep.delta_high = std::max(rep.delta_high, local);
  }
  if (sxx == 0.0) {
    // Only diagonal pairs: no exponent information.
    rep.delta_low = rep.delta_high = rep.delta_fit = 0.0;
    rep.a_low = rep.a_high = 1.0;
    rep.pass = false;
    return rep;
  }
  rep.delta_fit = sxy / (2.0 * sxx);
  rep.a_low = std::numeric_limits<double>::infinity();
  rep.a_high = 0.0;
  for (const auto& smp : rep.samples) {
    const double env = std::pow(smp.t / smp.s, 2.0 * rep.delta_fit);
    rep.a_low = std::min(rep.a_low, smp.ratio / env);
    rep.a_high = std::max(rep.a_high, smp.ratio / env);
  }
  rep.pass = rep.delta_low >= delta_floor && rep.delta_high < 1.0;
  return rep;
}

double levy_density_asymptotic(const ProcessSpec& spec, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("levy_density_asymptotic: r must be positive");
  return spec.psi0(1.0 / r) * std::pow(r, -spec.d());
}

}  // namespace martinpot
