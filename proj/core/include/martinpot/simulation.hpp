#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "martinpot/domain.hpp"
#include "martinpot/point.hpp"
#include "martinpot/process_model.hpp"
#include "martinpot/rng.hpp"
#include "martinpot/special.hpp"

namespace martinpot {

// Monte Carlo statistic. std_error = sample stddev / sqrt(n).
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t n = 0;
  std::uint64_t seed = 0;
  bool diverged = false;
  double truncated_fraction = 0.0;
  double escaped_fraction = 0.0;
};

// Replicate i draws from RngStream(seed, stream_offset + i). Two runs with the
// same (seed, stream_offset) therefore share random numbers replicate by
// replicate; results do not depend on `workers`.
struct McConfig {
  std::int64_t n = 10000;
  std::uint64_t seed = 1;
  int workers = 1;
  std::uint64_t stream_offset = 0;
};

// Streaming (count, mean, M2) accumulator with associative merge.
class Accumulator {
 public:
  void push(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }
  void merge(const Accumulator& o);
  std::int64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double std_error() const { return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0; }

 private:
  std::int64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// Runs fn(rng, i) for i in [0, n) across cfg.workers threads with a static
// partition; values come back in replicate order.
std::vector<double> run_replicates(const McConfig& cfg, const std::function<double(RngStream&, std::int64_t)>& fn);

// k outputs per replicate, row-major n x k.
std::vector<double> run_replicates_multi(const McConfig& cfg, int k,
                                         const std::function<void(RngStream&, std::int64_t, std::span<double>)>& fn);

// Mean and standard error of per-replicate values; NaN entries are treated as
// excluded (truncated) replicates. Blocks of fixed size are merged in index
// order, and the divergence flag is set when the prefix mean grows by at
// least 1.5x per doubling for four consecutive doublings.
Estimate summarize(std::span<const double> values, std::uint64_t seed, std::size_t stride = 1, std::size_t column = 0);

// Ratio of two column means with a delta-method standard error.
Estimate ratio_estimate(std::span<const double> samples, std::size_t stride, std::size_t num, std::size_t den,
                        std::uint64_t seed);

// Difference of two column means with the paired standard error.
Estimate difference_estimate(std::span<const double> samples, std::size_t stride, std::size_t a, std::size_t b,
                             std::uint64_t seed);

// ------------------------------------------------------------ ball exits

// Exit position of the alpha-stable process started at the centre of
// B(center, radius): |Z - c| = r sqrt(1 + G1/G2), G1 ~ Gamma(1 - alpha/2),
// G2 ~ Gamma(alpha/2), with a uniform direction. Exact.
Point sample_ball_exit(RngStream& rng, double alpha, int d, const Point& center, double radius);

Point uniform_direction(RngStream& rng, int d);

// ------------------------------------------------------------ walk on spheres

struct WosOptions {
  double shell_eps = 1e-13;
  std::int64_t max_steps = 100000;
  // Chains farther than this from far_center are stopped as escaped.
  double far_cutoff = std::numeric_limits<double>::infinity();
  Point far_center{0.0};
  bool record_chain = false;
};

struct ChainStep {
  Point center;
  double radius;
};

struct ExitRecord {
  std::vector<ChainStep> chain;  // filled when record_chain is set
  Point exit_point;
  double exit_time_weight = 0.0;  // sum of E tau over the inscribed balls
  std::int64_t steps = 0;
  bool truncated = false;
  bool escaped = false;
};

// Walk-on-spheres for a stable process. visit(center, radius) is called for
// every inscribed ball in order. Throws std::invalid_argument for non-stable
// processes or a start point outside the domain.
template <class Visitor>
ExitRecord wos_walk(RngStream& rng, const ProcessSpec& spec, const Domain& domain, const Point& x,
                    const WosOptions& opt, Visitor&& visit);

ExitRecord wos_exit(RngStream& rng, const ProcessSpec& spec, const Domain& domain, const Point& x,
                    const WosOptions& opt = {});

// ------------------------------------------------------------ estimators

// E_x tau_D as the mean accumulated ball exit-time weight.
Estimate estimate_exit_time(const ProcessSpec& spec, const Domain& domain, const Point& x, const McConfig& cfg,
                            const WosOptions& opt = {});

// P_x(X_{tau_D} in A).
Estimate estimate_harmonic_measure(const ProcessSpec& spec, const Domain& domain, const Point& x, const Domain& target,
                                   const McConfig& cfg, const WosOptions& opt = {});

// P_D(x, z) by collocation: sum over the chain of P_{B_k}(Y_k, z).
Estimate estimate_poisson_kernel(const ProcessSpec& spec, const Domain& domain, const Point& x, const Point& z,
                                 const McConfig& cfg, const WosOptions& opt = {});

// G_D(x, y) by collocation: sum over the chain of G_{B_k}(Y_k, y) 1[y in B_k].
Estimate estimate_green(const ProcessSpec& spec, const Domain& domain, const Point& x, const Point& y,
                        const McConfig& cfg, double excl_radius, const WosOptions& opt = {});

// Same collocation estimator scored at several points along shared chains
// started at `start`; returns the n x targets.size() replicate matrix.
std::vector<double> green_samples(const ProcessSpec& spec, const Domain& domain, const Point& start,
                                  std::span<const Point> targets, const McConfig& cfg, const WosOptions& opt = {});

// ------------------------------------------------------------ path sampling

// Increment of the subordinate Brownian motion over dt: sqrt(2 S) N with S
// the subordinator increment (positive (alpha/2)-stable by Kanter's
// representation; geometric stable via a Gamma time change, iterated).
Point path_step(RngStream& rng, const ProcessSpec& spec, double dt);

// Positive (alpha/2)-stable variate with Laplace transform exp(-lambda^{a}), 0 < a < 1.
double positive_stable(RngStream& rng, double a);

struct PathOptions {
  double dt = 1e-3;
  double horizon = 50.0;
};

enum class PathEnd { stopped, killed, horizon };

// Time-stepped path from x killed on leaving D. visit(position) is called at
// t = 0 and after every step while the path is in D; returning true stops it.
PathEnd run_path(RngStream& rng, const ProcessSpec& spec, const Domain& domain, const Point& x, const PathOptions& opt,
                 const std::function<bool(const Point&)>& visit);

using PointFunction = std::function<double(const Point&)>;

struct HitEstimate {
  Estimate estimate;
  double horizon_miss_fraction = 0.0;
};

// E_x[u(X_{S_A}); S_A < tau_D] with S_A the first grid time the path is in A.
// Biased by time discretisation and the horizon; both are explicit.
HitEstimate estimate_hit_value(const ProcessSpec& spec, const Domain& domain, const Domain& target,
                               const PointFunction& u, const Point& x, const McConfig& cfg,
                               const PathOptions& opt = {});

// ------------------------------------------------------------ template body

template <class Visitor>
ExitRecord wos_walk(RngStream& rng, const ProcessSpec& spec, const Domain& domain, const Point& x,
                    const WosOptions& opt, Visitor&& visit) {
  if (!spec.is_stable()) throw std::invalid_argument("walk-on-spheres needs a stable process (use run_path)");
  if (x.dim() != spec.d() || domain.dim() != spec.d()) throw std::invalid_argument("wos: dimension mismatch");
  if (!domain.contains(x)) throw std::invalid_argument("wos: start point " + x.to_string() + " not in domain");
  const double alpha = spec.alpha();
  const int d = spec.d();
  const double exit_c = special::stable_exit_constant(d, alpha);
  const bool check_far = std::isfinite(opt.far_cutoff);
  const double far2 = opt.far_cutoff * opt.far_cutoff;
  Point far_center = opt.far_center.dim() == d ? opt.far_center : Point(d);

  ExitRecord rec;
  Point y = x;
  while (domain.contains(y)) {
    if (rec.steps >= opt.max_steps) {
      rec.truncated = true;
      break;
    }
    if (check_far && (y - far_center).norm2() > far2) {
      rec.escaped = true;
      break;
    }
    const double r = std::max(0.0, domain.signed_bound(y));
    if (r < opt.shell_eps) {
      rec.truncated = true;
      break;
    }
    visit(y, r);
    if (opt.record_chain) rec.chain.push_back({y, r});
    rec.exit_time_weight += exit_c * std::pow(r, alpha);
    ++rec.steps;
    y = sample_ball_exit(rng, alpha, d, y, r);
  }
  rec.exit_point = y;
  return rec;
}

}  // namespace martinpot
