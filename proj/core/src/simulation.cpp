#include "martinpot/simulation.hpp"

#include <algorithm>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include "martinpot/closed_forms.hpp"

namespace martinpot {

void Accumulator::merge(const Accumulator& o) {
  if (o.n_ == 0) return;
  if (n_ == 0) {
    *this = o;
    return;
  }
  const std::int64_t n = n_ + o.n_;
  const double delta = o.mean_ - mean_;
  mean_ += delta * static_cast<double>(o.n_) / static_cast<double>(n);
  m2_ += o.m2_ + delta * delta * static_cast<double>(n_) * static_cast<double>(o.n_) / static_cast<double>(n);
  n_ = n;
}

namespace {

constexpr std::int64_t kBlock = 1024;

template <class Fn>
void parallel_for(const McConfig& cfg, Fn&& body) {
  if (cfg.n < 0) throw std::invalid_argument("replicate count must be nonnegative");
  const std::int64_t n = cfg.n;
  const std::int64_t max_workers = std::max<std::int64_t>(1, (n + kBlock - 1) / kBlock);
  const int workers = static_cast<int>(std::clamp<std::int64_t>(cfg.workers, 1, max_workers));
  auto run_range = [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      RngStream rng(cfg.seed, cfg.stream_offset + static_cast<std::uint64_t>(i));
      body(rng, i);
    }
  };
  if (workers == 1) {
    run_range(0, n);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  const std::int64_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t lo = std::min(n, w * chunk);
    const std::int64_t hi = std::min(n, lo + chunk);
    pool.emplace_back([&, lo, hi, w] {
      try {
        run_range(lo, hi);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

std::vector<double> run_replicates(const McConfig& cfg, const std::function<double(RngStream&, std::int64_t)>& fn) {
  std::vector<double> out(static_cast<std::size_t>(std::max<std::int64_t>(cfg.n, 0)));
  parallel_for(cfg, [&](RngStream& rng, std::int64_t i) { out[static_cast<std::size_t>(i)] = fn(rng, i); });
  return out;
}

std::vector<double> run_replicates_multi(const McConfig& cfg, int k,
                                         const std::function<void(RngStream&, std::int64_t, std::span<double>)>& fn) {
  if (k < 1) throw std::invalid_argument("run_replicates_multi: need k >= 1");
  const auto kk = static_cast<std::size_t>(k);
  std::vector<double> out(static_cast<std::size_t>(std::max<std::int64_t>(cfg.n, 0)) * kk, 0.0);
  parallel_for(cfg, [&](RngStream& rng, std::int64_t i) {
    fn(rng, i, std::span<double>(out.data() + static_cast<std::size_t>(i) * kk, kk));
  });
  return out;
}

Estimate summarize(std::span<const double> values, std::uint64_t seed, std::size_t stride, std::size_t column) {
  if (stride == 0 || column >= stride) throw std::invalid_argument("summarize: bad stride/column");
  const std::size_t rows = values.size() / stride;
  Estimate e;
  e.seed = seed;
  Accumulator total;
  Accumulator block;
  std::int64_t excluded = 0;
  std::vector<double> prefix_means;
  std::int64_t next_prefix = kBlock;
  for (std::size_t i = 0; i < rows; ++i) {
    const double v = values[i * stride + column];
    if (std::isnan(v)) {
      ++excluded;
    } else {
      block.push(v);
    }
    if (block.count() == kBlock) {
      total.merge(block);
      block = Accumulator{};
      if (total.count() == next_prefix) {
        prefix_means.push_back(total.mean());
        next_prefix *= 2;
      }
    }
  }
  total.merge(block);
  e.value = total.mean();
  e.std_error = total.std_error();
  e.n = total.count();
  e.truncated_fraction = rows ? static_cast<double>(excluded) / static_cast<double>(rows) : 0.0;
  int run = 0;
  for (std::size_t k = 1; k < prefix_means.size(); ++k) {
    const double prev = prefix_means[k - 1];
    run = (prev > 0.0 && prefix_means[k] >= 1.5 * prev) ? run + 1 : 0;
    if (run >= 4) e.diverged = true;
  }
  return e;
}

Estimate ratio_estimate(std::span<const double> samples, std::size_t stride, std::size_t num, std::size_t den,
                        std::uint64_t seed) {
  const std::size_t rows = samples.size() / stride;
  Accumulator a, b;
  for (std::size_t i = 0; i < rows; ++i) {
    const double x = samples[i * stride + num], y = samples[i * stride + den];
    if (std::isnan(x) || std::isnan(y)) continue;
    a.push(x);
    b.push(y);
  }
  Estimate e;
  e.seed = seed;
  e.n = a.count();
  if (b.mean() == 0.0) {
    e.value = std::numeric_limits<double>::quiet_NaN();
    e.std_error = std::numeric_limits<double>::infinity();
    return e;
  }
  const double r = a.mean() / b.mean();
  Accumulator resid;
  for (std::size_t i = 0; i < rows; ++i) {
    const double x = samples[i * stride + num], y = samples[i * stride + den];
    if (std::isnan(x) || std::isnan(y)) continue;
    resid.push(x - r * y);
  }
  e.value = r;
  e.std_error = resid.std_error() / std::abs(b.mean());
  return e;
}

Estimate difference_estimate(std::span<const double> samples, std::size_t stride, std::size_t a, std::size_t b,
                             std::uint64_t seed) {
  const std::size_t rows = samples.size() / stride;
  std::vector<double> diff(rows);
  for (std::size_t i = 0; i < rows; ++i) diff[i] = samples[i * stride + a] - samples[i * stride + b];
  return summarize(diff, seed);
}

// ------------------------------------------------------------ ball exits

Point uniform_direction(RngStream& rng, int d) {
  std::normal_distribution<double> normal;
  Point u(d);
  double n2 = 0.0;
  do {
    for (int k = 0; k < d; ++k) u[k] = normal(rng);
    n2 = u.norm2();
  } while (n2 == 0.0);
  return u * (1.0 / std::sqrt(n2));
}

Point sample_ball_exit(RngStream& rng, double alpha, int d, const Point& center, double radius) {
  std::gamma_distribution<double> g1(1.0 - 0.5 * alpha), g2(0.5 * alpha);
  double a = g1(rng);
  double b = 0.0;
  do b = g2(rng);
  while (b == 0.0);
  double rho = radius * std::sqrt(1.0 + a / b);
  if (!(rho > radius)) rho = std::nextafter(radius, std::numeric_limits<double>::infinity());
  return center + uniform_direction(rng, d) * rho;
}

// ------------------------------------------------------------ walk on spheres

ExitRecord wos_exit(RngStream& rng, const ProcessSpec& spec, const Domain& domain, const Point& x,
                    const WosOptions& opt) {
  return wos_walk(rng, spec, domain, x, opt, [](const Point&, double) {});
}

namespace {

Estimate finish(std::span<const double> values, const McConfig& cfg, std::int64_t escaped) {
  Estimate e = summarize(values, cfg.seed);
  e.escaped_fraction = cfg.n ? static_cast<double>(escaped) / static_cast<double>(cfg.n) : 0.0;
  return e;
}

}  // namespace

Estimate estimate_exit_time(const ProcessSpec& spec, const Domain& domain, const Point& x, const McConfig& cfg,
                            const WosOptions& opt) {
  std::vector<char> esc(static_cast<std::size_t>(std::max<std::int64_t>(cfg.n, 0)), 0);
  auto values = run_replicates(cfg, [&](RngStream& rng, std::int64_t i) {
    const ExitRecord rec = wos_exit(rng, spec, domain, x, opt);
    esc[static_cast<std::size_t>(i)] = rec.escaped;
    return rec.truncated ? std::numeric_limits<double>::quiet_NaN() : rec.exit_time_weight;
  });
  return finish(values, cfg, std::count(esc.begin(), esc.end(), 1));
}

Estimate estimate_harmonic_measure(const ProcessSpec& spec, const Domain& domain, const Point& x, const Domain& target,
                                   const McConfig& cfg, const WosOptions& opt) {
  std::vector<char> esc(static_cast<std::size_t>(std::max<std::int64_t>(cfg.n, 0)), 0);
  auto values = run_replicates(cfg, [&](RngStream& rng, std::int64_t i) {
    const ExitRecord rec = wos_exit(rng, spec, domain, x, opt);
    esc[static_cast<std::size_t>(i)] = rec.escaped;
    if (rec.truncated) return std::numeric_limits<double>::quiet_NaN();
    if (rec.escaped) return 0.0;
    return target.contains(rec.exit_point) ? 1.0 : 0.0;
  });
  return finish(values, cfg, std::count(esc.begin(), esc.end(), 1));
}

Estimate estimate_poisson_kernel(const ProcessSpec& spec, const Domain& domain, const Point& x, const Point& z,
                                 const McConfig& cfg, const WosOptions& opt) {
  if (domain.contains(z) || domain.signed_bound(z) >= 0.0)
    throw std::invalid_argument("estimate_poisson_kernel: z must lie strictly outside the closure of D");
  const int d = spec.d();
  const double alpha = spec.alpha();
  const double pc = special::stable_poisson_constant(d, alpha);
  std::vector<char> esc(static_cast<std::size_t>(std::max<std::int64_t>(cfg.n, 0)), 0);
  auto values = run_replicates(cfg, [&](RngStream& rng, std::int64_t i) {
    double score = 0.0;
    const ExitRecord rec = wos_walk(rng, spec, domain, x, opt, [&](const Point& y, double r) {
      const double dz2 = (z - y).norm2();
      score += pc * std::pow(r * r / (dz2 - r * r), 0.5 * alpha) * std::pow(dz2, -0.5 * d);
    });
    esc[static_cast<std::size_t>(i)] = rec.escaped;
    return rec.truncated ? std::numeric_limits<double>::quiet_NaN() : score;
  });
  return finish(values, cfg, std::count(esc.begin(), esc.end(), 1));
}

std::vector<double> green_samples(const ProcessSpec& spec, const Domain& domain, const Point& start,
                                  std::span<const Point> targets, const McConfig& cfg, const WosOptions& opt) {
  const int d = spec.d();
  const double alpha = spec.alpha();
  const int k = static_cast<int>(targets.size());
  return run_replicates_multi(cfg, k, [&](RngStream& rng, std::int64_t, std::span<double> out) {
    const ExitRecord rec = wos_walk(rng, spec, domain, start, opt, [&](const Point& y, double r) {
      for (int j = 0; j < k; ++j) {
        const double rho = distance(targets[static_cast<std::size_t>(j)], y);
        if (rho < r && rho > 0.0) out[static_cast<std::size_t>(j)] += ball_green_from_center(d, alpha, r, rho);
      }
    });
    if (rec.truncated)
      for (auto& v : out) v = std::numeric_limits<double>::quiet_NaN();
  });
}

Estimate estimate_green(const ProcessSpec& spec, const Domain& domain, const Point& x, const Point& y,
                        const McConfig& cfg, double excl_radius, const WosOptions& opt) {
  if (!(distance(x, y) > excl_radius))
    throw std::invalid_argument("estimate_green: |x - y| must exceed the exclusion radius");
  if (!domain.contains(y)) throw std::invalid_argument("estimate_green: y not in domain");
  const Point targets[] = {y};
  auto s = green_samples(spec, domain, x, targets, cfg, opt);
  return summarize(s, cfg.seed);
}

// ------------------------------------------------------------ path sampling

double positive_stable(RngStream& rng, double a) {
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("positive_stable: index must lie in (0, 1)");
  const double u = std::numbers::pi * rng.uniform();
  std::exponential_distribution<double> expo(1.0);
  double w = 0.0;
  do w = expo(rng);
  while (w == 0.0);
  // Kanter: (sin(a u) / sin(u)^{1/a}) * (sin((1-a) u) / w)^{(1-a)/a}.
  return std::sin(a * u) / std::pow(std::sin(u), 1.0 / a) * std::pow(std::sin((1.0 - a) * u) / w, (1.0 - a) / a);
}

namespace {

double subordinator_increment(RngStream& rng, const ProcessSpec& spec, double dt) {
  const double alpha = spec.alpha();
  switch (spec.tag().kind) {
    case ModelKind::stable:
      return std::pow(dt, 2.0 / alpha) * positive_stable(rng, 0.5 * alpha);
    case ModelKind::geometric_stable: {
      double tau = dt;
      for (int k = 0; k < spec.tag().iterations && tau > 0.0; ++k) {
        std::gamma_distribution<double> gam(tau, 1.0);
        const double g = gam(rng);
        tau = alpha >= 2.0 ? g : std::pow(g, 2.0 / alpha) * positive_stable(rng, 0.5 * alpha);
      }
      return tau;
    }
    case ModelKind::custom:
      break;
  }
  throw std::invalid_argument("path_step: custom processes have no subordinator sampler");
}

}  // namespace

Point path_step(RngStream& rng, const ProcessSpec& spec, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("path_step: dt must be positive");
  const double s = subordinator_increment(rng, spec, dt);
  std::normal_distribution<double> normal;
  Point inc(spec.d());
  const double scale = std::sqrt(2.0 * s);
  for (int k = 0; k < spec.d(); ++k) inc[k] = scale * normal(rng);
  return inc;
}

PathEnd run_path(RngStream& rng, const ProcessSpec& spec, const Domain& domain, const Point& x, const PathOptions& opt,
                 const std::function<bool(const Point&)>& visit) {
  if (!(opt.dt > 0.0 && opt.horizon > 0.0)) throw std::invalid_argument("run_path: dt and horizon must be positive");
  if (!domain.contains(x)) return PathEnd::killed;
  Point y = x;
  if (visit(y)) return PathEnd::stopped;
  const auto steps = static_cast<std::int64_t>(std::ceil(opt.horizon / opt.dt));
  for (std::int64_t s = 0; s < steps; ++s) {
    y += path_step(rng, spec, opt.dt);
    if (!domain.contains(y)) return PathEnd::killed;
    if (visit(y)) return PathEnd::stopped;
  }
  return PathEnd::horizon;
}

HitEstimate estimate_hit_value(const ProcessSpec& spec, const Domain& domain, const Domain& target,
                               const PointFunction& u, const Point& x, const McConfig& cfg, const PathOptions& opt) {
  std::vector<char> miss(static_cast<std::size_t>(std::max<std::int64_t>(cfg.n, 0)), 0);
  auto values = run_replicates(cfg, [&](RngStream& rng, std::int64_t i) {
    double value = 0.0;
    const PathEnd end = run_path(rng, spec, domain, x, opt, [&](const Point& y) {
      if (!target.contains(y)) return false;
      value = u(y);
      return true;
    });
    if (end == PathEnd::horizon) miss[static_cast<std::size_t>(i)] = 1;
    return value;
  });
  HitEstimate h;
  h.estimate = summarize(values, cfg.seed);
  h.horizon_miss_fraction =
      cfg.n ? static_cast<double>(std::count(miss.begin(), miss.end(), 1)) / static_cast<double>(cfg.n) : 0.0;
  return h;
}

}  // namespace martinpot
