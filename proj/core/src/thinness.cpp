#include "martinpot/thinness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "martinpot/closed_forms.hpp"

namespace martinpot {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Inner paths of the reduction check draw from a stream range far from the
// outer replicates.
constexpr std::uint64_t kInnerStreamBase = std::uint64_t{1} << 48;

}  // namespace

// ------------------------------------------------------------ reduced functions

std::vector<ReducedEstimate> estimate_reduced(const ProcessSpec& spec, const Domain& D, const Domain& A,
                                              const PointFunction& u, std::span<const Point> probes,
                                              const McConfig& cfg, const ReducedOptions& opt) {
  std::vector<ReducedEstimate> out;
  for (std::size_t j = 0; j < probes.size(); ++j) {
    if (!D.contains(probes[j])) throw std::invalid_argument("estimate_reduced: probe " + probes[j].to_string() + " not in D");
    McConfig c = cfg;
    c.stream_offset = cfg.stream_offset + static_cast<std::uint64_t>(j) * static_cast<std::uint64_t>(cfg.n);
    ReducedEstimate r;
    r.probe = probes[j];
    const HitEstimate h = estimate_hit_value(spec, D, A, u, probes[j], c, opt.path);
    r.value = h.estimate;
    r.horizon_miss_fraction = h.horizon_miss_fraction;
    r.u_value = u(probes[j]);
    r.exceeds_u = r.value.value > r.u_value + 3.0 * r.value.std_error;
    if (opt.halving_check) {
      PathOptions half = opt.path;
      half.dt *= 0.5;
      r.half_dt = estimate_hit_value(spec, D, A, u, probes[j], c, half).estimate;
    }
    out.push_back(r);
  }
  return out;
}

// ------------------------------------------------------------ reduction identity

ReductionReport reduction_identity_check(const ProcessSpec& spec, const Domain& D, const Domain& E,
                                         const std::optional<Domain>& F, const PointFunction& u,
                                         std::span<const Point> probes, const McConfig& cfg,
                                         const ReductionOptions& opt) {
  if (opt.inner_paths < 1) throw std::invalid_argument("reduction_identity_check: need at least one inner path");
  const auto m = static_cast<std::uint64_t>(opt.inner_paths);
  auto in_F = [&](const Point& y) { return F && F->contains(y); };
  // u at the first grid visit of D \ E, or 0 when the path dies or times out first.
  auto first_outside_E = [&](RngStream& rng, const Point& start) {
    double val = 0.0;
    run_path(rng, spec, D, start, opt.path, [&](const Point& y) {
      if (E.contains(y)) return false;
      val = u(y);
      return true;
    });
    return val;
  };

  ReductionReport rep;
  for (std::size_t j = 0; j < probes.size(); ++j) {
    const Point x = probes[j];
    if (!E.contains(x) || !D.contains(x)) throw std::invalid_argument("reduction_identity_check: probe must lie in E");
    McConfig c = cfg;
    c.stream_offset = cfg.stream_offset + static_cast<std::uint64_t>(j) * static_cast<std::uint64_t>(cfg.n);
    auto samples = run_replicates_multi(c, 2, [&](RngStream& rng, std::int64_t i, std::span<double> out) {
      bool hit_f = false;
      Point y_f;
      double u_first = 0.0;  // u at the first hit of (D\E) u F
      double u_de = 0.0;     // u at the first hit of D\E
      run_path(rng, spec, D, x, opt.path, [&](const Point& y) {
        if (!E.contains(y)) {
          u_de = u(y);
          if (!hit_f) u_first = u_de;
          return true;
        }
        if (!hit_f && in_F(y)) {
          hit_f = true;
          y_f = y;
          u_first = u(y);
        }
        return false;
      });
      out[1] = u_first - u_de;
      if (!hit_f) {
        out[0] = 0.0;
        return;
      }
      double inner = 0.0;
      const std::uint64_t base =
          kInnerStreamBase + (c.stream_offset + static_cast<std::uint64_t>(i)) * m;
      for (std::uint64_t k = 0; k < m; ++k) {
        RngStream r2(cfg.seed, base + k);
        inner += first_outside_E(r2, y_f);
      }
      out[0] = u_first - inner / static_cast<double>(m);
    });
    ReductionProbe p;
    p.x = x;
    p.lhs = summarize(samples, cfg.seed, 2, 0);
    p.rhs = summarize(samples, cfg.seed, 2, 1);
    p.difference = difference_estimate(samples, 2, 0, 1, cfg.seed);
    const double diff = std::abs(p.difference.value);
    p.residual = p.difference.std_error > 0.0 ? diff / p.difference.std_error
                                              : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    rep.max_residual = std::max(rep.max_residual, p.residual);
    rep.probes.push_back(p);
  }
  return rep;
}

// ------------------------------------------------------------ minimal thinness

std::string to_string(Thinness t) {
  switch (t) {
    case Thinness::thin:
      return "thin";
    case Thinness::not_thin:
      return "not-thin";
    case Thinness::inconclusive:
      break;
  }
  return "inconclusive";
}

namespace {

// Columns per replicate: for each target j, [total_j, after_j].
std::vector<double> coupled_green_samples(const ProcessSpec& spec, const Domain& D, const std::optional<Domain>& F,
                                          const Point& v, std::span<const Point> targets, const McConfig& cfg,
                                          const WosOptions& wos) {
  if (!spec.is_stable()) throw std::invalid_argument("thinness_test: needs a stable process");
  const int d = spec.d();
  const double alpha = spec.alpha();
  const std::optional<Domain> DF = F ? std::optional<Domain>(subtract(D, *F)) : std::nullopt;
  const std::size_t K = targets.size();
  return run_replicates_multi(cfg, static_cast<int>(2 * K), [&](RngStream& rng, std::int64_t, std::span<double> out) {
    Point y = v;
    bool entered = DF.has_value() && !DF->contains(y);
    std::int64_t steps = 0;
    bool truncated = false;
    while (D.contains(y)) {
      if (steps >= wos.max_steps) {
        truncated = true;
        break;
      }
      double r = 0.0;
      if (!entered && F) {
        if (!DF->contains(y)) {
          entered = true;
        } else {
          r = DF->signed_bound(y);
          // A chain stalled against the boundary of F counts as having entered it.
          if (r < wos.shell_eps && D.signed_bound(y) >= wos.shell_eps) entered = true;
        }
      }
      if (entered || !F) r = D.signed_bound(y);
      if (r < wos.shell_eps) {
        truncated = true;
        break;
      }
      for (std::size_t j = 0; j < K; ++j) {
        const double rho = distance(targets[j], y);
        if (rho < r && rho > 0.0) {
          const double g = ball_green_from_center(d, alpha, r, rho);
          out[2 * j] += g;
          if (entered) out[2 * j + 1] += g;
        }
      }
      ++steps;
      y = sample_ball_exit(rng, alpha, d, y, r);
    }
    if (truncated)
      for (auto& val : out) val = kNaN;
  });
}

struct ApproachResult {
  std::vector<ThinnessProbe> probes;
  double truncated = 0.0;
};

ApproachResult evaluate_approach(const ProcessSpec& spec, const Domain& D, const std::optional<Domain>& F,
                                 const Point& v, std::span<const Point> probes, const Point& x0, const McConfig& cfg,
                                 const WosOptions& wos) {
  std::vector<Point> targets(probes.begin(), probes.end());
  targets.push_back(x0);
  const std::size_t K = targets.size();
  const auto s = coupled_green_samples(spec, D, F, v, targets, cfg, wos);
  const std::size_t stride = 2 * K;
  const std::size_t base = 2 * (K - 1);  // total score at x0
  ApproachResult res;
  res.truncated = summarize(s, cfg.seed, stride, base).truncated_fraction;
  for (std::size_t j = 0; j + 1 < K; ++j) {
    ThinnessProbe p;
    p.x = probes[j];
    const Estimate m = ratio_estimate(s, stride, 2 * j, base, cfg.seed);
    const Estimate r = ratio_estimate(s, stride, 2 * j + 1, base, cfg.seed);
    const Estimate q = ratio_estimate(s, stride, 2 * j + 1, 2 * j, cfg.seed);
    p.martin = m.value;
    p.martin_se = m.std_error;
    p.reduced = r.value;
    p.reduced_se = r.std_error;
    p.fraction = q.value;
    p.fraction_se = q.std_error;
    res.probes.push_back(p);
  }
  return res;
}

}  // namespace

ThinnessReport thinness_test(const ProcessSpec& spec, const Domain& D, const std::optional<Domain>& F,
                             const MartinTarget& target, std::span<const Point> probes, const Point& x0,
                             std::span<const Point> approach, const McConfig& cfg, const ThinnessOptions& opt) {
  if (probes.empty()) throw std::invalid_argument("thinness_test: no probes");
  if (approach.empty()) throw std::invalid_argument("thinness_test: no approach points");
  if (!D.contains(x0)) throw std::invalid_argument("thinness_test: x0 not in D");
  for (const auto& p : probes)
    if (!D.contains(p)) throw std::invalid_argument("thinness_test: probe " + p.to_string() + " not in D");
  for (const auto& v : approach)
    if (!D.contains(v)) throw std::invalid_argument("thinness_test: approach point " + v.to_string() + " not in D");

  ThinnessReport rep;
  rep.target = target;
  rep.x0 = x0;
  rep.approach = approach.back();
  const ApproachResult last = evaluate_approach(spec, D, F, approach.back(), probes, x0, cfg, opt.wos);
  rep.probes = last.probes;
  rep.truncated_fraction = last.truncated;

  if (approach.size() >= 2) {
    McConfig c = cfg;
    c.stream_offset = cfg.stream_offset + static_cast<std::uint64_t>(cfg.n);
    const ApproachResult prev = evaluate_approach(spec, D, F, approach[approach.size() - 2], probes, x0, c, opt.wos);
    for (std::size_t j = 0; j < probes.size(); ++j) {
      const auto& a = last.probes[j];
      const auto& b = prev.probes[j];
      const double tol = opt.sigma * std::hypot(a.martin_se, b.martin_se) + opt.martin_rel_tol * std::abs(a.martin);
      if (!(std::abs(a.martin - b.martin) <= tol)) rep.martin_converged = false;
    }
  }

  int thin = 0;
  bool all_equal = true;
  bool finite = true;
  for (const auto& p : rep.probes) {
    if (!std::isfinite(p.fraction) || !std::isfinite(p.fraction_se)) {
      finite = false;
      continue;
    }
    if (p.fraction < 1.0 - opt.sigma * p.fraction_se) ++thin;
    if (!(std::abs(1.0 - p.fraction) <= opt.sigma * p.fraction_se)) all_equal = false;
  }
  rep.thin_fraction = static_cast<double>(thin) / static_cast<double>(rep.probes.size());
  // G_{D\F}(., v) vanishes for v in F, so the fraction is 1 whatever F looks
  // like near the target. Approach points must avoid F for a thin verdict to
  // be reachable.
  const bool approach_in_F = F && F->contains(rep.approach);
  if (!finite) {
    rep.verdict = Thinness::inconclusive;
    rep.note = "Green estimate vanished at some probe";
  } else if (!rep.martin_converged) {
    rep.verdict = Thinness::inconclusive;
    rep.note = "Martin estimate not converged along the approach points";
  } else if (rep.truncated_fraction > 0.01) {
    rep.verdict = Thinness::inconclusive;
    rep.note = "walk-on-spheres budget exhausted on more than 1% of chains";
  } else if (3 * thin >= 2 * static_cast<int>(rep.probes.size())) {
    rep.verdict = Thinness::thin;
  } else if (all_equal) {
    rep.verdict = Thinness::not_thin;
    if (approach_in_F) rep.note = "approach point lies in F";
  } else {
    rep.verdict = Thinness::inconclusive;
  }
  return rep;
}

LocalityReport locality_experiment(const ProcessSpec& spec, const Domain& D, const Domain& E,
                                   const std::optional<Domain>& F, const MartinTarget& target, double radius,
                                   std::span<const Point> probes, const Point& x0, std::span<const Point> approach,
                                   const McConfig& cfg, const ThinnessOptions& opt) {
  if (!(radius > 0.0)) throw std::invalid_argument("locality_experiment: radius must be positive");
  const int d = spec.d();
  const Point c = target.point.value_or(Point(d));
  RngStream rng(0x10ca1, 0);
  for (int i = 0; i < 20000; ++i) {
    const Point dir = uniform_direction(rng, d);
    const double rho = target.point ? radius * std::pow(rng.uniform(), 1.0 / d) : radius * (1.0 + 15.0 * rng.uniform());
    const Point y = c + dir * rho;
    if (D.contains(y) != E.contains(y))
      throw std::invalid_argument("locality_experiment: E differs from D near the target at " + y.to_string());
  }
  LocalityReport rep;
  rep.in_E = thinness_test(spec, E, F, target, probes, x0, approach, cfg, opt);
  rep.in_D = thinness_test(spec, D, F, target, probes, x0, approach, cfg, opt);
  rep.agree = rep.in_E.verdict == rep.in_D.verdict || rep.in_E.verdict == Thinness::inconclusive ||
              rep.in_D.verdict == Thinness::inconclusive;
  return rep;
}

}  // namespace martinpot
