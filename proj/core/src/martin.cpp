#include "martinpot/martin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "martinpot/special.hpp"

namespace martinpot {

double oscillation_range(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("oscillation_range: empty list");
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("oscillation_range: values must be positive and finite");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi / lo;
}

// ------------------------------------------------------------ schedule

double schedule_phi(double eta, double C, double t) { return 1.0 + 0.5 * eta + C / (C + 1.0) * (t - 1.0); }

namespace {

bool eps_admissible(double eps, double eta, double C) {
  const double a = C * eps + 1.0 + eps;
  if (!(a * a * (1.0 + eps) * (1.0 + eps) < 1.0 + eta)) return false;
  const double b = 1.0 + C * C * eps;
  // Affine in t - 1 >= 0: strict at t = 1 and no steeper slope than phi.
  return b * b < 1.0 + 0.5 * eta && b * (C - 1.0) <= C;
}

}  // namespace

Schedule contraction_schedule(double eta, double C) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw std::invalid_argument("contraction_schedule: eta must be positive");
  if (!(C > 1.0) || !std::isfinite(C)) throw std::invalid_argument("contraction_schedule: C must exceed 1");
  Schedule s;
  s.eta = eta;
  s.C = C;
  s.fixed_point = 1.0 + 0.5 * eta * (C + 1.0);
  const double goal = 1.0 + eta * (C + 1.0);
  double t = C;
  do {
    t = schedule_phi(eta, C, t);
    ++s.l;
  } while (!(t < goal));
  s.phi_l_of_C = t;

  double lo = 0.0, hi = 1.0;
  while (eps_admissible(hi, eta, C)) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (eps_admissible(mid, eta, C) ? lo : hi) = mid;
  }
  if (!(lo > 0.0)) throw std::runtime_error("contraction_schedule: no admissible epsilon found");
  s.eps = lo;
  const double kk = std::floor(C * C / (lo * lo)) + 1.0;
  if (kk > 1e17) throw std::overflow_error("contraction_schedule: k exceeds the integer range");
  s.k = static_cast<std::int64_t>(kk);
  s.n = s.k * s.l;
  return s;
}

void fill_radius_multipliers(Schedule& s, const std::function<double(double)>& mass, int max_levels,
                             int max_doublings) {
  s.radius_multipliers.assign(1, 8.0);
  s.truncated = false;
  const auto wanted = static_cast<std::int64_t>(std::min<std::int64_t>(s.n + 1, max_levels));
  double q = 8.0;
  while (static_cast<std::int64_t>(s.radius_multipliers.size()) < wanted) {
    const double base = mass(q);
    bool found = false;
    for (int m = 1; m <= max_doublings; ++m) {
      const double next = q * std::ldexp(1.0, m);
      if (mass(next) - base > s.eps * base) {
        q = next;
        found = true;
        break;
      }
    }
    if (!found) {
      s.truncated = true;
      return;
    }
    s.radius_multipliers.push_back(q);
  }
  if (wanted < s.n + 1) s.truncated = true;
}

// ------------------------------------------------------------ Martin kernel

MartinEstimate estimate_martin_kernel(const ProcessSpec& spec, const Domain& domain, std::span<const Point> probes,
                                      const Point& x0, const MartinTarget& target,
                                      const std::vector<ApproachLevel>& schedule, const McConfig& cfg,
                                      const MartinOptions& opt) {
  if (probes.empty()) throw std::invalid_argument("estimate_martin_kernel: no probes");
  if (schedule.empty()) throw std::invalid_argument("estimate_martin_kernel: empty approach schedule");
  if (!domain.contains(x0)) throw std::invalid_argument("estimate_martin_kernel: x0 not in domain");
  for (const auto& p : probes)
    if (!domain.contains(p)) throw std::invalid_argument("estimate_martin_kernel: probe " + p.to_string() + " not in domain");
  for (const auto& lvl : schedule) {
    if (lvl.v.empty()) throw std::invalid_argument("estimate_martin_kernel: approach level without points");
    for (const auto& v : lvl.v)
      if (!domain.contains(v)) throw std::invalid_argument("estimate_martin_kernel: approach point not in domain");
  }

  MartinEstimate est;
  est.probes.assign(probes.begin(), probes.end());
  est.x0 = x0;
  est.target = target;
  const std::size_t np = probes.size();
  std::vector<Point> targets(probes.begin(), probes.end());
  targets.push_back(x0);
  const std::size_t K = targets.size();

  std::uint64_t block = 0;
  for (const auto& lvl : schedule) {
    MartinLevel out;
    out.v = lvl.v;
    const std::size_t m = lvl.v.size();
    std::vector<std::vector<double>> per_v(np, std::vector<double>(m));
    std::vector<std::vector<double>> per_v_se(np, std::vector<double>(m));
    for (std::size_t vi = 0; vi < m; ++vi) {
      McConfig c = cfg;
      c.stream_offset = cfg.stream_offset + block++ * static_cast<std::uint64_t>(cfg.n);
      const auto samples = green_samples(spec, domain, lvl.v[vi], targets, c, opt.wos);
      if (summarize(samples, cfg.seed, K, K - 1).diverged) out.diverged = true;
      for (std::size_t p = 0; p < np; ++p) {
        if (probes[p] == x0) {
          per_v[p][vi] = 1.0;
          per_v_se[p][vi] = 0.0;
          continue;
        }
        const Estimate r = ratio_estimate(samples, K, p, K - 1, cfg.seed);
        per_v[p][vi] = r.value;
        per_v_se[p][vi] = r.std_error;
      }
    }
    out.ratio.resize(np);
    out.ratio_se.resize(np);
    out.ro = 1.0;
    bool ro_ok = true;
    for (std::size_t p = 0; p < np; ++p) {
      double sum = 0.0, var = 0.0;
      for (std::size_t vi = 0; vi < m; ++vi) {
        sum += per_v[p][vi];
        var += per_v_se[p][vi] * per_v_se[p][vi];
      }
      out.ratio[p] = sum / static_cast<double>(m);
      out.ratio_se[p] = std::sqrt(var) / static_cast<double>(m);
      const auto [mn, mx] = std::minmax_element(per_v[p].begin(), per_v[p].end());
      if (!(*mn > 0.0) || !std::isfinite(*mx)) {
        ro_ok = false;
        continue;
      }
      const double ro = *mx / *mn;
      if (ro > out.ro || p == 0) {
        const auto imn = static_cast<std::size_t>(mn - per_v[p].begin());
        const auto imx = static_cast<std::size_t>(mx - per_v[p].begin());
        out.ro = ro;
        out.ro_se = m > 1 ? ro * std::hypot(per_v_se[p][imx] / *mx, per_v_se[p][imn] / *mn) : 0.0;
      }
    }
    if (!ro_ok) {
      out.ro = std::numeric_limits<double>::infinity();
      est.inconclusive = true;
      est.note = "nonpositive Green-ratio estimate at some level";
    }
    if (out.diverged) {
      est.inconclusive = true;
      est.note = "Monte Carlo divergence flagged at some level";
    }
    est.levels.push_back(std::move(out));
  }

  const MartinLevel& last = est.levels.back();
  est.kernel = last.ratio;
  est.kernel_se = last.ratio_se;
  bool ok = !est.inconclusive && last.ro - 1.0 < opt.ro_tol + 2.0 * last.ro_se;
  if (ok && est.levels.size() >= 2) {
    const MartinLevel& prev = est.levels[est.levels.size() - 2];
    for (std::size_t p = 0; p < np; ++p) {
      const double tol = 3.0 * std::hypot(last.ratio_se[p], prev.ratio_se[p]);
      if (std::abs(last.ratio[p] - prev.ratio[p]) > tol) ok = false;
    }
  }
  est.converged = ok;
  return est;
}

// ------------------------------------------------------------ spherical quadrature

namespace {

struct Nested {
  bool converged = true;
  int evaluations = 0;
};

// int_{S^{d-1}} g(c + rho w) dw.
double sphere_integral(const PointFunction& g, const Point& c, double rho, const quad::Options& inner, Nested& st) {
  const int d = c.dim();
  switch (d) {
    case 1:
      st.evaluations += 2;
      return g(c + Point{rho}) + g(c + Point{-rho});
    case 2: {
      const auto r = quad::integrate(
          [&](double th) { return g(c + Point{rho * std::cos(th), rho * std::sin(th)}); }, 0.0, 2.0 * std::numbers::pi,
          inner);
      st.converged = st.converged && r.converged;
      st.evaluations += r.evaluations;
      return r.value;
    }
    case 3: {
      const auto r = quad::integrate_2d(
          [&](double th, double ph) {
            const double s = std::sin(th);
            return s * g(c + Point{rho * s * std::cos(ph), rho * s * std::sin(ph), rho * std::cos(th)});
          },
          0.0, std::numbers::pi, [](double) { return 0.0; }, [](double) { return 2.0 * std::numbers::pi; }, inner, inner);
      st.converged = st.converged && r.converged;
      st.evaluations += r.evaluations;
      return r.value;
    }
    default:
      break;
  }
  throw std::invalid_argument("spherical quadrature supports d <= 3");
}

quad::Result radial_integral(const PointFunction& g, const Point& c, double lo, double hi,
                             const std::function<double(double)>& weight, const quad::Options& opt) {
  if (c.dim() > 3) throw std::invalid_argument("spherical quadrature supports d <= 3");
  quad::Options inner{opt.abs_tol, opt.rel_tol, std::max(20, opt.max_intervals / 4)};
  Nested st;
  const int d = c.dim();
  auto shell = [&](double rho) {
    if (!(rho > 0.0)) return 0.0;
    const double w = weight(rho);
    if (w == 0.0) return 0.0;
    return w * std::pow(rho, d - 1) * sphere_integral(g, c, rho, inner, st);
  };
  quad::Result r = std::isfinite(hi) ? quad::integrate(shell, lo, hi, opt) : quad::integrate_to_infinity(shell, lo, opt);
  r.converged = r.converged && st.converged;
  r.evaluations += st.evaluations;
  return r;
}

}  // namespace

quad::Result lambda_functional(const ProcessSpec& spec, const Point& z0, double p, std::optional<double> q,
                               const PointFunction& f, const quad::Options& opt,
                               const std::optional<Domain>& restrict_to) {
  if (!(p > 0.0)) throw std::invalid_argument("lambda_functional: p must be positive");
  if (q && !(*q > p)) throw std::invalid_argument("lambda_functional: need q > p");
  if (z0.dim() != spec.d()) throw std::invalid_argument("lambda_functional: dimension mismatch");
  PointFunction g = f;
  if (restrict_to) {
    const Domain dom = *restrict_to;
    g = [dom, f](const Point& y) { return dom.contains(y) ? f(y) : 0.0; };
  }
  return radial_integral(g, z0, p, q.value_or(std::numeric_limits<double>::infinity()),
                         [&](double rho) { return spec.levy_density(rho); }, opt);
}

quad::Result ball_integral(const PointFunction& f, const Point& c, double radius, const quad::Options& opt) {
  if (!(radius > 0.0)) throw std::invalid_argument("ball_integral: radius must be positive");
  return radial_integral(f, c, 0.0, radius, [](double) { return 1.0; }, opt);
}

// ------------------------------------------------------------ factorization

FactorizationReport factorization_residual(const ProcessSpec& spec, const Domain& domain, const Point& z0,
                                           FactorizationKind kind, const PointFunction& f, double r, double a,
                                           std::span<const Point> samples, const McConfig& cfg,
                                           const FactorizationOptions& opt) {
  if (!(r > 0.0)) throw std::invalid_argument("factorization_residual: r must be positive");
  if (samples.empty()) throw std::invalid_argument("factorization_residual: no sample points");
  const bool finite = kind == FactorizationKind::finite_point;
  if (finite && !(a > 0.5 && a < 1.0)) throw std::invalid_argument("factorization_residual: finite point needs 1/2 < a < 1");
  if (!finite && !(a > 1.0 && a < 2.0)) throw std::invalid_argument("factorization_residual: infinity needs 1 < a < 2");
  for (const auto& x : samples) {
    const double rho = distance(x, z0);
    const bool in_region = domain.contains(x) && (finite ? rho < r / 8.0 : rho > 8.0 * r);
    if (!in_region)
      throw std::invalid_argument("factorization_residual: sample " + x.to_string() + " outside the mandated region");
  }

  FactorizationReport rep;
  rep.kind = kind;
  rep.r = r;
  rep.a = a;
  rep.samples.assign(samples.begin(), samples.end());
  double fmax = 0.0;
  for (const auto& x : samples) {
    rep.f_values.push_back(f(x));
    fmax = std::max(fmax, std::abs(rep.f_values.back()));
  }
  if (!(fmax > 0.0)) throw std::invalid_argument("factorization_residual: f vanishes at every sample");

  const quad::Result fun = finite ? lambda_functional(spec, z0, 0.5 * a * r, std::nullopt, f, opt.quad)
                                  : ball_integral(f, z0, 2.0 * a * r, opt.quad);
  rep.functional = fun.value;

  for (std::size_t i = 0; i < samples.size(); ++i) {
    McConfig c = cfg;
    c.stream_offset = cfg.stream_offset + static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(cfg.n);
    const Estimate e = finite ? estimate_exit_time(spec, domain, samples[i], c, opt.wos)
                              : estimate_poisson_kernel(spec, domain, samples[i], z0, c, opt.wos);
    rep.mc_factor.push_back(e.value);
    rep.mc_factor_se.push_back(e.std_error);
    rep.ratios.push_back(rep.f_values[i] / (e.value * rep.functional));
  }
  const auto [mn, mx] = std::minmax_element(rep.ratios.begin(), rep.ratios.end());
  rep.c_hat = *mn > 0.0 ? *mx / *mn : std::numeric_limits<double>::infinity();
  return rep;
}

// ------------------------------------------------------------ harmonicity

HarmonicityResult harmonicity_check(const ProcessSpec& spec, const Domain& domain, const PointFunction& M,
                                    const Domain& U, const Point& x, const McConfig& cfg, const WosOptions& wos) {
  if (!U.bounded()) throw std::invalid_argument("harmonicity_check: U must be bounded");
  if (!U.contains(x)) throw std::invalid_argument("harmonicity_check: x not in U");
  if (!domain.contains(x)) throw std::invalid_argument("harmonicity_check: x not in D");
  HarmonicityResult res;
  res.value_at_x = M(x);
  auto vals = run_replicates(cfg, [&](RngStream& rng, std::int64_t) {
    const ExitRecord rec = wos_exit(rng, spec, U, x, wos);
    if (rec.truncated) return std::numeric_limits<double>::quiet_NaN();
    return domain.contains(rec.exit_point) ? M(rec.exit_point) : 0.0;
  });
  res.exit_mean = summarize(vals, cfg.seed);
  const double diff = std::abs(res.value_at_x - res.exit_mean.value);
  res.residual = res.exit_mean.std_error > 0.0 ? diff / res.exit_mean.std_error
                                               : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  return res;
}

}  // namespace martinpot
