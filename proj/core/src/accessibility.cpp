#include "martinpot/accessibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "martinpot/quadrature.hpp"
#include "martinpot/special.hpp"

namespace martinpot {

std::string to_string(Divergence v) {
  switch (v) {
    case Divergence::divergent:
      return "divergent";
    case Divergence::convergent:
      return "convergent";
    case Divergence::inconclusive:
      break;
  }
  return "inconclusive";
}

std::string to_string(Accessibility a) {
  switch (a) {
    case Accessibility::accessible:
      return "accessible";
    case Accessibility::inaccessible:
      return "inaccessible";
    case Accessibility::inconclusive:
      break;
  }
  return "inconclusive";
}

namespace {

std::vector<double> increments_of(std::span<const double> partials) {
  std::vector<double> inc(partials.size());
  for (std::size_t j = 0; j < partials.size(); ++j) inc[j] = j == 0 ? partials[0] : partials[j] - partials[j - 1];
  return inc;
}

std::vector<double> ratios_of(const std::vector<double>& inc) {
  std::vector<double> r;
  for (std::size_t j = 1; j < inc.size(); ++j) {
    if (inc[j - 1] == 0.0)
      r.push_back(inc[j] == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    else
      r.push_back(inc[j] / inc[j - 1]);
  }
  return r;
}

}  // namespace

Divergence classify(std::span<const double> partials, const ClassifyOptions& opt) {
  if (partials.size() < 4) throw std::invalid_argument("classify: need at least 4 truncation levels");
  for (double p : partials)
    if (!std::isfinite(p)) return Divergence::inconclusive;
  const auto inc = increments_of(partials);
  if (std::any_of(inc.begin(), inc.end(), [](double x) { return x < 0.0; })) return Divergence::inconclusive;
  const auto ratios = ratios_of(inc);
  const std::size_t tail = std::min<std::size_t>(ratios.size(), static_cast<std::size_t>(std::max(1, opt.tail_ratios)));
  const auto tail_begin = ratios.end() - static_cast<std::ptrdiff_t>(tail);
  const double tail_min = *std::min_element(tail_begin, ratios.end());
  const double tail_max = *std::max_element(tail_begin, ratios.end());

  const double floor = opt.eps_div_rel * inc.front();
  const bool bounded_below = inc.front() > 0.0 && std::all_of(inc.begin(), inc.end(), [&](double x) { return x >= floor; });
  if (bounded_below && tail_min >= opt.flat_ratio) return Divergence::divergent;

  if (tail_max <= opt.decay_ratio) {
    const double rho = tail_max;
    const double tail_bound = inc.back() * rho / (1.0 - rho);
    if (tail_bound <= opt.tail_rel_tol * std::abs(partials.back())) return Divergence::convergent;
  }
  return Divergence::inconclusive;
}

DivergenceReport make_divergence_report(std::string integrand, std::string variable, std::vector<double> truncations,
                                        std::vector<double> partials, const ClassifyOptions& opt) {
  DivergenceReport rep;
  rep.integrand = std::move(integrand);
  rep.variable = std::move(variable);
  rep.truncations = std::move(truncations);
  rep.partials = std::move(partials);
  rep.increments = increments_of(rep.partials);
  rep.increment_ratios = ratios_of(rep.increments);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t j = 0; j < rep.increments.size(); ++j) {
    if (!(rep.increments[j] > 0.0)) continue;
    const double x = static_cast<double>(j), y = std::log(rep.increments[j]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m >= 2) rep.growth_exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  rep.verdict = rep.partials.size() >= 4 ? classify(rep.partials, opt) : Divergence::inconclusive;
  return rep;
}

// ------------------------------------------------------------ thorn tests

double thorn_log_integrand(const ProcessSpec& spec, const Profile& f, double u) {
  const double lf = f.log_value_at_log(u);
  return spec.log_psi0_at_log(-u) - spec.log_psi0_at_log(-lf) + (spec.d() - 1) * (lf - u);
}

namespace {

void check_profile(const Profile& f, double u_lo, double u_hi, bool toward_zero) {
  constexpr int kSamples = 400;
  double prev = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kSamples; ++i) {
    // Sample uniformly in log u so both ends of the range are resolved.
    const double s = std::exp(std::log(u_lo) + (std::log(u_hi) - std::log(u_lo)) * i / kSamples);
    const double u = toward_zero ? -s : s;
    const double lf = f.log_value_at_log(u);
    if (lf > u + 1e-12 * std::max(1.0, std::abs(u)))
      throw std::invalid_argument("thorn profile violates f(t) <= t at t = exp(" + std::to_string(u) + ")");
    // Walking toward zero the profile must not increase.
    const double key = toward_zero ? -lf : lf;
    if (key < prev - 1e-12 * std::max(1.0, std::abs(lf)))
      throw std::invalid_argument("thorn profile is not nondecreasing");
    prev = key;
  }
}

void check_hypothesis(const ProcessSpec& spec, ScalingRegime which) {
  const auto grid = which == ScalingRegime::h1 ? log_pair_grid(1.0, 1e8, 17) : log_pair_grid(1e-8, 1.0, 17);
  const ScalingReport rep = check_scaling(spec, which, grid);
  if (!rep.pass)
    throw std::invalid_argument(std::string("thorn test: process fails ") + (which == ScalingRegime::h1 ? "H1" : "H2") +
                                " (delta_low = " + std::to_string(rep.delta_low) +
                                ", delta_high = " + std::to_string(rep.delta_high) + ")");
}

DivergenceReport thorn_test(const ProcessSpec& spec, const Profile& f, const ThornTestOptions& opt, bool toward_zero) {
  if (opt.levels < 4) throw std::invalid_argument("thorn test: need at least 4 levels");
  if (!(opt.u0 > 0.0 && opt.growth > 1.0)) throw std::invalid_argument("thorn test: need u0 > 0 and growth > 1");
  std::vector<double> cuts(static_cast<std::size_t>(opt.levels) + 1);
  for (int k = 0; k <= opt.levels; ++k) cuts[static_cast<std::size_t>(k)] = opt.u0 * std::pow(opt.growth, k);
  check_profile(f, cuts.front(), cuts.back(), toward_zero);
  if (opt.check_hypotheses) {
    check_hypothesis(spec, ScalingRegime::h1);
    if (!toward_zero) check_hypothesis(spec, ScalingRegime::h2);
  }
  const double sign = toward_zero ? -1.0 : 1.0;
  // Each level is integrated in w = log u, where the integrand is smooth on
  // intervals of unit length however large u gets.
  auto integrand = [&](double w) {
    const double u = std::exp(w);
    return std::exp(thorn_log_integrand(spec, f, sign * u) + w);
  };
  // The log integrand is a difference of terms of size u, so its relative
  // rounding noise is about u * machine epsilon at the deepest level.
  quad::Options qo{0.0, 1e-7, 4000};
  std::vector<double> partials;
  std::vector<double> truncs;
  double total = 0.0;
  bool all_converged = true;
  for (int k = 1; k <= opt.levels; ++k) {
    const auto r = quad::integrate(integrand, std::log(cuts[static_cast<std::size_t>(k - 1)]),
                                   std::log(cuts[static_cast<std::size_t>(k)]), qo);
    all_converged = all_converged && r.converged;
    total += r.value;
    partials.push_back(total);
    truncs.push_back(cuts[static_cast<std::size_t>(k)]);
  }
  DivergenceReport rep = make_divergence_report(
      toward_zero ? "psi0(1/t)/psi0(1/f(t)) f(t)^{d-1}/t^d on (0,1)" : "psi0(1/t)/psi0(1/f(t)) f(t)^{d-1}/t^d on (2,inf)",
      toward_zero ? "log(1/t)" : "log(t)", std::move(truncs), std::move(partials), opt.classify);
  if (!all_converged) {
    rep.note = "quadrature did not reach tolerance on every level";
    rep.verdict = Divergence::inconclusive;
  }
  return rep;
}

}  // namespace

DivergenceReport thorn_infinity_test(const ProcessSpec& spec, const Profile& f, const ThornTestOptions& opt) {
  return thorn_test(spec, f, opt, false);
}

DivergenceReport thorn_finite_test(const ProcessSpec& spec, const Profile& f, const ThornTestOptions& opt) {
  return thorn_test(spec, f, opt, true);
}

// ------------------------------------------------------------ Monte Carlo tests

namespace {

bool on_boundary(const Domain& domain, const Point& z0) {
  if (domain.contains(z0)) return false;
  const int d = z0.dim();
  for (double eps : {1e-3, 1e-5, 1e-7}) {
    for (int k = 0; k < d; ++k)
      for (double s : {1.0, -1.0})
        if (domain.contains(z0 + Point::axis(d, k, s * eps))) return true;
    RngStream rng(0x5eed, static_cast<std::uint64_t>(eps * 1e9));
    for (int i = 0; i < 512; ++i)
      if (domain.contains(z0 + uniform_direction(rng, d) * eps)) return true;
  }
  return false;
}

Point uniform_in_annulus(RngStream& rng, const Point& c, double a, double b) {
  const int d = c.dim();
  const double ad = std::pow(a, d), bd = std::pow(b, d);
  const double r = std::pow(ad + rng.uniform() * (bd - ad), 1.0 / d);
  return c + uniform_direction(rng, d) * r;
}

double annulus_volume(int d, double a, double b) { return special::ball_volume(d) * (std::pow(b, d) - std::pow(a, d)); }

struct ShellResult {
  std::vector<double> values;
  std::vector<double> errors;
  std::vector<std::int64_t> hits;
  double truncated = 0.0;
};

// Shell k spans [lo_k, hi_k]; `score` returns the single-chain contribution at y.
template <class Score>
ShellResult shell_integrals(const std::vector<std::pair<double, double>>& shells, const Domain& region, const Point& c,
                            const McConfig& cfg, Score&& score) {
  ShellResult out;
  double trunc_sum = 0.0;
  for (std::size_t k = 0; k < shells.size(); ++k) {
    const auto [a, b] = shells[k];
    const double vol = annulus_volume(c.dim(), a, b);
    McConfig sc = cfg;
    sc.stream_offset = cfg.stream_offset + static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(cfg.n);
    std::vector<char> hit(static_cast<std::size_t>(cfg.n), 0);
    auto vals = run_replicates(sc, [&](RngStream& rng, std::int64_t i) {
      const Point y = uniform_in_annulus(rng, c, a, b);
      if (!region.contains(y)) return 0.0;
      hit[static_cast<std::size_t>(i)] = 1;
      return vol * score(rng, y);
    });
    const Estimate e = summarize(vals, cfg.seed);
    out.values.push_back(e.value);
    out.errors.push_back(e.std_error);
    out.hits.push_back(std::count(hit.begin(), hit.end(), 1));
    trunc_sum += e.truncated_fraction;
  }
  out.truncated = shells.empty() ? 0.0 : trunc_sum / static_cast<double>(shells.size());
  return out;
}

AccessVerdict finish_verdict(std::optional<Point> target, std::string method, std::string integrand,
                             const std::vector<std::pair<double, double>>& shells, const ShellResult& sr,
                             const ShellTestOptions& opt, bool toward_zero) {
  AccessVerdict v;
  v.target = target;
  v.method = std::move(method);
  std::vector<double> partials, truncs;
  double total = 0.0;
  for (std::size_t k = 0; k < shells.size(); ++k) {
    total += sr.values[k];
    partials.push_back(total);
    truncs.push_back(toward_zero ? shells[k].first : shells[k].second);
  }
  v.evidence = make_divergence_report(std::move(integrand), "radius", std::move(truncs), std::move(partials), opt.classify);
  v.shell_std_errors = sr.errors;
  const bool starved = std::any_of(sr.hits.begin(), sr.hits.end(), [&](std::int64_t h) { return h < opt.min_hits; });
  if (starved) {
    v.evidence.note = "too few samples in the domain for at least one shell";
    v.verdict = Accessibility::inconclusive;
    return v;
  }
  if (sr.truncated > 0.01) {
    v.evidence.note = "walk-on-spheres budget exhausted on more than 1% of chains";
    v.verdict = Accessibility::inconclusive;
    return v;
  }
  switch (v.evidence.verdict) {
    case Divergence::divergent:
      v.verdict = Accessibility::accessible;
      break;
    case Divergence::convergent:
      v.verdict = Accessibility::inaccessible;
      break;
    case Divergence::inconclusive:
      v.verdict = Accessibility::inconclusive;
      break;
  }
  return v;
}

}  // namespace

AccessVerdict finite_point_test(const ProcessSpec& spec, const Domain& domain, const Point& z0, const McConfig& cfg,
                                const ShellTestOptions& opt) {
  if (!spec.is_stable()) throw std::invalid_argument("finite_point_test: needs a stable process");
  if (z0.dim() != spec.d()) throw std::invalid_argument("finite_point_test: dimension mismatch");
  if (!on_boundary(domain, z0)) throw std::invalid_argument("finite_point_test: z0 " + z0.to_string() + " is not on the boundary");
  if (opt.shells < 4) throw std::invalid_argument("finite_point_test: need at least 4 shells");
  const Domain d1 = truncate_inside(domain, z0, 1.0);
  std::vector<std::pair<double, double>> shells;
  for (int k = 0; k < opt.shells; ++k) shells.emplace_back(std::ldexp(1.0, -k - 1), std::ldexp(1.0, -k));
  const auto sr = shell_integrals(shells, d1, z0, cfg, [&](RngStream& rng, const Point& y) {
    const ExitRecord rec = wos_exit(rng, spec, d1, y, opt.wos);
    if (rec.truncated) return std::numeric_limits<double>::quiet_NaN();
    return rec.exit_time_weight * spec.levy_density(distance(y, z0));
  });
  return finish_verdict(z0, "shell Monte Carlo of E_y[tau_D1] j(y - z0)", "E_y[tau_D1] j(|y - z0|) on D1", shells, sr, opt,
                        true);
}

AccessVerdict infinity_test(const ProcessSpec& spec, const Domain& domain, const McConfig& cfg,
                            const ShellTestOptions& opt) {
  if (!spec.is_stable()) throw std::invalid_argument("infinity_test: needs a stable process");
  if (domain.bounded()) throw std::invalid_argument("infinity_test: domain is bounded");
  if (opt.shells < 4) throw std::invalid_argument("infinity_test: need at least 4 shells");
  const int d = spec.d();
  const double alpha = spec.alpha();
  const double pc = special::stable_poisson_constant(d, alpha);
  const Point origin(d);
  const Domain d1 = truncate_outside(domain, origin, 1.0);
  std::vector<std::pair<double, double>> shells;
  for (int k = 0; k < opt.shells; ++k) shells.emplace_back(std::ldexp(1.0, k), std::ldexp(1.0, k + 1));
  const auto sr = shell_integrals(shells, d1, origin, cfg, [&](RngStream& rng, const Point& y) {
    double score = 0.0;
    const ExitRecord rec = wos_walk(rng, spec, d1, y, opt.wos, [&](const Point& c, double r) {
      const double dz2 = c.norm2();
      score += pc * std::pow(r * r / (dz2 - r * r), 0.5 * alpha) * std::pow(dz2, -0.5 * d);
    });
    return rec.truncated ? std::numeric_limits<double>::quiet_NaN() : score;
  });
  return finish_verdict(std::nullopt, "annulus Monte Carlo of P_{D^1}(y, 0)", "P_{D^1}(y, 0) on D^1", shells, sr, opt,
                        false);
}

GrowthProbeResult growth_probe(const ProcessSpec& spec, const Domain& domain, const Point& x0,
                               const std::vector<double>& radius_schedule, const McConfig& cfg, const WosOptions& wos) {
  if (!domain.contains(x0)) throw std::invalid_argument("growth_probe: x0 not in domain");
  if (radius_schedule.empty() || !std::is_sorted(radius_schedule.begin(), radius_schedule.end()) ||
      !(radius_schedule.front() > 0.0))
    throw std::invalid_argument("growth_probe: radii must be positive and increasing");
  const int k = static_cast<int>(radius_schedule.size());
  const double exit_c = special::stable_exit_constant(spec.d(), spec.alpha());
  const double alpha = spec.alpha();
  auto samples = run_replicates_multi(cfg, k, [&](RngStream& rng, std::int64_t, std::span<double> out) {
    const ExitRecord rec = wos_walk(rng, spec, domain, x0, wos, [&](const Point& y, double r) {
      const double rho = distance(y, x0);
      const auto it = std::upper_bound(radius_schedule.begin(), radius_schedule.end(), rho);
      if (it != radius_schedule.end()) out[static_cast<std::size_t>(it - radius_schedule.begin())] += exit_c * std::pow(r, alpha);
    });
    if (rec.truncated)
      for (auto& v : out) v = std::numeric_limits<double>::quiet_NaN();
  });
  GrowthProbeResult res;
  const auto stride = static_cast<std::size_t>(k);
  const std::size_t rows = samples.size() / stride;
  std::vector<double> cumulative(samples.size());
  for (std::size_t i = 0; i < rows; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < stride; ++j) {
      acc += samples[i * stride + j];
      cumulative[i * stride + j] = acc;
    }
  }
  std::vector<double> partials;
  for (std::size_t j = 0; j < stride; ++j) {
    const Estimate a = summarize(samples, cfg.seed, stride, j);
    res.annulus_mass.push_back(a.value);
    res.annulus_std_error.push_back(a.std_error);
    partials.push_back(summarize(cumulative, cfg.seed, stride, j).value);
    res.truncated_fraction = a.truncated_fraction;
  }
  for (std::size_t j = 1; j < partials.size(); ++j)
    res.growth_ratios.push_back(partials[j - 1] > 0.0 ? partials[j] / partials[j - 1]
                                                      : std::numeric_limits<double>::infinity());
  std::vector<double> truncs(radius_schedule.begin(), radius_schedule.end());
  if (partials.size() >= 4) {
    res.report = make_divergence_report("G_D(x0, y) on D intersect B(x0, R)", "radius", std::move(truncs), std::move(partials));
  } else {
    res.report.integrand = "G_D(x0, y) on D intersect B(x0, R)";
    res.report.variable = "radius";
    res.report.truncations = std::move(truncs);
    res.report.partials = std::move(partials);
    res.report.note = "fewer than 4 radii: not classified";
  }
  return res;
}

}  // namespace martinpot
