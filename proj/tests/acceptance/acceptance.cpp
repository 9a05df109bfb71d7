// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances and sample sizes are pinned below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "martinpot/accessibility.hpp"
#include "martinpot/closed_forms.hpp"
#include "martinpot/domain.hpp"
#include "martinpot/martin.hpp"
#include "martinpot/quadrature.hpp"
#include "martinpot/simulation.hpp"
#include "martinpot/special.hpp"
#include "martinpot/thinness.hpp"
#include "martinpot_cli/cli.hpp"

using namespace martinpot;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int workers() { return std::max(1u, std::thread::hardware_concurrency()); }

Point axis_point(int d, double s) {
  Point p(d);
  p[0] = s;
  return p;
}

// Point at distance rho from the origin making angle th with the first axis.
Point polar_point(int d, double rho, double th) {
  Point p(d);
  p[0] = rho * std::cos(th);
  p[1] = rho * std::sin(th);
  return p;
}

// Integral of g over the exterior shell r0 < |z| < r1 (r1 = inf allowed) for
// g invariant under rotations fixing the first axis and singular like
// (|z| - 1)^(-alpha/2) at the unit sphere. Finite pieces are integrated in
// s = log(|z| - 1). Below |z| = 1 + kEdge the factor g (|z|^2 - 1)^(alpha/2)
// is frozen and the remaining power is integrated exactly.
constexpr double kEdge = 1e-10;

double shell_integral(int d, const std::function<double(const Point&)>& g, double rho) {
  const quad::Options inner{1e-15, 1e-10, 200};
  return quad::integrate(
             [&](double th) {
               const double w = d == 2 ? 2.0 * rho : 2.0 * kPi * rho * rho * std::sin(th);
               return w * g(polar_point(d, rho, th));
             },
             0.0, kPi, inner)
      .value;
}

double exterior_radial(int d, const std::function<double(const Point&)>& g, double r0, double r1, double alpha) {
  const quad::Options outer{1e-15, 1e-9, 400};
  double total = 0.0;
  if (r0 < 1.0 + kEdge) {
    const double e = kEdge;
    const double frozen = shell_integral(d, g, 1.0 + e) * std::pow(e * (2.0 + e), alpha / 2.0);
    total += frozen * std::pow(2.0, -alpha / 2.0) * std::pow(e, 1.0 - alpha / 2.0) / (1.0 - alpha / 2.0);
    r0 = 1.0 + kEdge;
  }
  const double split = std::min(r1, 2.0);
  if (r0 < split) {
    total += quad::integrate(
                 [&](double s) {
                   const double e = std::exp(s);
                   return e * shell_integral(d, g, 1.0 + e);
                 },
                 std::log(r0 - 1.0), std::log(split - 1.0), outer)
                 .value;
  }
  const double lo = std::max(r0, 2.0);
  if (r1 > lo) {
    if (std::isinf(r1)) {
      // rho = lo / w^2 keeps the tail integrand bounded for alpha >= 1/2.
      total += quad::integrate(
                   [&](double w) { return 2.0 * lo / (w * w * w) * shell_integral(d, g, lo / (w * w)); }, 0.0, 1.0, outer)
                   .value;
    } else {
      total += quad::integrate([&](double rho) { return shell_integral(d, g, rho); }, lo, r1, outer).value;
    }
  }
  return total;
}

// ------------------------------------------------------------ criterion 1

Outcome criterion_oracle_consistency() {
  constexpr double kNormTol = 1e-3;
  constexpr double kBinTol = 0.03;
  constexpr std::int64_t kExits = 1'000'000;
  constexpr int kBins = 20;
  constexpr double kMaxSeconds = 120.0;
  Outcome o;
  std::ostringstream detail;
  double worst_norm = 0.0, worst_bin = 0.0, worst_time = 0.0;
  for (int d : {2, 3}) {
    for (double alpha : {0.5, 1.0, 1.5}) {
      Timer t;
      const BallSpec b(Point(d), 1.0, alpha);
      const Point x = axis_point(d, 0.5);
      auto kernel = [&](const Point& z) { return std::isfinite(z.norm()) ? ball_poisson_kernel(b, x, z) : 0.0; };
      const double total = exterior_radial(d, kernel, 1.0, INFINITY, alpha);
      worst_norm = std::max(worst_norm, std::abs(total - 1.0));

      // Radial CDF of the exit distance on a geometric grid in rho - 1, then
      // equal-mass bin edges by interpolation; bin masses are recomputed
      // exactly between the chosen edges.
      std::vector<double> grid{1.0}, cum{0.0};
      for (int i = 0; i <= 140; ++i) grid.push_back(1.0 + std::pow(10.0, -8.0 + 0.1 * i));
      for (std::size_t i = 1; i < grid.size(); ++i)
        cum.push_back(cum.back() + exterior_radial(d, kernel, grid[i - 1], grid[i], alpha) / total);
      std::vector<double> edges{1.0};
      for (int k = 1; k < kBins; ++k) {
        const double target = static_cast<double>(k) / kBins;
        const auto it = std::lower_bound(cum.begin(), cum.end(), target);
        const std::size_t i = static_cast<std::size_t>(it - cum.begin());
        const double w = (target - cum[i - 1]) / (cum[i] - cum[i - 1]);
        edges.push_back(grid[i - 1] + w * (grid[i] - grid[i - 1]));
      }
      std::vector<double> oracle(kBins);
      double assigned = 0.0;
      for (int k = 0; k + 1 < kBins; ++k) {
        oracle[k] = exterior_radial(d, kernel, edges[k], edges[k + 1], alpha) / total;
        assigned += oracle[k];
      }
      oracle[kBins - 1] = 1.0 - assigned;

      const double quad_secs = t.seconds();
      McConfig cfg{kExits, 20240 + static_cast<std::uint64_t>(d * 10 + alpha * 2), workers(), 0};
      const ProcessSpec spec = make_stable(alpha, d);
      const Domain D = ball(Point(d), 1.0);
      auto bins = run_replicates(cfg, [&](RngStream& rng, std::int64_t) {
        const ExitRecord rec = wos_exit(rng, spec, D, x);
        if (rec.truncated) return -1.0;
        const double rho = rec.exit_point.norm();
        return static_cast<double>(std::upper_bound(edges.begin(), edges.end(), rho) - edges.begin() - 1);
      });
      std::vector<double> counts(kBins, 0.0);
      for (double v : bins)
        if (v >= 0.0) counts[static_cast<std::size_t>(v)] += 1.0;
      double sup = 0.0;
      for (int k = 0; k < kBins; ++k) {
        const double err = std::abs(counts[k] / kExits / oracle[k] - 1.0);
        sup = std::isnan(err) ? err : std::max(sup, err);
        if (std::isnan(sup)) break;
      }
      worst_bin = std::max(worst_bin, sup);
      const double secs = t.seconds();
      worst_time = std::max(worst_time, secs);
      detail << " (d=" << d << ",a=" << alpha << ": norm-1=" << fmt("%.1e", total - 1.0) << " sup=" << fmt("%.4f", sup)
             << " t=" << fmt("%.1fs", secs) << " quad=" << fmt("%.1fs", quad_secs) << ")";
      if (!(std::abs(total - 1.0) <= kNormTol && sup <= kBinTol && secs <= kMaxSeconds)) o.pass = false;
    }
  }
  o.detail = "max|norm-1|=" + fmt("%.2e", worst_norm) + " max bin rel err=" + fmt("%.4f", worst_bin) +
             " max time=" + fmt("%.1fs", worst_time) + ";" + detail.str();
  return o;
}

// ------------------------------------------------------------ criterion 2

Outcome criterion_exit_time() {
  constexpr double kRelTol = 0.01;
  constexpr std::int64_t kN = 1'000'000;
  constexpr double kUniformSpread = 1.05;
  Outcome o;
  std::ostringstream detail;
  double worst = 0.0;
  const int d = 2;
  for (double alpha : {0.5, 1.0, 1.5}) {
    const ProcessSpec spec = make_stable(alpha, d);
    const double r = 1.0;
    const Domain D = ball(Point(d), r);
    const BallSpec b(Point(d), r, alpha);
    for (double s : {0.0, 0.5}) {
      const Point x = axis_point(d, s * r);
      const Estimate e = estimate_exit_time(spec, D, x, {kN, 77, workers(), 0});
      const double exact = ball_expected_exit(b, x);
      const double rel = std::abs(e.value / exact - 1.0);
      worst = std::max(worst, rel);
      if (!(rel <= kRelTol)) o.pass = false;
    }
    // E_x tau_{B(x, r)} psi0(1 / r) across scales.
    double lo = INFINITY, hi = 0.0;
    for (double scale : {0.1, 1.0, 10.0}) {
      const Estimate e = estimate_exit_time(spec, ball(Point(d), scale), Point(d), {kN / 10, 78, workers(), 0});
      const double c = e.value * spec.psi0(1.0 / scale);
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    detail << " a=" << alpha << ": c in [" << fmt("%.5f", lo) << ", " << fmt("%.5f", hi) << "]";
    if (!(lo > 0.0 && hi / lo <= kUniformSpread)) o.pass = false;
  }
  o.detail = "max rel err=" + fmt("%.2e", worst) + ";" + detail.str();
  return o;
}

// ------------------------------------------------------------ criterion 3

Outcome criterion_levy_system() {
  constexpr double kRelTol = 0.02;
  constexpr std::int64_t kN = 1'000'000;
  const int d = 2;
  const double alpha = 1.0;
  const ProcessSpec spec = make_stable(alpha, d);
  const BallSpec b(Point(d), 1.0, alpha);
  const Domain D = ball(Point(d), 1.0);
  const Domain A = subtract(ball(Point(d), 3.0), ball(Point(d), 1.5));

  // int_A j(|y - z|) dz depends on |y| only.
  const quad::Options opt{1e-14, 1e-10, 400};
  auto jump_mass = [&](double s) {
    const Point y = axis_point(d, s);
    return quad::integrate(
               [&](double rho) {
                 return quad::integrate(
                            [&](double th) { return 2.0 * rho * spec.levy_density(distance(y, polar_point(d, rho, th))); },
                            0.0, kPi, opt)
                     .value;
               },
               1.5, 3.0, opt)
        .value;
  };
  Outcome o;
  std::ostringstream detail;
  for (double xs : {0.0, 0.5}) {
    const Point x = axis_point(d, xs);
    auto radial = [&](double s) {
      if (s == 0.0) return 0.0;
      const auto g = quad::integrate(
          [&](double th) { return 2.0 * s * ball_green(b, x, polar_point(d, s, th)); }, 0.0, kPi, opt);
      return g.value * jump_mass(s);
    };
    double quadrature = 0.0;
    if (xs == 0.0) {
      quadrature = quad::integrate(radial, 0.0, 1.0, opt).value;
    } else {
      quadrature = quad::integrate(radial, 0.0, xs, opt).value + quad::integrate(radial, xs, 1.0, opt).value;
    }
    const Estimate mc = estimate_harmonic_measure(spec, D, x, A, {kN, 31, workers(), 0});
    const double rel = std::abs(mc.value / quadrature - 1.0);
    detail << " x=" << xs << ": mc=" << fmt("%.5f", mc.value) << "+-" << fmt("%.5f", mc.std_error)
           << " quad=" << fmt("%.5f", quadrature) << " rel=" << fmt("%.4f", rel);
    if (!(rel <= kRelTol)) o.pass = false;
  }
  o.detail = detail.str();
  return o;
}

// ------------------------------------------------------------ criterion 4

Outcome criterion_martin_limit() {
  constexpr double kRelTol = 0.05;
  constexpr double kSlack = 2.0;
  constexpr std::int64_t kN = 200'000;
  const int d = 2;
  const double alpha = 1.5;
  const ProcessSpec spec = make_stable(alpha, d);
  const Domain D = ball(Point(d), 1.0);
  const BallSpec b(Point(d), 1.0, alpha);
  const Point x0(d);
  Outcome o;
  std::ostringstream detail;
  const double angles[2] = {0.0, 2.0};
  for (int t = 0; t < 2; ++t) {
    const double th = angles[t];
    const Point z = polar_point(d, 1.0, th);
    const std::vector<Point> probes = {polar_point(d, 0.5, th + 0.6), polar_point(d, 0.3, th + kPi)};
    std::vector<ApproachLevel> levels;
    for (double h : {0.08, 0.04, 0.02, 0.01}) {
      ApproachLevel lvl;
      for (double off : {-1.0, 0.0, 1.0}) lvl.v.push_back(polar_point(d, 1.0 - h, th + off * h));
      levels.push_back(lvl);
    }
    McConfig cfg{kN, 4040 + static_cast<std::uint64_t>(t), workers(), 0};
    const MartinEstimate est = estimate_martin_kernel(spec, D, probes, x0, MartinTarget::at(z), levels, cfg);
    for (std::size_t p = 0; p < probes.size(); ++p) {
      const double exact = ball_martin_kernel(b, probes[p], z, x0);
      const double rel = std::abs(est.kernel[p] / exact - 1.0);
      detail << " z" << t << "p" << p << ": " << fmt("%.4f", est.kernel[p]) << "+-" << fmt("%.4f", est.kernel_se[p])
             << " vs " << fmt("%.4f", exact);
      if (!(rel <= kRelTol)) o.pass = false;
    }
    detail << " RO:";
    for (std::size_t j = 0; j < est.levels.size(); ++j) {
      detail << ' ' << fmt("%.3f", est.levels[j].ro);
      if (j > 0) {
        const auto& a = est.levels[j - 1];
        const auto& c = est.levels[j];
        if (!(c.ro <= a.ro + kSlack * std::hypot(a.ro_se, c.ro_se))) o.pass = false;
      }
    }
  }
  o.detail = detail.str();
  return o;
}

// ------------------------------------------------------------ criterion 5

Outcome criterion_harmonicity() {
  constexpr double kMaxResidual = 3.0;
  constexpr std::int64_t kN = 100'000;
  const int d = 2;
  const double alpha = 1.5;
  const ProcessSpec spec = make_stable(alpha, d);
  const Domain D = ball(Point(d), 1.0);
  const BallSpec b(Point(d), 1.0, alpha);
  const Point z = axis_point(d, 1.0);
  const Point x0(d);
  const PointFunction M = [&](const Point& y) { return ball_martin_kernel(b, y, z, x0); };
  struct Case {
    Domain U;
    Point x;
  };
  const std::vector<Case> cases = {
      {ball(axis_point(d, -0.2), 0.5), axis_point(d, -0.1)},
      {intersect({ball(Point(d), 0.6), halfspace(Point{0.0, 1.0}, -0.1)}), Point{0.1, 0.2}},
  };
  Outcome o;
  std::ostringstream detail;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const HarmonicityResult h = harmonicity_check(spec, D, M, cases[i].U, cases[i].x, {kN, 505 + i, workers(), 0});
    detail << " U" << i << ": M=" << fmt("%.5f", h.value_at_x) << " mean=" << fmt("%.5f", h.exit_mean.value) << "+-"
           << fmt("%.5f", h.exit_mean.std_error) << " residual=" << fmt("%.2f", h.residual);
    if (!(h.residual <= kMaxResidual)) o.pass = false;
  }
  o.detail = detail.str();
  return o;
}

// ------------------------------------------------------------ criterion 6

Outcome criterion_thorn_threshold() {
  constexpr double kBracket = 0.1;
  constexpr double kMaxSeconds = 10.0;
  Timer t;
  const ProcessSpec spec = make_stable(1.0, 3);
  auto verdict = [&](double beta) { return thorn_infinity_test(spec, Profile::log_power(beta)).verdict; };
  Outcome o;
  const Divergence v02 = verdict(0.2);
  const Divergence v05 = verdict(0.5);
  // Two bisections: the largest divergent beta and the smallest convergent
  // beta. Between them lies a band where the classifier abstains.
  auto edge = [&](Divergence side) {
    double a = 0.2, b = 0.5;  // verdict(a) == divergent, verdict(b) == convergent
    for (int it = 0; it < 12; ++it) {
      const double mid = 0.5 * (a + b);
      const Divergence v = verdict(mid);
      const bool left = side == Divergence::divergent ? v == Divergence::divergent : v != Divergence::convergent;
      (left ? a : b) = mid;
    }
    return side == Divergence::divergent ? a : b;
  };
  const double lo = edge(Divergence::divergent);
  const double hi = edge(Divergence::convergent);
  const double secs = t.seconds();
  const double beta_star = 1.0 / 3.0;
  o.pass = v02 == Divergence::divergent && v05 == Divergence::convergent && std::abs(lo - beta_star) <= kBracket &&
           std::abs(hi - beta_star) <= kBracket && secs < kMaxSeconds;
  o.detail = "beta=0.2 " + to_string(v02) + ", beta=0.5 " + to_string(v05) + ", last divergent beta " + fmt("%.4f", lo) + ", first convergent beta " +
             fmt("%.4f", hi) + ", t=" + fmt("%.2fs", secs);
  return o;
}

// ------------------------------------------------------------ criterion 7

Outcome criterion_fat_accessibility() {
  constexpr double kMinGrowth = 1.3;
  constexpr int kDoublings = 5;
  constexpr std::int64_t kN = 100'000;
  const int d = 2;
  const ProcessSpec spec = make_stable(1.5, d);
  WosOptions wos;
  wos.far_cutoff = 1e4;
  std::vector<double> radii;
  for (int k = 0; k <= kDoublings; ++k) radii.push_back(std::ldexp(2.0, k));
  const GrowthProbeResult half =
      growth_probe(spec, halfspace(Point{0.0, 1.0}, 0.0), Point{0.0, 1.0}, radii, {kN, 707, workers(), 0}, wos);
  Outcome o;
  std::ostringstream detail;
  detail << "half-space ratios:";
  for (double r : half.growth_ratios) {
    detail << ' ' << fmt("%.3f", r);
    if (!(r >= kMinGrowth)) o.pass = false;
  }
  std::vector<double> ball_radii;
  for (int k = -3; k <= 4; ++k) ball_radii.push_back(std::ldexp(1.0, k));
  const GrowthProbeResult bounded = growth_probe(spec, ball(Point(d), 1.0), Point(d), ball_radii, {kN, 708, workers(), 0});
  detail << "; ball verdict " << to_string(bounded.report.verdict);
  if (bounded.report.verdict != Divergence::convergent) o.pass = false;
  o.detail = detail.str();
  return o;
}

// ------------------------------------------------------------ criterion 8

Outcome criterion_reduction_identity() {
  constexpr double kMaxResidual = 3.0;
  constexpr std::int64_t kN = 20'000;
  const int d = 2;
  const double alpha = 1.5;
  const ProcessSpec spec = make_stable(alpha, d);
  const Domain D = ball(Point(d), 1.0);
  const Domain E = intersect({D, halfspace(Point{1.0, 0.0}, 0.0)});
  const Domain F = ball(Point{0.5, 0.0}, 0.2);
  const BallSpec b(Point(d), 1.0, alpha);
  const Point pole{-0.5, 0.0};
  const PointFunction u = [&](const Point& y) { return D.contains(y) ? ball_green(b, y, pole) : 0.0; };
  const std::vector<Point> probes = {{0.2, 0.1}, {0.5, 0.45}, {0.85, -0.1}};
  Outcome o;
  double worst = 0.0;
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    const ReductionReport r = reduction_identity_check(spec, D, E, F, u, probes, {kN, seed, workers(), 0});
    worst = std::max(worst, r.max_residual);
  }
  o.pass = worst <= kMaxResidual;
  o.detail = "max residual " + fmt("%.2f", worst) + " stderr over 3 probes x 3 seeds";
  return o;
}

// ------------------------------------------------------------ criterion 9

Outcome criterion_locality() {
  constexpr std::int64_t kN = 40'000;
  const int d = 2;
  const ProcessSpec spec = make_stable(1.5, d);
  const Domain D = halfspace(Point{0.0, 1.0}, 0.0);
  const Domain E = slab(Point{0.0, 1.0}, 0.0, 4.0);
  // Spike along the inward normal at the origin.
  const Domain F = thorn(Profile::power(2.0, ThornRegime::zero), Point{0.0, 0.0}, Point{0.0, 1.0}, 0.0, 0.5);
  const std::vector<Point> probes = {{0.0, 1.0}, {0.5, 0.8}, {-0.6, 0.6}};
  // Approach points off the spike, along the diagonal.
  const std::vector<Point> approach = {{0.04, 0.04}, {0.02, 0.02}};
  ThinnessOptions opt;
  opt.wos.far_cutoff = 200.0;
  Outcome o;
  std::ostringstream detail;
  for (std::uint64_t seed : {21u, 22u, 23u}) {
    const LocalityReport r = locality_experiment(spec, D, E, F, MartinTarget::at(Point{0.0, 0.0}), 2.0, probes,
                                                 Point{0.0, 1.0}, approach, {kN, seed, workers(), 0}, opt);
    const bool forbidden = (r.in_E.verdict == Thinness::thin && r.in_D.verdict == Thinness::not_thin) ||
                           (r.in_E.verdict == Thinness::not_thin && r.in_D.verdict == Thinness::thin);
    detail << " seed " << seed << ": E " << to_string(r.in_E.verdict) << " (thin share " << fmt("%.2f", r.in_E.thin_fraction)
           << "), D " << to_string(r.in_D.verdict) << " (thin share " << fmt("%.2f", r.in_D.thin_fraction) << ")";
    if (forbidden || !r.agree) o.pass = false;
  }
  o.detail = detail.str();
  return o;
}

// ------------------------------------------------------------ criterion 10

std::string strip_wall(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    const auto pos = line.rfind(',');
    out += (pos == std::string::npos ? line : line.substr(0, pos)) + "\n";
  }
  return out;
}

std::string run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int rc = cli::run(args, out, err);
  return std::to_string(rc) + "\n" + out.str();
}

Outcome criterion_determinism() {
  const std::vector<std::vector<std::string>> runs = {
      {"simulate", "--alpha", "1.5", "--d", "2", "--estimator", "green", "--x", "0.2,0.1", "--y", "-0.3,0", "--n",
       "20000", "--seed", "9"},
      {"martin", "--alpha", "1.5", "--d", "2", "--target", "1,0", "--probes", "0.3,0.2;-0.4,0", "--n", "5000",
       "--seed", "9"},
      {"access", "--alpha", "1.5", "--d", "2", "--domain", R"({"type":"halfspace","normal":[0,1],"offset":0})",
       "--target", "infinity", "--n", "2000", "--shells", "5", "--seed", "9"},
      {"thinness", "--alpha", "1.5", "--d", "2", "--F", R"({"type":"ball","center":[0.5,0],"radius":0.2})",
       "--target", "-1,0", "--probes", "0,0.3;0.2,-0.2", "--x0", "0,0", "--n", "4000", "--seed", "9"},
  };
  Outcome o;
  std::ostringstream detail;
  for (const auto& args : runs) {
    auto with_workers = [&](const std::string& w) {
      auto a = args;
      a.push_back("--workers");
      a.push_back(w);
      return a;
    };
    const std::string first = strip_wall(run_cli(with_workers("1")));
    const std::string again = strip_wall(run_cli(with_workers("1")));
    const std::string parallel = strip_wall(run_cli(with_workers("3")));
    const bool same = first == again && first == parallel;
    detail << ' ' << args[0] << (same ? " identical" : " DIFFERS");
    if (!same) o.pass = false;
  }
  o.detail = detail.str();
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  // Optional argument: run only the criteria whose label starts with it.
  const std::string only = argc > 1 ? argv[1] : "";
  struct Entry {
    const char* name;
    Outcome (*fn)();
  };
  const Entry entries[] = {
      {"C1 oracle consistency", criterion_oracle_consistency},
      {"C2 exit-time oracle", criterion_exit_time},
      {"C3 Levy-system identity", criterion_levy_system},
      {"C4 Martin-kernel limit", criterion_martin_limit},
      {"C5 harmonicity", criterion_harmonicity},
      {"C6 thorn thresholds", criterion_thorn_threshold},
      {"C7 fat accessibility", criterion_fat_accessibility},
      {"C8 reduction identity", criterion_reduction_identity},
      {"C9 locality", criterion_locality},
      {"C10 determinism", criterion_determinism},
  };
  int failures = 0;
  for (const auto& e : entries) {
    if (!only.empty() && std::string(e.name).rfind(only + " ", 0) != 0) continue;
    Timer t;
    Outcome o;
    try {
      o = e.fn();
    } catch (const std::exception& ex) {
      o.pass = false;
      o.detail = std::string("exception: ") + ex.what();
    }
    std::printf("%s %s [%.1fs] %s\n", o.pass ? "PASS" : "FAIL", e.name, t.seconds(), o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
