#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "martinpot/domain.hpp"
#include "martinpot/point.hpp"
#include "martinpot/process_model.hpp"
#include "martinpot/simulation.hpp"

namespace martinpot {

enum class Divergence { divergent, convergent, inconclusive };

std::string to_string(Divergence v);

// Thresholds of the truncation classifier. Increments are the differences of
// consecutive partials, with the first partial counted as the first
// increment; ratios are consecutive increment quotients.
//   divergent:  every increment >= eps_div_rel * first increment and the tail
//               ratios are all >= flat_ratio (increments not decaying)
//   convergent: the tail ratios are all <= decay_ratio and the geometric tail
//               bound last * rho / (1 - rho) is below tail_rel_tol * |last partial|
// Anything else, including negative increments, is inconclusive.
struct ClassifyOptions {
  double eps_div_rel = 1e-3;
  double flat_ratio = 0.95;
  double decay_ratio = 0.7;
  double tail_rel_tol = 1e-2;
  int tail_ratios = 3;
};

// Throws std::invalid_argument for fewer than 4 partials.
Divergence classify(std::span<const double> partials, const ClassifyOptions& opt = {});

struct DivergenceReport {
  std::string integrand;
  std::vector<double> truncations;  // upper limits (in the integration variable reported by `variable`)
  std::string variable;
  std::vector<double> partials;
  std::vector<double> increments;
  std::vector<double> increment_ratios;
  // Least-squares slope of log increment against level index.
  double growth_exponent = 0.0;
  Divergence verdict = Divergence::inconclusive;
  std::string note;
};

DivergenceReport make_divergence_report(std::string integrand, std::string variable, std::vector<double> truncations,
                                        std::vector<double> partials, const ClassifyOptions& opt = {});

// ------------------------------------------------------------ thorn integral tests

// Truncations of the thorn integrals. The substitution t = e^u (infinity) or
// t = e^{-u} (tip at 0) is applied and the truncation points u_k = u0 * growth^k
// grow geometrically in u, so that integrands of logarithmic type such as
// t^{-1} (log t)^{-gamma} produce geometric increment sequences.
struct ThornTestOptions {
  int levels = 14;
  double u0 = 1.3862943611198906;  // log 4
  double growth = 4.0;
  ClassifyOptions classify;
  // Verify H1 / H2 with check_scaling before integrating.
  bool check_hypotheses = true;
};

// log of the thorn integrand times t, as a function of u = log t:
// log[ psi0(1/t) / psi0(1/f(t)) * f(t)^{d-1} / t^{d-1} ].
double thorn_log_integrand(const ProcessSpec& spec, const Profile& f, double u);

// Integral test for infinity in the thorn {y1 > 2, |y~| < f(y1)}.
// Throws std::invalid_argument when f(t) > t or f decreases on the sampled range,
// or when H1/H2 fail.
DivergenceReport thorn_infinity_test(const ProcessSpec& spec, const Profile& f, const ThornTestOptions& opt = {});

// Integral test for the tip of {0 < y1 < 1, |y~| < f(y1)}; requires H1.
DivergenceReport thorn_finite_test(const ProcessSpec& spec, const Profile& f, const ThornTestOptions& opt = {});

// ------------------------------------------------------------ general domains (Monte Carlo)

enum class Accessibility { accessible, inaccessible, inconclusive };

std::string to_string(Accessibility a);

struct AccessVerdict {
  std::optional<Point> target;  // nullopt = infinity
  Accessibility verdict = Accessibility::inconclusive;
  DivergenceReport evidence;
  std::vector<double> shell_std_errors;
  std::string method;
};

struct ShellTestOptions {
  int shells = 8;
  // Minimum number of samples that must land in the domain in every shell.
  int min_hits = 10;
  WosOptions wos;
  ClassifyOptions classify;
};

// Finite boundary point: partial integrals of E_y[tau_{D1}] j(|y - z0|) over
// the dyadic shells 2^{-k-1} < |y - z0| < 2^{-k} of D1 = D intersect B(z0, 1).
// Each shell uses cfg.n uniform points, each carrying one walk-on-spheres
// chain (an unbiased single-sample exit-time estimate). Throws
// std::invalid_argument when z0 is not on the boundary of D.
AccessVerdict finite_point_test(const ProcessSpec& spec, const Domain& domain, const Point& z0, const McConfig& cfg,
                                const ShellTestOptions& opt = {});

// Infinity: partial integrals of P_{D^1}(y, 0) over the dyadic annuli
// 2^k < |y| < 2^{k+1} of D^1 = D outside the closed unit ball. Throws for
// bounded domains.
AccessVerdict infinity_test(const ProcessSpec& spec, const Domain& domain, const McConfig& cfg,
                            const ShellTestOptions& opt = {});

// Cumulative Green mass int_{D, |y - x0| < R_k} G_D(x0, y) dy for the radii of
// the schedule. Each walk-on-spheres ball contributes its exit-time weight to
// the annulus that contains its centre. partials[k] is the cumulative mass
// inside radius_schedule[k].
struct GrowthProbeResult {
  DivergenceReport report;
  std::vector<double> annulus_mass;
  std::vector<double> annulus_std_error;
  std::vector<double> growth_ratios;  // partials[k+1] / partials[k]
  double truncated_fraction = 0.0;
};

GrowthProbeResult growth_probe(const ProcessSpec& spec, const Domain& domain, const Point& x0,
                               const std::vector<double>& radius_schedule, const McConfig& cfg,
                               const WosOptions& wos = {});

}  // namespace martinpot
