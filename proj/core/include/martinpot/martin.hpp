#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "martinpot/domain.hpp"
#include "martinpot/point.hpp"
#include "martinpot/process_model.hpp"
#include "martinpot/quadrature.hpp"
#include "martinpot/simulation.hpp"

namespace martinpot {

// sup / inf of a nonempty list of positive values.
double oscillation_range(std::span<const double> values);

// ------------------------------------------------------------ contraction schedule

struct Schedule {
  double eta = 0.0;
  double C = 0.0;
  int l = 0;
  double eps = 0.0;
  std::int64_t k = 0;
  std::int64_t n = 0;  // l * k
  double fixed_point = 0.0;  // 1 + eta (C + 1) / 2
  double phi_l_of_C = 0.0;
  // q_0 = 8, q_1, ... Filled by fill_radius_multipliers; at most a capped
  // prefix of the n + 1 multipliers is materialised.
  std::vector<double> radius_multipliers;
  bool truncated = false;
};

// phi(t) = 1 + eta/2 + C/(C+1) (t - 1).
double schedule_phi(double eta, double C, double t);

// l: smallest l >= 1 with phi^l(C) < 1 + eta (C + 1). eps: the largest value
// (to bisection accuracy) with (C eps + 1 + eps)^2 (1 + eps)^2 < 1 + eta and
// (1 + C^2 eps)^2 + (1 + C^2 eps)(C - 1)/(C + 1)(t - 1) < phi(t) for all t >= 1.
// k: smallest integer with k > C^2 / eps^2. Throws for eta <= 0 or C <= 1.
Schedule contraction_schedule(double eta, double C);

// q_0 = 8; q_{j+1} is the first q_j 2^m (m = 1..max_doublings) whose annulus
// mass mass(q_{j+1}) - mass(q_j) exceeds eps * mass(q_j), where mass(q) is a
// cumulative mass such as the Green mass inside radius q r. Stops after
// max_levels multipliers or at a doubling-cap hit, setting `truncated`.
void fill_radius_multipliers(Schedule& schedule, const std::function<double(double)>& cumulative_mass,
                             int max_levels = 64, int max_doublings = 40);

// ------------------------------------------------------------ Martin kernel

struct MartinTarget {
  std::optional<Point> point;  // nullopt = infinity
  static MartinTarget at(const Point& z) { return {z}; }
  static MartinTarget infinity() { return {std::nullopt}; }
};

struct ApproachLevel {
  std::vector<Point> v;  // approach points of this level (a small sample in the level's annulus)
};

struct MartinLevel {
  std::vector<Point> v;
  std::vector<double> ratio;     // per probe, mean over the level's v
  std::vector<double> ratio_se;  // per probe
  double ro = 1.0;               // max over probes of RO across the v sample
  double ro_se = 0.0;            // delta-method standard error of ro
  bool diverged = false;
};

struct MartinEstimate {
  std::vector<Point> probes;
  Point x0;
  MartinTarget target;
  std::vector<MartinLevel> levels;
  std::vector<double> kernel;     // last-level values per probe
  std::vector<double> kernel_se;
  bool converged = false;
  bool inconclusive = false;
  std::string note;
};

struct MartinOptions {
  double ro_tol = 0.1;
  WosOptions wos;
};

// Green-ratio estimate G_D(x, v) / G_D(x0, v) along approach levels. By the
// symmetry of the process, G_D(x, v) = G_D(v, x): chains start at v and are
// scored at every probe and at x0, so numerator and denominator share chains
// and the ratio carries a delta-method error. Levels use disjoint stream
// ranges. Requires a stable process.
MartinEstimate estimate_martin_kernel(const ProcessSpec& spec, const Domain& domain, std::span<const Point> probes,
                                      const Point& x0, const MartinTarget& target,
                                      const std::vector<ApproachLevel>& schedule, const McConfig& cfg,
                                      const MartinOptions& opt = {});

// ------------------------------------------------------------ Levy functional

// Lambda_p(f) = int_{|y - z0| > p} j(|z0 - y|) f(y) dy, or over p < |y - z0| < q
// when q is given; with `restrict_to` the integrand is multiplied by the
// indicator of the domain (the D_{p,q} form). Nested adaptive quadrature in
// spherical coordinates; supports d <= 3.
quad::Result lambda_functional(const ProcessSpec& spec, const Point& z0, double p, std::optional<double> q,
                               const PointFunction& f, const quad::Options& opt = {},
                               const std::optional<Domain>& restrict_to = std::nullopt);

// int_{B(c, radius)} f(y) dy by the same spherical quadrature; d <= 3.
quad::Result ball_integral(const PointFunction& f, const Point& c, double radius, const quad::Options& opt = {});

// ------------------------------------------------------------ approximate factorization

enum class FactorizationKind { finite_point, infinity };

struct FactorizationOptions {
  WosOptions wos;
  quad::Options quad{1e-14, 1e-7, 400};
};

struct FactorizationReport {
  FactorizationKind kind = FactorizationKind::finite_point;
  double r = 0.0;
  double a = 0.0;
  std::vector<Point> samples;
  std::vector<double> f_values;
  std::vector<double> mc_factor;     // E_x tau_D (finite point) or P_D(x, z0) (infinity)
  std::vector<double> mc_factor_se;
  double functional = 0.0;           // Lambda_{ar/2}(f) or int_{B(z0, 2ar)} f
  std::vector<double> ratios;        // f(x) / (mc_factor * functional)
  double c_hat = 0.0;                // max / min of ratios
};

// Finite point: D inside B(z0, r), samples in D intersect B(z0, r/8), 1/2 < a < 1.
// Infinity: D outside the closed B(z0, r), samples in D with |x - z0| > 8r, 1 < a < 2.
// Throws std::invalid_argument for samples outside the region, a out of range,
// or f vanishing at every sample.
FactorizationReport factorization_residual(const ProcessSpec& spec, const Domain& domain, const Point& z0,
                                           FactorizationKind kind, const PointFunction& f, double r, double a,
                                           std::span<const Point> samples, const McConfig& cfg,
                                           const FactorizationOptions& opt = {});

// ------------------------------------------------------------ harmonicity

struct HarmonicityResult {
  double value_at_x = 0.0;
  Estimate exit_mean;
  double residual = 0.0;  // |M(x) - mean| / stderr
};

// Mean-value check M(x) = E_x[M(X_{tau_U})] with M = 0 outside D. U must be
// bounded and x must lie in U and in D.
HarmonicityResult harmonicity_check(const ProcessSpec& spec, const Domain& domain, const PointFunction& M,
                                    const Domain& U, const Point& x, const McConfig& cfg, const WosOptions& wos = {});

}  // namespace martinpot
