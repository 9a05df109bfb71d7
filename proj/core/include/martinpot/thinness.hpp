#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "martinpot/domain.hpp"
#include "martinpot/martin.hpp"
#include "martinpot/point.hpp"
#include "martinpot/process_model.hpp"
#include "martinpot/simulation.hpp"

namespace martinpot {

// ------------------------------------------------------------ reduced functions

struct ReducedOptions {
  PathOptions path;
  // Repeat every probe at dt / 2 on the same streams and report the change.
  bool halving_check = false;
};

struct ReducedEstimate {
  Point probe;
  Estimate value;           // R_u^A(probe) = E[u(X_{S_A}); S_A < tau_D]
  double u_value = 0.0;     // u(probe)
  double horizon_miss_fraction = 0.0;
  bool exceeds_u = false;   // value > u + 3 stderr, which an excessive u never allows
  std::optional<Estimate> half_dt;
};

// Time-stepped hitting estimate of the reduced function at each probe.
// Probe j uses the stream range starting at cfg.stream_offset + j * cfg.n.
std::vector<ReducedEstimate> estimate_reduced(const ProcessSpec& spec, const Domain& D, const Domain& A,
                                              const PointFunction& u, std::span<const Point> probes,
                                              const McConfig& cfg, const ReducedOptions& opt = {});

// ------------------------------------------------------------ reduction identity

// For F inside E inside D, v = u - R_u^{D\E}, and x in E:
//   ^E R_v^F (x) = R_u^{(D\E) u F}(x) - R_u^{D\E}(x),
// where ^E R is the reduction for the process killed on leaving E.
//
// RHS samples come from one path in D per replicate (first grid hit of
// (D\E) u F, first grid hit of D\E). LHS samples use the same path killed on
// leaving E; at its first hit y of F the value v(y) is estimated with
// `inner_paths` independent paths from y. Because the outer path is shared,
// LHS - RHS has mean zero for the time-discretised chain and its spread
// comes only from the inner estimate of v.
struct ReductionOptions {
  PathOptions path;
  int inner_paths = 8;
};

struct ReductionProbe {
  Point x;
  Estimate lhs;
  Estimate rhs;
  Estimate difference;
  double residual = 0.0;  // |difference| / stderr
};

struct ReductionReport {
  std::vector<ReductionProbe> probes;
  double max_residual = 0.0;
};

// F = nullopt is the empty set. Probes must lie in E.
ReductionReport reduction_identity_check(const ProcessSpec& spec, const Domain& D, const Domain& E,
                                         const std::optional<Domain>& F, const PointFunction& u,
                                         std::span<const Point> probes, const McConfig& cfg,
                                         const ReductionOptions& opt = {});

// ------------------------------------------------------------ minimal thinness

enum class Thinness { thin, not_thin, inconclusive };

std::string to_string(Thinness t);

struct ThinnessProbe {
  Point x;
  double martin = 0.0;     // M(x) ~ G_D(x, v) / G_D(x0, v)
  double martin_se = 0.0;
  double reduced = 0.0;    // R^F M(x)
  double reduced_se = 0.0;
  double fraction = 0.0;   // R^F M(x) / M(x)
  double fraction_se = 0.0;
};

struct ThinnessReport {
  MartinTarget target;
  Point x0;
  Point approach;                   // approach point used for the verdict
  std::vector<ThinnessProbe> probes;
  Thinness verdict = Thinness::inconclusive;
  double thin_fraction = 0.0;       // share of probes with R < M - sigma * stderr
  bool martin_converged = true;
  double truncated_fraction = 0.0;
  std::string note;
};

struct ThinnessOptions {
  WosOptions wos;
  double sigma = 3.0;
  // Relative change of the Martin estimate between the last two approach
  // points tolerated (on top of sigma combined stderr) before the estimate is
  // declared unconverged.
  double martin_rel_tol = 0.1;
};

// Uses the identity R^F G_D(., v) = G_D(., v) - G_{D\F}(., v) for v outside
// the closure of F and its limit along the approach points. One
// walk-on-spheres chain per replicate starts at v with balls inscribed in
// D\F; from its first entrance into F it continues with balls inscribed in D.
// The score collected after that entrance estimates R^F G_D(., v), the total
// score estimates G_D(., v), and both share the chain. `approach` lists
// approach points ordered toward the target; the verdict uses the last one.
//   thin:      fraction < 1 - sigma * stderr at >= 2/3 of the probes
//   not_thin:  |1 - fraction| <= sigma * stderr at every probe
// F = nullopt is the empty set.
ThinnessReport thinness_test(const ProcessSpec& spec, const Domain& D, const std::optional<Domain>& F,
                             const MartinTarget& target, std::span<const Point> probes, const Point& x0,
                             std::span<const Point> approach, const McConfig& cfg, const ThinnessOptions& opt = {});

struct LocalityReport {
  ThinnessReport in_E;
  ThinnessReport in_D;
  bool agree = false;
};

// Runs thinness_test in E and in D with identical streams. E must agree with
// D on B(z0, radius) (finite target) or outside B(0, radius) (infinity);
// agreement is checked on sampled points and a mismatch throws.
LocalityReport locality_experiment(const ProcessSpec& spec, const Domain& D, const Domain& E,
                                   const std::optional<Domain>& F, const MartinTarget& target, double radius,
                                   std::span<const Point> probes, const Point& x0, std::span<const Point> approach,
                                   const McConfig& cfg, const ThinnessOptions& opt = {});

}  // namespace martinpot
