#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace martinpot {

enum class ModelKind { stable, geometric_stable, custom };

struct ModelTag {
  ModelKind kind = ModelKind::stable;
  double alpha = 1.0;
  int iterations = 0;  // geometric_stable only
};

// Two-sided power envelope a_low (t/s)^{2 delta_low} <= psi0(t)/psi0(s) <= a_high (t/s)^{2 delta_high}.
struct ScalingIndices {
  double delta_low = 0.0;
  double delta_high = 0.0;
  double a_low = 1.0;
  double a_high = 1.0;
};

using RadialFunction = std::function<double(double)>;

// Symmetric (isotropic) Levy process in R^d given by its radial characteristic
// exponent psi0 and radial Levy density j0. The Levy density is used as the
// exact jump kernel, j(x, y) = j0(|x - y|). Immutable after construction.
class ProcessSpec {
 public:
  int d() const { return d_; }
  const ModelTag& tag() const { return tag_; }
  bool is_stable() const { return tag_.kind == ModelKind::stable; }
  double alpha() const { return tag_.alpha; }

  double psi0(double t) const;
  // log psi0(e^v), evaluated without overflow for |v| in the thousands.
  double log_psi0_at_log(double v) const;
  double levy_density(double r) const;

  // Nominal indices: scaling at infinity (H1) and at zero (H2). Empty when the
  // model is known not to satisfy the condition.
  const std::optional<ScalingIndices>& h1() const { return h1_; }
  const std::optional<ScalingIndices>& h2() const { return h2_; }

  std::string describe() const;

  friend ProcessSpec make_stable(double alpha, int d);
  friend ProcessSpec make_geometric_stable(double alpha, int d, int iterations);
  friend ProcessSpec make_custom(int d, RadialFunction psi0, RadialFunction levy_density,
                                 std::optional<ScalingIndices> h1, std::optional<ScalingIndices> h2);

 private:
  ProcessSpec() = default;

  int d_ = 1;
  ModelTag tag_;
  double levy_constant_ = 0.0;
  RadialFunction custom_psi0_;
  RadialFunction custom_levy_;
  std::optional<ScalingIndices> h1_;
  std::optional<ScalingIndices> h2_;
};

// psi0(t) = t^alpha, j0(r) = A(d, alpha) r^{-d-alpha}. Requires 0 < alpha < 2.
ProcessSpec make_stable(double alpha, int d);

// Brownian motion subordinated by the n-fold composition of the geometric
// (alpha/2)-stable Laplace exponent phi_1(lambda) = log(1 + lambda^{alpha/2}):
// psi0(t) = phi_n(t^2). The Levy density is set equal to psi0(1/r) / r^d.
ProcessSpec make_geometric_stable(double alpha, int d, int iterations);

ProcessSpec make_custom(int d, RadialFunction psi0, RadialFunction levy_density,
                        std::optional<ScalingIndices> h1 = std::nullopt,
                        std::optional<ScalingIndices> h2 = std::nullopt);

// phi_1(lambda) = log(1 + lambda^{alpha/2}) composed n times.
double geometric_laplace_exponent(double lambda, double alpha, int iterations);

enum class ScalingRegime { h1, h2 };

struct ScalingSample {
  double s = 0.0;
  double t = 0.0;
  double ratio = 0.0;  // psi0(t) / psi0(s)
};

struct ScalingReport {
  ScalingRegime which = ScalingRegime::h1;
  // Log-log least squares exponent with the max-violation envelope constants.
  double delta_fit = 0.0;
  double a_low = 0.0;
  double a_high = 0.0;
  // Range of the per-pair exponents log(ratio) / (2 log(t/s)); with a = 1 these
  // are the tightest valid lower and upper envelopes on the grid.
  double delta_low = 0.0;
  double delta_high = 0.0;
  std::vector<ScalingSample> samples;
  int rejected_pairs = 0;
  bool pass = false;
};

struct ScalingPair {
  double s;
  double t;
};

// Checks H1 (t >= s >= 1) or H2 (s <= t <= 1) on the grid. Pairs violating the
// ordering for the regime are skipped and counted; an empty filtered grid
// throws. pass iff delta_floor <= delta_low and delta_high < 1.
ScalingReport check_scaling(const ProcessSpec& spec, ScalingRegime which,
                            const std::vector<ScalingPair>& grid, double delta_floor = 0.05);

// Log-spaced grid of all ordered pairs from `points` nodes spanning [lo, hi].
std::vector<ScalingPair> log_pair_grid(double lo, double hi, int points);

// psi0(1/r) / r^d.
double levy_density_asymptotic(const ProcessSpec& spec, double r);

}  // namespace martinpot
