#include "martinpot/domain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace martinpot {

// ---------------------------------------------------------------- Profile

Profile Profile::power(double beta, ThornRegime regime) {
  if (!(beta > 0.0)) throw std::invalid_argument("power profile: beta must be positive");
  if (regime == ThornRegime::infinity && beta > 1.0)
    throw std::invalid_argument("power profile at infinity needs beta <= 1 (f(t) <= t)");
  if (regime == ThornRegime::zero && beta < 1.0)
    throw std::invalid_argument("power profile at zero needs beta >= 1 (f(t) <= t)");
  Profile p;
  p.kind_ = ProfileKind::power;
  p.beta_ = beta;
  p.regime_ = regime;
  return p;
}

Profile Profile::log_power(double beta, ThornRegime regime) {
  if (!(beta >= 0.0)) throw std::invalid_argument("log_power profile: beta must be nonnegative");
  Profile p;
  p.kind_ = ProfileKind::log_power;
  p.beta_ = beta;
  p.regime_ = regime;
  return p;
}

Profile Profile::table(std::vector<std::pair<double, double>> nodes, ThornRegime regime) {
  if (nodes.size() < 2) throw std::invalid_argument("table profile: need at least two nodes");
  std::sort(nodes.begin(), nodes.end());
  Profile p;
  p.kind_ = ProfileKind::table;
  p.regime_ = regime;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto [t, f] = nodes[i];
    if (!(t > 0.0 && f > 0.0)) throw std::invalid_argument("table profile: nodes must be positive");
    if (f > t * (1.0 + 1e-12)) throw std::invalid_argument("table profile: violates f(t) <= t");
    if (i > 0 && f < nodes[i - 1].second) throw std::invalid_argument("table profile: must be nondecreasing");
    if (i > 0 && t == nodes[i - 1].first) throw std::invalid_argument("table profile: duplicate t");
    p.nodes_.emplace_back(std::log(t), std::log(f));
  }
  return p;
}

double Profile::log_value_at_log(double u) const {
  switch (kind_) {
    case ProfileKind::power:
      return beta_ * u;
    case ProfileKind::log_power:
      if (regime_ == ThornRegime::infinity) return u - beta_ * std::log(std::max(1.0, u));
      return u - beta_ * std::log1p(-u);
    case ProfileKind::table: {
      const auto& n = nodes_;
      std::size_t i = 1;
      if (u >= n.back().first)
        i = n.size() - 1;
      else
        while (i < n.size() - 1 && n[i].first < u) ++i;
      const auto [u0, l0] = n[i - 1];
      const auto [u1, l1] = n[i];
      const double slope = (l1 - l0) / (u1 - u0);
      return l0 + slope * (u - u0);
    }
  }
  return 0.0;
}

double Profile::value(double t) const {
  if (!(t > 0.0)) return 0.0;
  return std::exp(log_value_at_log(std::log(t)));
}

// ---------------------------------------------------------------- Domain

Domain::Domain(std::shared_ptr<const DomainNode> node) : node_(std::move(node)) {
  if (!node_) throw std::invalid_argument("null domain node");
}

int Domain::dim() const { return node_->dim(); }
bool Domain::contains(const Point& x) const { return node_->contains(x); }
double Domain::signed_bound(const Point& x) const { return node_->signed_bound(x); }
bool Domain::bounded() const { return node_->bounded(); }

Domain ball(const Point& center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("ball: radius must be positive");
  return Domain(std::make_shared<BallNode>(center, radius));
}

Domain halfspace(const Point& normal, double offset) {
  const double n = normal.norm();
  if (n == 0.0) throw std::invalid_argument("halfspace: zero normal");
  return Domain(std::make_shared<HalfspaceNode>(normal * (1.0 / n), offset / n));
}

Domain thorn(const Profile& profile, const Point& origin, const Point& axis, double t_min, double t_max) {
  if (origin.dim() != axis.dim()) throw std::invalid_argument("thorn: dimension mismatch");
  if (origin.dim() < 2) throw std::invalid_argument("thorn: needs d >= 2");
  if (!(t_min >= 0.0 && t_max > t_min)) throw std::invalid_argument("thorn: need 0 <= t_min < t_max");
  return Domain(std::make_shared<ThornNode>(profile, origin, normalized(axis), t_min, t_max));
}

Domain standard_thorn(const Profile& profile, int d) {
  return thorn(profile, Point(d), Point::axis(d, 0), 2.0);
}

Domain standard_finite_thorn(const Profile& profile, int d) {
  return thorn(profile, Point(d), Point::axis(d, 0), 0.0, 1.0);
}

namespace {
void check_parts(const std::vector<Domain>& parts) {
  if (parts.empty()) throw std::invalid_argument("set operation needs at least one operand");
  for (const auto& p : parts)
    if (p.dim() != parts.front().dim()) throw std::invalid_argument("set operation: dimension mismatch");
}
}  // namespace

Domain unite(std::vector<Domain> parts) {
  check_parts(parts);
  return Domain(std::make_shared<SetNode>(NodeKind::unite, std::move(parts)));
}

Domain intersect(std::vector<Domain> parts) {
  check_parts(parts);
  return Domain(std::make_shared<SetNode>(NodeKind::intersect, std::move(parts)));
}

Domain complement(const Domain& d) { return Domain(std::make_shared<ComplementNode>(d)); }

Domain truncate_inside(const Domain& d, const Point& z0, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("truncate_inside: radius must be positive");
  return Domain(std::make_shared<TruncateNode>(NodeKind::truncate_inside, d, z0, p));
}

Domain truncate_outside(const Domain& d, const Point& z0, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("truncate_outside: radius must be positive");
  return Domain(std::make_shared<TruncateNode>(NodeKind::truncate_outside, d, z0, p));
}

Domain truncate_annulus(const Domain& d, const Point& z0, double p, double q) {
  if (!(q > p)) throw std::invalid_argument("truncate_annulus: need p < q");
  return truncate_inside(truncate_outside(d, z0, p), z0, q);
}

Domain subtract(const Domain& a, const Domain& b) { return intersect({a, complement(b)}); }

Domain slab(const Point& normal, double lo, double hi) {
  if (!(hi > lo)) throw std::invalid_argument("slab: need lo < hi");
  return intersect({halfspace(normal, lo), halfspace(normal * -1.0, -hi)});
}

double dist_to_complement(const Domain& d, const Point& x) {
  if (!d.contains(x)) throw std::invalid_argument("dist_to_complement: point " + x.to_string() + " not in domain");
  return std::max(0.0, d.signed_bound(x));
}

// ---------------------------------------------------------------- nodes

std::pair<double, double> ThornNode::meridian(const Point& x) const {
  const Point rel = x - origin;
  const double t = dot(rel, axis);
  const double rho2 = std::max(0.0, rel.norm2() - t * t);
  return {t, std::sqrt(rho2)};
}

bool ThornNode::contains(const Point& x) const {
  const auto [t, rho] = meridian(x);
  if (!(t > t_min && t < t_max)) return false;
  return rho < profile.value(t);
}

namespace {

// Distance in the meridian half-plane from (t, rho) to the cap segment
// {s = s0, 0 <= r <= h}.
double cap_distance(double t, double rho, double s0, double h) {
  const double dr = rho > h ? rho - h : 0.0;
  return std::hypot(t - s0, dr);
}

}  // namespace

double ThornNode::signed_bound(const Point& x) const {
  const auto [t, rho] = meridian(x);
  const bool inside = contains(x);

  double best = std::numeric_limits<double>::infinity();
  if (t_min > 0.0 || profile.value(t_min) > 0.0) best = cap_distance(t, rho, t_min, profile.value(t_min));
  if (std::isfinite(t_max)) best = std::min(best, cap_distance(t, rho, t_max, profile.value(t_max)));

  // Lateral surface: minimise |(s, f(s)) - (t, rho)| over s in [t_min, t_max].
  // The vertical gap at the clamped abscissa bounds the search window.
  const double tc = std::clamp(t, t_min, std::isfinite(t_max) ? t_max : t);
  const double gap = std::hypot(t - tc, profile.value(tc) - rho);
  const double window = std::min(gap, best);
  double lo = std::max(t_min, t - window);
  double hi = std::isfinite(t_max) ? std::min(t_max, t + window) : t + window;
  auto dist_at = [&](double s) { return std::hypot(s - t, profile.value(s) - rho); };
  double lateral = gap;
  if (hi > lo) {
    constexpr int kSamples = 32;
    double s_best = lo;
    double d_best = dist_at(lo);
    for (int i = 1; i <= kSamples; ++i) {
      const double s = lo + (hi - lo) * i / kSamples;
      const double dv = dist_at(s);
      if (dv < d_best) {
        d_best = dv;
        s_best = s;
      }
    }
    // Golden-section refinement in the bracketing cell.
    const double cell = (hi - lo) / kSamples;
    double a = std::max(lo, s_best - cell);
    double b = std::min(hi, s_best + cell);
    constexpr double g = 0.6180339887498949;
    double c = b - g * (b - a), e = a + g * (b - a);
    double fc = dist_at(c), fe = dist_at(e);
    for (int it = 0; it < 40; ++it) {
      if (fc < fe) {
        b = e;
        e = c;
        fe = fc;
        c = b - g * (b - a);
        fc = dist_at(c);
      } else {
        a = c;
        c = e;
        fc = fe;
        e = a + g * (b - a);
        fe = dist_at(e);
      }
    }
    lateral = std::min({d_best, fc, fe, gap});
  }
  // Sampled minimisation can overshoot slightly; keep a margin.
  const double dist = 0.98 * std::min(best, lateral);
  return inside ? dist : -dist;
}

bool SetNode::contains(const Point& x) const {
  if (op == NodeKind::unite) {
    for (const auto& p : parts)
      if (p.contains(x)) return true;
    return false;
  }
  for (const auto& p : parts)
    if (!p.contains(x)) return false;
  return true;
}

double SetNode::signed_bound(const Point& x) const {
  double v = parts.front().signed_bound(x);
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const double s = parts[i].signed_bound(x);
    v = op == NodeKind::unite ? std::max(v, s) : std::min(v, s);
  }
  return v;
}

bool SetNode::bounded() const {
  if (op == NodeKind::unite)
    return std::all_of(parts.begin(), parts.end(), [](const Domain& d) { return d.bounded(); });
  return std::any_of(parts.begin(), parts.end(), [](const Domain& d) { return d.bounded(); });
}

bool ComplementNode::bounded() const {
  if (inner.node().kind() == NodeKind::complement)
    return static_cast<const ComplementNode&>(inner.node()).inner.bounded();
  return false;
}

bool TruncateNode::contains(const Point& x) const {
  const double r2 = (x - z0).norm2();
  if (op == NodeKind::truncate_inside) {
    if (!(r2 < p * p)) return false;
  } else if (!(r2 > p * p)) {
    return false;
  }
  return inner.contains(x);
}

double TruncateNode::signed_bound(const Point& x) const {
  const double r = distance(x, z0);
  const double shell = op == NodeKind::truncate_inside ? p - r : r - p;
  return std::min(shell, inner.signed_bound(x));
}

// ---------------------------------------------------------------- fatness

namespace {

constexpr std::array<int, kMaxDim> kPrimes = {2, 3, 5, 7, 11, 13, 17, 19};

double radical_inverse(unsigned long i, int base) {
  double inv = 1.0 / base, f = inv, v = 0.0;
  while (i > 0) {
    v += f * static_cast<double>(i % static_cast<unsigned long>(base));
    i /= static_cast<unsigned long>(base);
    f *= inv;
  }
  return v;
}

// Halton points in the ball B(centre, radius) by rejection from the cube.
std::vector<Point> halton_ball(const Point& centre, double radius, int count) {
  const int d = centre.dim();
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (unsigned long i = 1; static_cast<int>(pts.size()) < count && i < 64ul * static_cast<unsigned long>(count); ++i) {
    Point u(d);
    for (int k = 0; k < d; ++k) u[k] = 2.0 * radical_inverse(i, kPrimes[static_cast<std::size_t>(k)]) - 1.0;
    if (u.norm2() <= 1.0) pts.push_back(centre + u * radius);
  }
  return pts;
}

using Slack = double (*)(const Domain&, const Point&, const Point&, double, double);

// Largest admissible witness radius at candidate a, relative to the requirement.
double finite_slack(const Domain& d, const Point& z0, const Point& a, double r, double kappa) {
  const double room = std::min(d.signed_bound(a), r - distance(a, z0));
  return room - kappa * r;
}

double infinity_slack(const Domain& d, const Point& z0, const Point& a, double r, double kappa) {
  const double rad = distance(a, z0);
  if (!(rad < r / kappa)) return -std::numeric_limits<double>::infinity();
  const double room = std::min(d.signed_bound(a), rad - r);
  return room - kappa * r;
}

std::optional<Point> search_witness(const Domain& d, const Point& z0, double r, double kappa, bool at_infinity) {
  const int dim = d.dim();
  const Slack slack = at_infinity ? infinity_slack : finite_slack;
  const double reach = at_infinity ? r / kappa : r;
  constexpr int kCandidates = 4000;
  std::vector<Point> cands = halton_ball(z0, reach, kCandidates);
  for (int k = 0; k < dim; ++k)
    for (double sgn : {-1.0, 1.0})
      for (double frac : {0.5, at_infinity ? 1.0 + 0.5 * (1.0 / kappa - 1.0) : 0.5})
        cands.push_back(z0 + Point::axis(dim, k, sgn * frac * r));

  Point best = z0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (const auto& c : cands) {
    const double v = slack(d, z0, c, r, kappa);
    if (v >= 0.0 && d.contains(c)) return c;
    if (v > best_val) {
      best_val = v;
      best = c;
    }
  }
  // Local inflation: compass search on the slack from the best candidate.
  double step = 0.25 * kappa * r;
  for (int it = 0; it < 200 && step > 1e-6 * kappa * r; ++it) {
    bool moved = false;
    for (int k = 0; k < dim && !moved; ++k)
      for (double sgn : {-1.0, 1.0}) {
        const Point trial = best + Point::axis(dim, k, sgn * step);
        const double v = slack(d, z0, trial, r, kappa);
        if (v > best_val) {
          best_val = v;
          best = trial;
          moved = true;
          break;
        }
      }
    if (best_val >= 0.0 && d.contains(best)) return best;
    if (!moved) step *= 0.5;
  }
  return std::nullopt;
}

FatnessReport fatness(const Domain& d, const Point& z0, double kappa, const std::vector<double>& radii,
                      bool at_infinity) {
  if (!(kappa > 0.0 && kappa <= 0.5)) throw std::invalid_argument("kappa must lie in (0, 1/2]");
  if (z0.dim() != d.dim()) throw std::invalid_argument("kappa_fat: dimension mismatch");
  FatnessReport rep;
  rep.kappa = kappa;
  rep.radii = radii;
  rep.fat = !radii.empty();
  for (double r : radii) {
    if (!(r > 0.0)) throw std::invalid_argument("kappa_fat: radii must be positive");
    rep.witnesses.push_back(search_witness(d, z0, r, kappa, at_infinity));
    rep.fat = rep.fat && rep.witnesses.back().has_value();
  }
  return rep;
}

}  // namespace

FatnessReport kappa_fat_at(const Domain& d, const Point& z0, double kappa, const std::vector<double>& radii) {
  return fatness(d, z0, kappa, radii, false);
}

FatnessReport kappa_fat_at_infinity(const Domain& d, double kappa, const std::vector<double>& radii,
                                    const std::optional<Point>& z0) {
  return fatness(d, z0.value_or(Point(d.dim())), kappa, radii, true);
}

}  // namespace martinpot
