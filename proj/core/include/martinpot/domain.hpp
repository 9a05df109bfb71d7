#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "martinpot/point.hpp"

namespace martinpot {

enum class ProfileKind { power, log_power, table };

// Where the thorn profile is used: at infinity (t -> inf) or at a finite tip (t -> 0).
enum class ThornRegime { infinity, zero };

// Thorn profile f, nondecreasing with f(t) <= t on the range it is used on.
//   power(beta):      f(t) = t^beta
//   log_power(beta):  f(t) = t * max(1, log t)^{-beta}        (infinity regime)
//                     f(t) = t * (1 + log(1/t))^{-beta}       (zero regime)
//   table:            log-log linear interpolation of (t, f) nodes, edge slopes extended
class Profile {
 public:
  static Profile power(double beta, ThornRegime regime = ThornRegime::infinity);
  static Profile log_power(double beta, ThornRegime regime = ThornRegime::infinity);
  static Profile table(std::vector<std::pair<double, double>> nodes, ThornRegime regime = ThornRegime::infinity);

  ProfileKind kind() const { return kind_; }
  ThornRegime regime() const { return regime_; }
  double beta() const { return beta_; }
  const std::vector<std::pair<double, double>>& nodes() const { return nodes_; }

  double value(double t) const;
  // log f(e^u), usable far outside the double range of t itself.
  double log_value_at_log(double u) const;

 private:
  ProfileKind kind_ = ProfileKind::power;
  ThornRegime regime_ = ThornRegime::infinity;
  double beta_ = 1.0;
  std::vector<std::pair<double, double>> nodes_;  // (log t, log f), sorted
};

class DomainNode;

// Composable description of an open subset of R^d. Cheap to copy (shared,
// immutable AST).
class Domain {
 public:
  explicit Domain(std::shared_ptr<const DomainNode> node);

  int dim() const;
  bool contains(const Point& x) const;
  // Lower bound on the distance to the boundary: positive inside, negative
  // outside. Exact for balls and half-spaces.
  double signed_bound(const Point& x) const;
  bool bounded() const;
  const DomainNode& node() const { return *node_; }
  std::shared_ptr<const DomainNode> node_ptr() const { return node_; }

 private:
  std::shared_ptr<const DomainNode> node_;
};

// Leaves.
Domain ball(const Point& center, double radius);
// {x : normal . x > offset}; normal need not be unit.
Domain halfspace(const Point& normal, double offset);
// {origin + s axis + w : t_min < s < t_max, w perp axis, |w| < f(s)}.
Domain thorn(const Profile& profile, const Point& origin, const Point& axis, double t_min,
             double t_max = std::numeric_limits<double>::infinity());
// Thorn at infinity of the standard form {y1 > 2, |y~| < f(y1)}.
Domain standard_thorn(const Profile& profile, int d);
// Thorn with tip at the origin {0 < y1 < 1, |y~| < f(y1)}.
Domain standard_finite_thorn(const Profile& profile, int d);

// Nodes.
Domain unite(std::vector<Domain> parts);
Domain intersect(std::vector<Domain> parts);
Domain complement(const Domain& d);
// D_p = D intersect B(z0, p).
Domain truncate_inside(const Domain& d, const Point& z0, double p);
// D^p = D intersect complement of closed B(z0, p).
Domain truncate_outside(const Domain& d, const Point& z0, double p);
// D intersect {p < |x - z0| < q}.
Domain truncate_annulus(const Domain& d, const Point& z0, double p, double q);
// A \ B.
Domain subtract(const Domain& a, const Domain& b);
// {lo < normal . x < hi}.
Domain slab(const Point& normal, double lo, double hi);

// Distance bound to D^c; throws std::invalid_argument if x is not in D.
double dist_to_complement(const Domain& d, const Point& x);

struct FatnessReport {
  double kappa = 0.0;
  std::vector<double> radii;
  std::vector<std::optional<Point>> witnesses;  // per radius
  bool fat = false;
};

// Witness search for B(A_r, kappa r) inside D intersect B(z0, r) at every radius.
// Semi-decision: a reported witness is always valid, a miss is not a proof.
FatnessReport kappa_fat_at(const Domain& d, const Point& z0, double kappa, const std::vector<double>& radii);
// Witness search for B(A_r, kappa r) inside D outside the closed B(z0, r) with
// |A_r - z0| < r / kappa.
FatnessReport kappa_fat_at_infinity(const Domain& d, double kappa, const std::vector<double>& radii,
                                    const std::optional<Point>& z0 = std::nullopt);

// AST node types; exposed for serialisation and introspection.
enum class NodeKind { ball, halfspace, thorn, unite, intersect, complement, truncate_inside, truncate_outside };

class DomainNode {
 public:
  virtual ~DomainNode() = default;
  virtual NodeKind kind() const = 0;
  virtual int dim() const = 0;
  virtual bool contains(const Point& x) const = 0;
  virtual double signed_bound(const Point& x) const = 0;
  virtual bool bounded() const = 0;
};

struct BallNode final : DomainNode {
  Point center;
  double radius;
  BallNode(Point c, double r) : center(c), radius(r) {}
  NodeKind kind() const override { return NodeKind::ball; }
  int dim() const override { return center.dim(); }
  bool contains(const Point& x) const override { return (x - center).norm2() < radius * radius; }
  double signed_bound(const Point& x) const override { return radius - distance(x, center); }
  bool bounded() const override { return true; }
};

struct HalfspaceNode final : DomainNode {
  Point normal;  // unit
  double offset;
  HalfspaceNode(Point n, double o) : normal(n), offset(o) {}
  NodeKind kind() const override { return NodeKind::halfspace; }
  int dim() const override { return normal.dim(); }
  bool contains(const Point& x) const override { return dot(normal, x) > offset; }
  double signed_bound(const Point& x) const override { return dot(normal, x) - offset; }
  bool bounded() const override { return false; }
};

struct ThornNode final : DomainNode {
  Profile profile;
  Point origin;
  Point axis;  // unit
  double t_min;
  double t_max;
  ThornNode(Profile f, Point o, Point a, double lo, double hi)
      : profile(std::move(f)), origin(o), axis(a), t_min(lo), t_max(hi) {}
  NodeKind kind() const override { return NodeKind::thorn; }
  int dim() const override { return origin.dim(); }
  bool contains(const Point& x) const override;
  double signed_bound(const Point& x) const override;
  bool bounded() const override { return std::isfinite(t_max); }
  // Axial coordinate and radial distance from the axis.
  std::pair<double, double> meridian(const Point& x) const;
};

struct SetNode final : DomainNode {
  NodeKind op;  // unite or intersect
  std::vector<Domain> parts;
  SetNode(NodeKind k, std::vector<Domain> p) : op(k), parts(std::move(p)) {}
  NodeKind kind() const override { return op; }
  int dim() const override { return parts.front().dim(); }
  bool contains(const Point& x) const override;
  double signed_bound(const Point& x) const override;
  bool bounded() const override;
};

struct ComplementNode final : DomainNode {
  Domain inner;
  explicit ComplementNode(Domain d) : inner(std::move(d)) {}
  NodeKind kind() const override { return NodeKind::complement; }
  int dim() const override { return inner.dim(); }
  bool contains(const Point& x) const override { return !inner.contains(x); }
  double signed_bound(const Point& x) const override { return -inner.signed_bound(x); }
  bool bounded() const override;
};

struct TruncateNode final : DomainNode {
  NodeKind op;  // truncate_inside or truncate_outside
  Domain inner;
  Point z0;
  double p;
  TruncateNode(NodeKind k, Domain d, Point z, double r) : op(k), inner(std::move(d)), z0(z), p(r) {}
  NodeKind kind() const override { return op; }
  int dim() const override { return inner.dim(); }
  bool contains(const Point& x) const override;
  double signed_bound(const Point& x) const override;
  bool bounded() const override { return op == NodeKind::truncate_inside || inner.bounded(); }
};

}  // namespace martinpot
