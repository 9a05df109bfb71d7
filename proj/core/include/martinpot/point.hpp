#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace martinpot {

inline constexpr int kMaxDim = 8;

// Fixed-capacity point in R^d, 1 <= d <= kMaxDim. Value type, no heap.
class Point {
 public:
  Point() = default;
  explicit Point(int dim) : dim_(check_dim(dim)) {}
  Point(std::initializer_list<double> coords) : dim_(check_dim(static_cast<int>(coords.size()))) {
    std::size_t i = 0;
    for (double c : coords) c_[i++] = c;
  }
  explicit Point(std::span<const double> coords) : dim_(check_dim(static_cast<int>(coords.size()))) {
    for (std::size_t i = 0; i < coords.size(); ++i) c_[i] = coords[i];
  }

  static Point axis(int dim, int k, double value = 1.0) {
    Point p(dim);
    p[k] = value;
    return p;
  }

  int dim() const { return dim_; }
  double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  std::span<const double> coords() const { return {c_.data(), static_cast<std::size_t>(dim_)}; }

  double norm2() const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += c_[i] * c_[i];
    return s;
  }
  double norm() const { return std::sqrt(norm2()); }

  Point& operator+=(const Point& o) {
    for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Point& operator-=(const Point& o) {
    for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Point& operator*=(double s) {
    for (int i = 0; i < dim_; ++i) c_[i] *= s;
    return *this;
  }

  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator*(Point a, double s) { return a *= s; }
  friend Point operator*(double s, Point a) { return a *= s; }
  friend bool operator==(const Point& a, const Point& b) {
    if (a.dim_ != b.dim_) return false;
    for (int i = 0; i < a.dim_; ++i)
      if (a.c_[i] != b.c_[i]) return false;
    return true;
  }

  std::string to_string() const;

 private:
  static int check_dim(int d) {
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("point dimension must be in [1, 8]");
    return d;
  }

  std::array<double, kMaxDim> c_{};
  int dim_ = 1;
};

inline double dot(const Point& a, const Point& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline double distance(const Point& a, const Point& b) { return (a - b).norm(); }

inline Point normalized(const Point& p) {
  const double n = p.norm();
  if (n == 0.0) throw std::invalid_argument("cannot normalize the zero vector");
  return p * (1.0 / n);
}

// Parses "x1,x2,...". Throws std::invalid_argument on malformed input.
Point parse_point(const std::string& text);

}  // namespace martinpot
