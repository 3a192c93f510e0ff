#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tj {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSqrt3 = std::numbers::sqrt3;

// Counterclockwise quarter turn: (x, y) -> (-y, x).
inline Vec2 perp(const Vec2& v) { return {-v.y(), v.x()}; }

inline Mat2 rotation(double angle) {
  Mat2 r;
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Failure of a geometric construction (degenerate curve, point outside a tube,
/// interface leaving the normal-graph regime). `node()` is -1 when no single
/// node is responsible.
class GeometryError : public std::runtime_error {
 public:
  explicit GeometryError(const std::string& what, int node = -1)
      : std::runtime_error(what), node_(node) {}
  int node() const { return node_; }

 private:
  int node_;
};

/// Field evaluated outside its domain of definition.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Junction data that cannot come from a triple-junction configuration.
class JunctionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tj
