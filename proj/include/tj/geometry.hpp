#pragma once

#include "tj/common.hpp"
#include "tj/periodic.hpp"

#include <memory>
#include <span>
#include <vector>

namespace tj {

class GraphField;

/// Simple closed planar curve sampled uniformly in a periodic parameter
/// s in [0, 2*pi). Always stored counterclockwise, so that the normal
/// nu = perp(tangent) points into the enclosed region and tangent = -perp(nu).
class InterfaceCurve {
 public:
  struct Frame {
    Vec2 point;
    Vec2 tangent;
    Vec2 normal;
    double curvature = 0.0;
    double speed = 0.0;  // |dc/ds|, arclength per unit parameter
  };

  struct ClosestPoint {
    double parameter = 0.0;
    Vec2 foot;
    double distance = 0.0;
    double signed_distance = 0.0;  // positive on the normal (inner) side
    bool in_tube = false;
  };

  /// Builds the curve from M >= 16 samples. Rejects repeated or
  /// self-intersecting samples, reporting the offending input index.
  static InterfaceCurve from_points(std::span<const Vec2> points);

  /// Star-shaped curve r = radius(theta) about the origin, sampled at
  /// theta_j = 2*pi*j/M. The curve parameter is then theta itself.
  static InterfaceCurve star(std::span<const double> radii);

  int size() const { return static_cast<int>(points_.size()); }
  const Vec2& point(int j) const { return points_[wrap(j)]; }
  const Vec2& tangent(int j) const { return tangents_[wrap(j)]; }
  const Vec2& normal(int j) const { return normals_[wrap(j)]; }
  double curvature(int j) const { return curvature_[wrap(j)]; }
  double speed(int j) const { return speed_[wrap(j)]; }
  double parameter(int j) const { return node_parameter(wrap(j), size()); }

  /// Whether the input samples were reversed to obtain counterclockwise order.
  bool reversed() const { return reversed_; }

  Frame frame_at(double s) const;
  ClosestPoint closest_point(const Vec2& x) const;

  /// Derivative with respect to arclength of node data, at the nodes.
  std::vector<double> arclength_derivative(std::span<const double> values) const;

  /// Half-width of the tubular neighborhood on which the closest-point
  /// projection is treated as single valued: min of the smallest radius of
  /// curvature and half the bottleneck distance.
  double reach() const { return reach_; }
  double length() const { return length_; }

 private:
  InterfaceCurve() = default;
  void finish();
  int wrap(int j) const {
    const int m = size();
    return ((j % m) + m) % m;
  }

  std::vector<Vec2> points_;
  std::vector<Vec2> tangents_;
  std::vector<Vec2> normals_;
  std::vector<double> curvature_;
  std::vector<double> speed_;
  PeriodicInterpolant x_, y_;
  double reach_ = 0.0;
  double length_ = 0.0;
  bool reversed_ = false;
};

/// Even cutoff: 1 for |r| <= inner, 0 for |r| >= outer, C^3 in between.
/// The slope is spread over the transition with a plateau, so its maximum is
/// (4/3) / (outer - inner).
class CutoffProfile {
 public:
  CutoffProfile() = default;
  CutoffProfile(double inner, double outer);

  double value(double r) const;
  double d1(double r) const;
  double d2(double r) const;
  double inner() const { return inner_; }
  double outer() const { return outer_; }
  double max_slope() const;

 private:
  double inner_ = 0.0;
  double outer_ = 1.0;
};

/// Tubular neighborhoods of an interface curve with the cutoffs built on
/// them: zeta (1 on |r| <= r0/2, 0 off |r| < r0) and chi (1 on |r| < r0,
/// 0 outside the outer tube |r| < reach).
class TubularData {
 public:
  explicit TubularData(std::shared_ptr<const InterfaceCurve> curve);

  const InterfaceCurve& curve() const { return *curve_; }
  const std::shared_ptr<const InterfaceCurve>& curve_ptr() const { return curve_; }

  double outer_half_width() const { return curve_->reach(); }
  double half_width() const { return r0_; }
  const CutoffProfile& zeta_profile() const { return zeta_; }
  const CutoffProfile& chi_profile() const { return chi_; }

  /// Oriented distance; throws GeometryError outside the outer tube.
  double signed_distance(const Vec2& x) const;

  double zeta(const Vec2& x) const;
  double chi(const Vec2& x) const;
  /// d_nu zeta = zeta_hat'(r).
  double normal_derivative_of_zeta(const Vec2& x) const;
  /// nu_bar = zeta * nu and its Jacobian (d nu_bar_i / d x_j).
  Vec2 nu_bar(const Vec2& x) const;
  Mat2 nu_bar_jacobian(const Vec2& x) const;

 private:
  std::shared_ptr<const InterfaceCurve> curve_;
  double r0_ = 0.0;
  CutoffProfile zeta_;
  CutoffProfile chi_;
};

enum class ExtensionKind {
  Tilde,  // zeta * f_rad, supported in |r| < r0
  Hat,    // chi * f_rad, supported in the outer tube
};

/// Extension to the plane of node data on the interface, constant along
/// normal segments inside the tube and cut off outside it.
class ScalarExtension {
 public:
  struct Jet {
    double value = 0.0;
    Vec2 gradient = Vec2::Zero();
  };

  ScalarExtension(std::shared_ptr<const TubularData> tube, std::vector<double> node_values,
                  ExtensionKind kind);

  ExtensionKind kind() const { return kind_; }
  const std::vector<double>& node_values() const { return interp_.samples(); }
  const TubularData& tube() const { return *tube_; }
  const std::shared_ptr<const TubularData>& tube_ptr() const { return tube_; }

  double operator()(const Vec2& x) const { return jet(x).value; }
  Jet jet(const Vec2& x) const;
  /// Value of the normal-constant extension f_rad at the foot parameter.
  double radial_value(double parameter) const { return interp_.value(parameter); }

 private:
  std::shared_ptr<const TubularData> tube_;
  PeriodicInterpolant interp_;
  ExtensionKind kind_;
};

ScalarExtension extend_tilde(std::shared_ptr<const TubularData> tube, std::vector<double> rho);
ScalarExtension extend_hat(std::shared_ptr<const TubularData> tube, std::vector<double> f);

/// E[U] = (U restricted to the interface nodes) extended with the tilde rule.
/// Throws DomainError if the field cannot be evaluated at an interface node.
ScalarExtension restrict_extend(std::shared_ptr<const TubularData> tube, const GraphField& field);

/// Normal-graph diffeomorphism phi(x) = x + rho_tilde(x) nu_bar(x).
class Diffeo {
 public:
  explicit Diffeo(ScalarExtension offset);

  const ScalarExtension& offset() const { return offset_; }
  Vec2 map(const Vec2& x) const;
  Mat2 jacobian(const Vec2& x) const;
  /// 1 / (1 + 2 (d_nu zeta) rho_tilde).
  double zeta_bar(const Vec2& x) const;
  /// Newton inverse, tolerance 1e-12, at most 50 iterations.
  Vec2 inverse(const Vec2& y) const;

 private:
  ScalarExtension offset_;
};

/// Coefficients of the vectors mu, tau_hat on the reference curve that
/// D phi maps to the normal n and tangent tau of the moved curve.
struct FrameActionNode {
  double a11 = 1.0;
  double a21 = 0.0;
  double a22 = 1.0;
  Vec2 mu;
  Vec2 tau_hat;
  Vec2 n;
  Vec2 tau;
};

/// Per-node frame action for offset rho with arclength derivative drho.
/// Throws GeometryError when 1 - k0 rho <= 0 at some node.
std::vector<FrameActionNode> diffeo_frame_action(const InterfaceCurve& curve,
                                                 std::span<const double> rho,
                                                 std::span<const double> drho);

/// Single-node version used by the linearization machinery.
FrameActionNode frame_action_at(const Vec2& tangent, const Vec2& normal, double curvature,
                                double rho, double drho);

}  // namespace tj
