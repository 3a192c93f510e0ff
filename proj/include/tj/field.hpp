#pragma once

#include "tj/common.hpp"
#include "tj/periodic.hpp"

#include <array>
#include <functional>
#include <memory>
#include <vector>

namespace tj {

/// Value, gradient and Hessian of a scalar field at a point.
struct FieldJet {
  double value = 0.0;
  Vec2 grad = Vec2::Zero();
  Mat2 hess = Mat2::Zero();
};

/// Which side of the interface a sheet lives on.
enum class DomainTag {
  Inner,  // the region enclosed by the interface (sheets 1 and 2)
  Outer,  // the annular region between interface and outer boundary (sheet 3)
};

/// A graph w over a planar domain with pointwise jets.
class GraphField {
 public:
  virtual ~GraphField() = default;
  /// Throws DomainError when x is not in the closure of the domain.
  virtual FieldJet jet(const Vec2& x) const = 0;
  virtual DomainTag domain() const = 0;

  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

 private:
  double time_ = 0.0;
};

/// Field given in closed form. Used for test data and manufactured solutions.
class FunctionField final : public GraphField {
 public:
  using JetFn = std::function<FieldJet(const Vec2&)>;
  using InsideFn = std::function<bool(const Vec2&)>;

  FunctionField(DomainTag tag, JetFn fn, InsideFn inside = {})
      : tag_(tag), fn_(std::move(fn)), inside_(std::move(inside)) {}

  /// w(x) = f(|x|) from a radial profile returning (f, f', f'').
  static FunctionField radial(DomainTag tag, std::function<std::array<double, 3>(double)> profile,
                              InsideFn inside = {});

  FieldJet jet(const Vec2& x) const override;
  DomainTag domain() const override { return tag_; }

 private:
  DomainTag tag_;
  JetFn fn_;
  InsideFn inside_;
};

/// Chain rule for a radial profile (f, f', f'') at x.
FieldJet radial_jet(const Vec2& x, const std::array<double, 3>& profile);

/// Second derivatives of the grid map X(y, theta) together with its Jacobian.
struct MapJet {
  Vec2 x;
  Mat2 jac;  // columns dX/dy, dX/dtheta
  Vec2 xyy, xyt, xtt;
};

/// Structured polar grid over either the region enclosed by a star-shaped
/// interface r = R(theta) (staggered in y so that no node sits on the
/// origin) or the annulus between the interface and the circle |x| = R_out.
class PolarGrid {
 public:
  PolarGrid(DomainTag tag, int n, std::vector<double> interface_radii, double outer_radius);

  DomainTag tag() const { return tag_; }
  int nr() const { return n_; }
  int nt() const { return m_; }
  double hy() const { return hy_; }
  double ht() const { return 2.0 * kPi / m_; }
  double y(int i) const;
  double theta(int j) const { return node_parameter(j, m_); }
  double outer_radius() const { return outer_radius_; }
  double mean_radius() const { return mean_radius_; }
  const std::vector<double>& interface_radii() const { return radii_.samples(); }

  /// Row of nodes on the interface (y = 1).
  int interface_row() const { return tag_ == DomainTag::Inner ? n_ - 1 : 0; }
  int index(int i, int j) const { return i * m_ + ((j % m_) + m_) % m_; }
  Vec2 position(int i, int j) const { return map(y(i), theta(j)).x; }

  MapJet map(double y, double theta) const;
  /// Interface radius and its first two theta derivatives.
  PeriodicInterpolant::Jet radius(double theta) const { return radii_.eval(theta); }

  /// Computational coordinates (y, theta) of x, or throws DomainError.
  std::pair<double, double> locate(const Vec2& x) const;

 private:
  DomainTag tag_;
  int n_, m_;
  double hy_;
  double outer_radius_;
  double mean_radius_;
  PeriodicInterpolant radii_;
};

/// Nodal values on a polar grid with finite-difference jets.
class PolarGridField final : public GraphField {
 public:
  PolarGridField(std::shared_ptr<const PolarGrid> grid, std::vector<double> values);

  const PolarGrid& grid() const { return *grid_; }
  const std::shared_ptr<const PolarGrid>& grid_ptr() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  double value(int i, int j) const { return values_[grid_->index(i, j)]; }

  /// Jet at node (i, j). Boundary rows use one-sided stencils in y; order 2
  /// is the working accuracy, order 4 the higher-order diagnostic stencils
  /// (applied on the interface row only).
  FieldJet node_jet(int i, int j, int order = 2) const;

  /// Derivatives in computational coordinates at node (i, j):
  /// f, f_y, f_t, f_yy, f_yt, f_tt.
  std::array<double, 6> node_derivatives(int i, int j, int order = 2) const;

  FieldJet jet(const Vec2& x) const override;
  DomainTag domain() const override { return grid_->tag(); }

 private:
  double at(int i, int j) const;
  double dy(int i, int j, int order) const;
  double dyy(int i, int j, int order) const;

  std::shared_ptr<const PolarGrid> grid_;
  std::vector<double> values_;
};

/// Converts computational derivatives to a Cartesian jet.
FieldJet cartesian_jet(const MapJet& mj, const std::array<double, 6>& d);

}  // namespace tj
