#pragma once

#include "tj/common.hpp"
#include "tj/field.hpp"
#include "tj/geometry.hpp"

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace tj {

/// H = (1/v) g^{ij} D_ij w for the upper normal, with g = I + Dw Dw^T.
double mean_curvature(const FieldJet& j);
double mean_curvature(const GraphField& field, const Vec2& x);

/// tr_g D^2 w = v H.
double trace_g_hessian(const FieldJet& j);

/// First-order data of the three sheets at one interface point, expressed in
/// the tangent/normal frame (tau, n) of the interface.
struct JunctionPointData {
  double lambda0 = 0.0;            // shared tangential slope d_tau w
  std::array<double, 3> a{};       // normal slopes d_n w^I
  std::array<double, 3> v{};       // sqrt(1 + lambda0^2 + a^2)
  double vE = 1.0;                 // sqrt(1 + lambda0^2)
  std::array<double, 3> H{};       // mean curvatures
  std::optional<double> an;        // interface normal speed, if known

  static JunctionPointData from_slopes(double lambda0, const std::array<double, 3>& a,
                                       const std::array<double, 3>& H = {});

  /// Throws JunctionError if v, vE are inconsistent with the slopes.
  void check() const;
};

struct Lemma12Slopes {
  double v3, a1, v1, a2, v2;
};

/// Normal slopes of sheets 1 and 2 forced by the 120-degree condition, given
/// the common factor alpha = sqrt(1 + lambda0^2) and the slope a3 of sheet 3.
/// Throws JunctionError("no admissible junction slopes") if |a3| >= alpha/sqrt(3).
Lemma12Slopes lemma12_solve(double alpha, double a3);

/// Junction data from lambda0 and a3 via lemma12_solve.
JunctionPointData junction_from_lemma(double lambda0, double a3, const std::array<double, 3>& H = {});

/// omega1 = R(pi/3) omega3, omega2 = R(5pi/3) omega3.
std::pair<Vec2, Vec2> rotation_form(const Vec2& omega3);

/// Orthonormal frames along the junction, in 3-space with the interface
/// frame (tau, n) in the horizontal plane.
struct JunctionFrames {
  Vec3 E;
  std::array<Vec3, 3> N;
  std::array<Vec3, 3> T;
};

JunctionFrames frame_vectors(const JunctionPointData& j, const Vec2& tau, const Vec2& n);

/// Closed-form T^I = -(1/(v vE)) [n + lambda0 (Dw)^perp, a] in the same frame.
Vec3 conormal_closed_form(const JunctionPointData& j, int sheet, const Vec2& tau, const Vec2& n);

struct VelocityDecomposition {
  std::array<double, 3> lambda{};
  std::array<double, 3> mu{};
};

/// Components of V^I = [adot, Dw^I . adot + v^I H^I] along E and T^I.
VelocityDecomposition velocity_decomposition(const JunctionPointData& j, const Vec2& adot,
                                             const Vec2& tau, const Vec2& n);

/// The six scalar junction relations as a 6x4 matrix acting on
/// (adot.n, H1, H2, H3).
Eigen::Matrix<double, 6, 4> relations_system(const JunctionPointData& j);

struct RankReport {
  int rank = 0;
  Eigen::Vector4d singular_values = Eigen::Vector4d::Zero();
  // Largest distance of a row from span(row 1, row 3), relative to max(1, |row|).
  double projection_residual = 0.0;
};

/// Numerical rank (threshold 1e-9 sigma_max) and row-space check. Throws
/// JunctionError("not a configuration point") if the first-order data violate
/// the angle conditions by more than 1e-8.
RankReport relations_rank(const JunctionPointData& j);

/// Interface normal speed determined by the mean curvatures.
double interface_normal_velocity(const JunctionPointData& j);

/// Least-squares adot.n from the full relation system with H fixed.
double least_squares_normal_velocity(const JunctionPointData& j);

/// Three graphs over the region split by the interface, inside |x| < R_out.
struct TripleConfig {
  double outer_radius = 1.0;
  std::shared_ptr<const InterfaceCurve> interface;
  std::array<std::shared_ptr<const GraphField>, 3> sheets;
};

/// Per-node residual table with named columns.
struct ResidualReport {
  std::vector<std::string> names;
  std::vector<std::vector<double>> rows;

  double max_abs(const std::string& name) const;
  double max_abs() const;
  /// One line per node: "node <j> <name>=<value> ...", then a summary line.
  std::string to_text(const std::string& title) const;
};

/// Junction data of a configuration at interface node j (first and second
/// order, H from each sheet's own side).
JunctionPointData junction_at_node(const TripleConfig& config, int j);

/// bc0_12, bc0_23 (w1-w2, w2-w3), bc1, bc2 (1/v1+1/v2-1/v3, a1/v1+a2/v2-a3/v3),
/// ordering (max(0, a1-a2)) at interface nodes, and the outer Neumann
/// derivative at the matching outer boundary node.
ResidualReport validate_order0(const TripleConfig& config);

/// H1 + H2 - H3 at interface nodes.
ResidualReport validate_order1(const TripleConfig& config);

}  // namespace tj
