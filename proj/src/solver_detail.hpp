#pragma once

// Stencils and radial-line kernels shared by the two solver modes.

#include "tj/solver.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <vector>

namespace tj::detail {

/// Derivative away from a boundary node, f0 on the boundary and f1, f2, ...
/// moving into the domain.
inline double away_d1(double f0, double f1, double f2, double h) {
  return (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h);
}
inline double away_d1_fine(const std::array<double, 5>& f, double h) {
  return (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
}
inline double away_d2(double f0, double f1, double f2, double f3, double h) {
  return (2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f3) / (h * h);
}

/// Radial node layout of one sheet: the inner disk is staggered with the
/// last node on the interface, the annulus has its first node there.
struct Line {
  bool inner = true;
  int n = 0;
  double h = 0.0;

  Line(bool inner_, int n_) : inner(inner_), n(n_), h(inner_ ? 1.0 / (n_ - 0.5) : 1.0 / (n_ - 1)) {}
  double y(int i) const { return inner ? (i + 0.5) * h : 1.0 + i * h; }
  int interface_node() const { return inner ? n - 1 : 0; }
  /// k-th node counted from the interface into the domain.
  int from_interface(int k) const { return inner ? n - 1 - k : k; }
  double r(int i, double R, double R_out) const {
    return inner ? y(i) * R : R * (2.0 - y(i)) + (y(i) - 1.0) * R_out;
  }
  double ry(double R, double R_out) const { return inner ? R : R_out - R; }
  /// +1 if y increases away from the interface.
  double away_sign() const { return inner ? -1.0 : 1.0; }
};

/// Value at node i with the center mirror (i < 0) or the Neumann ghost
/// (i >= n) applied.
inline double line_value(const Line& L, const std::vector<double>& f, int i) {
  if (i < 0) return f[-1 - i];
  if (i >= L.n) return f[2 * (L.n - 1) - i];
  return f[i];
}

/// Central first derivative in y at an interior or ghost-closed node, the
/// one-sided one on the interface node.
double line_dy(const Line& L, const std::vector<double>& f, int i);

/// Interface slopes of one line: w_r from the working stencil, the
/// higher-order stencil, and w_rr.
struct InterfaceSlopes {
  double wr = 0.0;
  double wr_fine = 0.0;
  double wrr = 0.0;
};
InterfaceSlopes interface_slopes(const Line& L, const std::vector<double>& f, double R,
                                 double R_out);

/// One backward-Euler step of the radial graph equation on a line with the
/// value w_gamma imposed on the interface node. Coefficients are frozen at
/// the old state; the mesh-velocity term is explicit.
std::vector<double> advance_line(const Line& L, const std::vector<double>& f_old, double R_old,
                                 double R_new, double R_out, double dt, double w_gamma,
                                 const std::vector<double>* forcing);

/// Solves a tridiagonal system in place (Thomas algorithm); b is overwritten.
void thomas(std::vector<double> a, std::vector<double> b, std::vector<double> c,
            std::vector<double>& d);

/// 2 pi * integral of sqrt(1 + w_r^2) r dr over the line.
double line_area(const Line& L, const std::vector<double>& f, double R, double R_out);

/// Angle residuals (sum' 1/v, sum' d_nu w / v) from the three radial slopes
/// at an interface with inward normal -e_r.
std::array<double, 2> radial_angle_residuals(const std::array<double, 3>& wr);

std::pair<SolverState, StepReport> step_axisymmetric(const SolverState& s, const SolverConfig& c,
                                                     double dt);
std::pair<SolverState, StepReport> step_star(const SolverState& s, const SolverConfig& c,
                                             double dt);
Diagnostics diagnostics_axisymmetric(const SolverState& s);
Diagnostics diagnostics_star(const SolverState& s);

/// Newton loop shared by both modes: x holds the boundary unknowns, f maps
/// them to the interface residuals. Returns the iteration count; throws
/// StepRejected on failure.
using ResidualFn = std::function<Eigen::VectorXd(const std::vector<double>&)>;
/// A Jacobian passed in `reuse` is used first (chord iterations) and
/// rebuilt when the residual fails to halve.
int newton_solve(std::vector<double>& x, const ResidualFn& f, const SolverConfig& c, double dt,
                 Eigen::MatrixXd* reuse = nullptr);

/// RegimeExit unless margin R_out < R < (1 - margin) R_out.
void check_regime(double R, double R_out, double margin);

}  // namespace tj::detail
