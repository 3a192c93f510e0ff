#pragma once

#include "tj/configuration.hpp"
#include "tj/field.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace tj {

enum class SolverMode { Axisymmetric, Star2d };

/// Exact radial solution for the manufactured mode: the interface follows
/// radius(t) and every sheet is driven by the forcing w_t - tr_g D^2 w.
class ManufacturedSolution {
 public:
  virtual ~ManufacturedSolution() = default;
  virtual double radius(double t) const = 0;
  /// (w, w_r, w_rr, w_t) of sheet I at radius r.
  virtual std::array<double, 4> profile(int sheet, double r, double t) const = 0;
  double forcing(int sheet, double r, double t) const;
};

struct SolverConfig {
  SolverMode mode = SolverMode::Axisymmetric;
  double outer_radius = 2.0;
  /// Initial interface radii at theta_j = 2 pi j / M; a single entry in
  /// axisymmetric mode.
  std::vector<double> interface_radii{1.0};
  std::array<std::shared_ptr<const GraphField>, 3> sheets;
  int n_inner = 64;
  int n_outer = 64;
  double dt = 1e-3;
  double t_end = 0.1;
  int snapshot_every = 0;  // steps between snapshots, 0 for first and last only

  double order0_tol = 1e-6;
  double order1_tol = 1e-3;
  double newton_tol = 1e-10;
  double newton_stagnation = 1e-9;
  int newton_max_iterations = 25;
  double jacobian_step = 1e-7;
  double regime_margin = 0.02;
  int max_halvings = 6;

  std::shared_ptr<const ManufacturedSolution> manufactured;

  int n_theta() const { return static_cast<int>(interface_radii.size()); }
  /// Throws std::invalid_argument on inconsistent settings.
  void check() const;
};

/// Node values on the mapped grids. In axisymmetric mode u[I] holds one
/// radial line; in star2d mode it is indexed like PolarGrid.
struct SolverState {
  SolverMode mode = SolverMode::Axisymmetric;
  double t = 0.0;
  double outer_radius = 2.0;
  int n_inner = 0, n_outer = 0;
  std::vector<double> R;
  std::vector<double> R_dot;  // radial interface speed of the last step
  std::array<std::vector<double>, 3> u;
  int steps = 0;
  std::vector<double> R_initial;  // reference curve for the normal-graph regime check
  /// Finite-difference Jacobian of the interface residuals, reused between
  /// steps in star2d mode and refreshed when convergence slows.
  std::shared_ptr<const Eigen::MatrixXd> boundary_jacobian;
};

struct InterfaceRecord {
  double theta = 0.0;
  double R = 0.0;
  double normal_velocity = 0.0;  // from the junction law
  std::array<double, 3> H{};
  double bc1 = 0.0, bc2 = 0.0;
};

struct Diagnostics {
  double energy = 0.0;
  double length = 0.0;
  double max_match = 0.0;
  double max_angle = 0.0;  // enforced stencils
  double max_angle_fine = 0.0;  // higher-order re-evaluation
  double max_compat = 0.0;     // |H1 + H2 - H3|
  double max_normal_velocity = 0.0;
  std::vector<InterfaceRecord> interface;
};

struct StepReport {
  double t = 0.0;
  double dt = 0.0;
  double max_speed = 0.0;
  double max_angle_residual = 0.0;
  double max_angle_fine = 0.0;
  int newton_iterations = 0;
  double energy = 0.0;
  double length = 0.0;
};

class CompatibilityError : public std::runtime_error {
 public:
  CompatibilityError(const std::string& what, std::string report)
      : std::runtime_error(what), report_(std::move(report)) {}
  const std::string& report() const { return report_; }

 private:
  std::string report_;
};

class StepRejected : public std::runtime_error {
 public:
  StepRejected(const std::string& what, double suggested_dt)
      : std::runtime_error(what), suggested_dt_(suggested_dt) {}
  double suggested_dt() const { return suggested_dt_; }

 private:
  double suggested_dt_;
};

class RegimeExit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CompatibilityReport {
  ResidualReport order0;
  ResidualReport order1;
  bool order0_ok = false;
  bool order1_ok = false;
  bool passed() const { return order0_ok && order1_ok; }
  std::string to_text() const;
};

/// Order-0 and order-1 residuals of the initial sheets on the initial
/// interface, judged against the configured tolerances.
CompatibilityReport compatibility_report(const SolverConfig& config);

/// Builds the initial state after the compatibility gate.
SolverState init(const SolverConfig& config);

/// Largest admissible step for the mesh-velocity advection.
double advective_cap(const SolverState& s);

std::pair<SolverState, StepReport> step(const SolverState& s, const SolverConfig& config, double dt);

Diagnostics diagnostics(const SolverState& s);

struct RunResult {
  std::vector<SolverState> snapshots;
  std::vector<StepReport> reports;
  bool regime_exit = false;
  std::string message;
  int energy_increases = 0;  // steps with E_{k+1} > E_k + 1e-8 E_0
};

/// Steps to t_end. A rejected step is retried with the suggested smaller
/// step; a regime exit stops the run and keeps the last good state.
RunResult run(const SolverConfig& config,
              const std::function<void(const SolverState&)>& on_snapshot = {});

/// Sheets of the radial lens family on the circle of radius R0: sheet 1 is
/// A (r^2 - R0^2) + B (r^2 - R0^2)^2 with slope sqrt(3) at R0, sheet 2 its
/// negative, sheet 3 zero.
std::array<std::shared_ptr<const GraphField>, 3> lens_sheets(double R0, double B = 0.0);

/// Radial sheets c1 q + c2 q^2 in q = r^2 - R0^2 with the junction slopes of
/// lemma12_solve(1, a3) at R0, sheet 3 flat at the outer radius, H1 as given
/// and H2 = H3 - H1.
std::array<std::shared_ptr<const GraphField>, 3> lemma_sheets(double R0, double outer_radius,
                                                              double a3, double H1);

/// Smooth radial solution with a shrinking interface R(t) = R0 - 0.3 t and
/// sheet 3 satisfying the outer Neumann condition.
std::shared_ptr<const ManufacturedSolution> standard_manufactured(double R0, double outer_radius);

/// Max nodal error of a state against a manufactured solution.
double manufactured_error(const SolverState& s, const ManufacturedSolution& m);

/// Physical positions of the nodes of sheet I (axisymmetric: along theta = 0).
std::vector<Vec2> node_positions(const SolverState& s, int sheet);

}  // namespace tj
