#pragma once

#include "tj/configuration.hpp"
#include "tj/field.hpp"
#include "tj/geometry.hpp"

#include <array>
#include <memory>
#include <vector>

namespace tj {

/// Reference interface r = R(theta) with matching polar grids: the inner grid
/// carries sheets 1 and 2, the outer grid sheet 3. Interface node j of the
/// curve is node j of each grid's interface row.
struct FixedDomain {
  std::shared_ptr<const TubularData> tube;
  std::shared_ptr<const PolarGrid> inner;
  std::shared_ptr<const PolarGrid> outer;

  static FixedDomain build(const std::vector<double>& radii, double outer_radius, int n_inner,
                           int n_outer);
  const std::shared_ptr<const PolarGrid>& grid(int sheet) const { return sheet < 2 ? inner : outer; }
};

/// Unknowns of the fixed-domain formulation: u^I on the reference grids and
/// the interface offset rho at the interface nodes.
struct TransformedState {
  FixedDomain domain;
  std::array<std::vector<double>, 3> u;
  std::vector<double> rho;
  double t = 0.0;

  /// rho_tilde sampled at the nodes of the grid of `sheet`.
  std::vector<double> rho_tilde(int sheet) const;
};

/// h = Dphi^T Dphi + Du Du^T.
Mat2 pullback_metric_at(const Mat2& dphi, const Vec2& du);

struct PullbackMetric {
  std::vector<Mat2> h;
  std::vector<Mat2> inverse;
  std::vector<double> det;
};

/// Pullback metric of sheet I at every grid node. Throws GeometryError if it
/// fails to be positive definite somewhere.
PullbackMetric pullback_metric(const TransformedState& s, int sheet);

/// Jets of the cutoff normal field nu_bar and the diffeomorphism pieces at the
/// nodes of one grid.
struct Kinematics {
  std::vector<FieldJet> rho;                // rho_tilde
  std::array<std::vector<FieldJet>, 2> nu;  // components of nu_bar
  std::vector<double> zeta_bar;
  std::vector<Mat2> dphi;

  Vec2 nu_bar(std::size_t k) const { return {nu[0][k].value, nu[1][k].value}; }
  Mat2 dnu(std::size_t k) const;  // row i = gradient of component i
};

Kinematics kinematics(const FixedDomain& d, int sheet, const std::vector<double>& rho_tilde);

/// C_h = Dphi^{-1} [rho tr_h D^2 nu_bar + 2 <D rho, D nu_bar>_h] at node k.
Vec2 transport_term(const Kinematics& kin, std::size_t k, const Mat2& hinv);

/// Residual of the transformed equation for sheet I at every grid node, for
/// given time derivatives of u^I and rho_tilde (node arrays on the same grid).
std::vector<double> pde_residual_u(const TransformedState& s, const std::vector<double>& dt_u,
                                   const std::vector<double>& dt_rho_tilde, int sheet);

/// Matching, and the two angle conditions with v^I built from the derivatives
/// along tau_hat and mu. Columns bc0_12, bc0_23, bc1, bc2.
ResidualReport conjugation_residual_u(const TransformedState& s);

/// Initial data u0^I sampled on the reference grids together with the derived
/// quantities used by the U formulation.
struct ReferenceData {
  std::array<std::shared_ptr<const GraphField>, 3> u0;
  std::array<std::vector<FieldJet>, 3> u0_jet;     // analytic jets at grid nodes
  std::array<std::vector<FieldJet>, 3> q;          // d_nubar u0, finite-difference jets
  std::array<std::vector<FieldJet>, 3> delta_hat;  // hat extension of delta0
  std::vector<double> delta0;                      // at interface nodes
  std::array<std::vector<double>, 3> n0;           // d_nu u0^I at interface nodes
  std::array<std::vector<double>, 3> v0;

  /// Throws JunctionError("degenerate junction") if |d_nu u0^1 - d_nu u0^2| < 1e-8.
  static ReferenceData build(const FixedDomain& d,
                             const std::array<std::shared_ptr<const GraphField>, 3>& u0);
};

struct UVariables {
  std::array<std::vector<double>, 3> U;
  std::array<std::vector<double>, 3> rho_forms;  // three quotient forms at interface nodes
  std::vector<double> matching;                  // sum' U^I / v0^I at interface nodes
};

UVariables to_U(const TransformedState& s, const ReferenceData& ref);

/// Fields of the U formulation for sheet I, all at grid nodes.
struct UTerms {
  std::vector<double> A;
  std::vector<double> F;
  std::vector<FieldJet> E;  // restriction-extension of U^2 - U^1
  std::vector<FieldJet> U;
  PullbackMetric metric;
};

UTerms u_terms(const TransformedState& s, const ReferenceData& ref, const UVariables& uv, int sheet);

std::vector<double> coefficient_A(const TransformedState& s, const ReferenceData& ref, int sheet);
std::vector<double> forcing_F(const TransformedState& s, const ReferenceData& ref, int sheet);

/// Time derivatives of U^I and E[U^2 - U^1] implied by those of u^I and rho_tilde.
std::pair<std::vector<double>, std::vector<double>> u_time_derivatives(
    const TransformedState& s, const ReferenceData& ref, const std::vector<double>& dt_u,
    const std::vector<double>& dt_rho_tilde, int sheet);

/// L_h[U] + A L_h[E] - F for sheet I.
std::vector<double> u_system_residual_U(const TransformedState& s, const ReferenceData& ref,
                                        const std::vector<double>& dt_U,
                                        const std::vector<double>& dt_E, int sheet);

// ---------------------------------------------------------------------------
// Linearization of the conjugation conditions at t = 0.

/// First and second derivatives of u0^I at one interface node, in the frame
/// (tau0, nu) with curvature k0.
struct BoundaryNode {
  Vec2 tau, nu;
  double k0 = 0.0;
  std::array<Vec2, 3> du0;
  std::array<Mat2, 3> d2u0;
};

struct LinearizedBoundaryNode {
  std::array<Vec2, 3> B1, B2;
  std::array<double, 3> gamma0{};
  double delta0 = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
};

LinearizedBoundaryNode linearize_boundary(const BoundaryNode& b);

/// Per interface node of a configuration; u0 jets analytic.
std::vector<LinearizedBoundaryNode> linearized_boundary(
    const InterfaceCurve& curve, const std::array<std::shared_ptr<const GraphField>, 3>& u0);

/// Perturbation (rho, d_tau rho, U^I, DU^I) at one interface node.
struct BoundaryPerturbation {
  double rho = 0.0;
  double drho = 0.0;
  std::array<double, 3> U{};
  std::array<Vec2, 3> DU{Vec2::Zero(), Vec2::Zero(), Vec2::Zero()};
};

/// Du^I at the node for u = u0 + (d_nubar u0) rho_tilde + U.
Vec2 perturbed_gradient(const BoundaryNode& b, int sheet, const BoundaryPerturbation& p);
/// 1/v^I with v built from the derivatives along tau_hat and mu.
double inverse_v(const BoundaryNode& b, int sheet, const BoundaryPerturbation& p);
/// Linear part -(v0)^-3 Du0 . DU + gamma0 rho of 1/v - 1/v0.
double inverse_v_linear(const BoundaryNode& b, const LinearizedBoundaryNode& l, int sheet,
                        const BoundaryPerturbation& p);

/// sum' 1/v^I and sum' d_mu u^I / v^I.
double bc1_nonlinear(const BoundaryNode& b, const BoundaryPerturbation& p);
double bc2_nonlinear(const BoundaryNode& b, const BoundaryPerturbation& p);
/// sum' B1 . DU + gamma1 (U2 - U1) and sum' B2 . DU + gamma2 (U2 - U1).
double lbc1(const LinearizedBoundaryNode& l, const BoundaryPerturbation& p);
double lbc2(const LinearizedBoundaryNode& l, const BoundaryPerturbation& p);

}  // namespace tj
