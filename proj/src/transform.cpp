#include "tj/transform.hpp"

namespace tj {

namespace {

constexpr std::array<double, 3> kSigmaPrime{1.0, 1.0, -1.0};

std::vector<FieldJet> grid_jets(const std::shared_ptr<const PolarGrid>& grid,
                                const std::vector<double>& values) {
  const PolarGridField f(grid, values);
  std::vector<FieldJet> out(values.size());
  for (int i = 0; i < grid->nr(); ++i) {
    for (int j = 0; j < grid->nt(); ++j) out[grid->index(i, j)] = f.node_jet(i, j);
  }
  return out;
}

double trace(const Mat2& hinv, const Mat2& hess) { return hinv.cwiseProduct(hess).sum(); }

}  // namespace

FixedDomain FixedDomain::build(const std::vector<double>& radii, double outer_radius, int n_inner,
                               int n_outer) {
  FixedDomain d;
  auto curve = std::make_shared<const InterfaceCurve>(InterfaceCurve::star(radii));
  d.tube = std::make_shared<const TubularData>(curve);
  d.inner = std::make_shared<const PolarGrid>(DomainTag::Inner, n_inner, radii, outer_radius);
  d.outer = std::make_shared<const PolarGrid>(DomainTag::Outer, n_outer, radii, outer_radius);
  return d;
}

std::vector<double> TransformedState::rho_tilde(int sheet) const {
  const auto& grid = *domain.grid(sheet);
  const auto ext = extend_tilde(domain.tube, rho);
  std::vector<double> out(grid.nr() * grid.nt());
  for (int i = 0; i < grid.nr(); ++i) {
    for (int j = 0; j < grid.nt(); ++j) {
      // The interface row sits on the curve, where rho_tilde = rho exactly.
      out[grid.index(i, j)] = i == grid.interface_row() ? rho[j] : ext(grid.position(i, j));
    }
  }
  return out;
}

Mat2 pullback_metric_at(const Mat2& dphi, const Vec2& du) {
  return dphi.transpose() * dphi + du * du.transpose();
}

Mat2 Kinematics::dnu(std::size_t k) const {
  Mat2 m;
  m.row(0) = nu[0][k].grad.transpose();
  m.row(1) = nu[1][k].grad.transpose();
  return m;
}

Kinematics kinematics(const FixedDomain& d, int sheet, const std::vector<double>& rho_tilde) {
  const auto& grid = d.grid(sheet);
  const auto& tube = *d.tube;
  const std::size_t count = rho_tilde.size();
  std::vector<double> nx(count), ny(count), dzeta(count);
  for (int i = 0; i < grid->nr(); ++i) {
    for (int j = 0; j < grid->nt(); ++j) {
      const Vec2 x = grid->position(i, j);
      const Vec2 nb = tube.nu_bar(x);
      const int k = grid->index(i, j);
      nx[k] = nb.x();
      ny[k] = nb.y();
      dzeta[k] = tube.normal_derivative_of_zeta(x);
    }
  }
  Kinematics kin;
  kin.rho = grid_jets(grid, rho_tilde);
  kin.nu = {grid_jets(grid, nx), grid_jets(grid, ny)};
  kin.zeta_bar.resize(count);
  kin.dphi.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    kin.zeta_bar[k] = 1.0 / (1.0 + 2.0 * dzeta[k] * rho_tilde[k]);
    kin.dphi[k] = Mat2::Identity() + kin.nu_bar(k) * kin.rho[k].grad.transpose() +
                  rho_tilde[k] * kin.dnu(k);
  }
  return kin;
}

Vec2 transport_term(const Kinematics& kin, std::size_t k, const Mat2& hinv) {
  const Vec2 tr(trace(hinv, kin.nu[0][k].hess), trace(hinv, kin.nu[1][k].hess));
  const Vec2 pairing = kin.dnu(k) * (hinv * kin.rho[k].grad);
  return kin.dphi[k].partialPivLu().solve(kin.rho[k].value * tr + 2.0 * pairing);
}

namespace {

PullbackMetric metric_from(const std::vector<Mat2>& dphi, const std::vector<Vec2>& du) {
  PullbackMetric m;
  const std::size_t count = dphi.size();
  m.h.resize(count);
  m.inverse.resize(count);
  m.det.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    m.h[k] = pullback_metric_at(dphi[k], du[k]);
    m.det[k] = m.h[k].determinant();
    if (!(m.h[k](0, 0) > 0 && m.det[k] > 0)) {
      throw GeometryError("pullback metric not positive definite", static_cast<int>(k));
    }
    m.inverse[k] = m.h[k].inverse();
  }
  return m;
}

}  // namespace

PullbackMetric pullback_metric(const TransformedState& s, int sheet) {
  const auto kin = kinematics(s.domain, sheet, s.rho_tilde(sheet));
  const auto uj = grid_jets(s.domain.grid(sheet), s.u[sheet]);
  std::vector<Vec2> du(uj.size());
  for (std::size_t k = 0; k < uj.size(); ++k) du[k] = uj[k].grad;
  return metric_from(kin.dphi, du);
}

std::vector<double> pde_residual_u(const TransformedState& s, const std::vector<double>& dt_u,
                                   const std::vector<double>& dt_rho_tilde, int sheet) {
  const auto rt = s.rho_tilde(sheet);
  const auto kin = kinematics(s.domain, sheet, rt);
  const auto uj = grid_jets(s.domain.grid(sheet), s.u[sheet]);
  std::vector<Vec2> du(uj.size());
  for (std::size_t k = 0; k < uj.size(); ++k) du[k] = uj[k].grad;
  const auto metric = metric_from(kin.dphi, du);

  std::vector<double> res(uj.size());
  for (std::size_t k = 0; k < uj.size(); ++k) {
    const Mat2& hinv = metric.inverse[k];
    const double lu = dt_u[k] - trace(hinv, uj[k].hess);
    const double lrho = dt_rho_tilde[k] - trace(hinv, kin.rho[k].hess);
    const double dnu_u = kin.nu_bar(k).dot(du[k]);
    res[k] = lu - kin.zeta_bar[k] * dnu_u * lrho + du[k].dot(transport_term(kin, k, hinv));
  }
  return res;
}

ResidualReport conjugation_residual_u(const TransformedState& s) {
  const auto& curve = s.domain.tube->curve();
  const int m = curve.size();
  const auto drho = curve.arclength_derivative(s.rho);
  const auto frames = diffeo_frame_action(curve, s.rho, drho);
  std::array<PolarGridField, 3> fields{PolarGridField(s.domain.inner, s.u[0]),
                                       PolarGridField(s.domain.inner, s.u[1]),
                                       PolarGridField(s.domain.outer, s.u[2])};
  ResidualReport rep;
  rep.names = {"bc0_12", "bc0_23", "bc1", "bc2"};
  for (int j = 0; j < m; ++j) {
    std::array<double, 3> w{}, inv_v{}, dmu{};
    for (int I = 0; I < 3; ++I) {
      const auto& f = fields[I];
      const int row = f.grid().interface_row();
      const auto jet = f.node_jet(row, j);
      w[I] = f.value(row, j);
      const double dtau_hat = frames[j].tau_hat.dot(jet.grad);
      dmu[I] = frames[j].mu.dot(jet.grad);
      inv_v[I] = 1.0 / std::sqrt(1.0 + dtau_hat * dtau_hat + dmu[I] * dmu[I]);
    }
    rep.rows.push_back({w[0] - w[1], w[1] - w[2], inv_v[0] + inv_v[1] - inv_v[2],
                        dmu[0] * inv_v[0] + dmu[1] * inv_v[1] - dmu[2] * inv_v[2]});
  }
  return rep;
}

}  // namespace tj

namespace tj {

ReferenceData ReferenceData::build(const FixedDomain& d,
                                   const std::array<std::shared_ptr<const GraphField>, 3>& u0) {
  ReferenceData ref;
  ref.u0 = u0;
  const auto& tube = *d.tube;
  const auto& curve = tube.curve();
  const int m = curve.size();

  ref.delta0.resize(m);
  for (int I = 0; I < 3; ++I) {
    ref.n0[I].resize(m);
    ref.v0[I].resize(m);
  }
  for (int j = 0; j < m; ++j) {
    for (int I = 0; I < 3; ++I) {
      const Vec2 g = u0[I]->jet(curve.point(j)).grad;
      ref.n0[I][j] = g.dot(curve.normal(j));
      ref.v0[I][j] = std::sqrt(1.0 + g.squaredNorm());
    }
    const double gap = ref.n0[0][j] - ref.n0[1][j];
    if (std::abs(gap) < 1e-8) {
      throw JunctionError("degenerate junction at interface node " + std::to_string(j));
    }
    ref.delta0[j] = 1.0 / gap;
  }

  const auto dhat = extend_hat(d.tube, ref.delta0);
  for (int I = 0; I < 3; ++I) {
    const auto& grid = d.grid(I);
    const int count = grid->nr() * grid->nt();
    ref.u0_jet[I].resize(count);
    std::vector<double> q(count), dh(count);
    for (int i = 0; i < grid->nr(); ++i) {
      for (int j = 0; j < m; ++j) {
        const int k = grid->index(i, j);
        const Vec2 x = grid->position(i, j);
        ref.u0_jet[I][k] = u0[I]->jet(x);
        q[k] = ref.u0_jet[I][k].grad.dot(tube.nu_bar(x));
        dh[k] = i == grid->interface_row() ? ref.delta0[j] : dhat(x);
      }
    }
    ref.q[I] = grid_jets(grid, q);
    ref.delta_hat[I] = grid_jets(grid, dh);
  }
  return ref;
}

UVariables to_U(const TransformedState& s, const ReferenceData& ref) {
  UVariables uv;
  for (int I = 0; I < 3; ++I) {
    const auto rt = s.rho_tilde(I);
    uv.U[I].resize(rt.size());
    for (std::size_t k = 0; k < rt.size(); ++k) {
      uv.U[I][k] = s.u[I][k] - ref.u0_jet[I][k].value - ref.q[I][k].value * rt[k];
    }
  }
  const auto& inner = *s.domain.inner;
  const auto& outer = *s.domain.outer;
  const int m = inner.nt();
  for (auto& f : uv.rho_forms) f.resize(m);
  uv.matching.resize(m);
  for (int j = 0; j < m; ++j) {
    const double U1 = uv.U[0][inner.index(inner.interface_row(), j)];
    const double U2 = uv.U[1][inner.index(inner.interface_row(), j)];
    const double U3 = uv.U[2][outer.index(outer.interface_row(), j)];
    const double n1 = ref.n0[0][j], n2 = ref.n0[1][j], n3 = ref.n0[2][j];
    uv.rho_forms[0][j] = ref.delta0[j] * (U2 - U1);
    uv.rho_forms[1][j] = (U3 - U2) / (n2 - n3);
    uv.rho_forms[2][j] = (U3 - U1) / (n1 - n3);
    uv.matching[j] = U1 / ref.v0[0][j] + U2 / ref.v0[1][j] - U3 / ref.v0[2][j];
  }
  return uv;
}

UTerms u_terms(const TransformedState& s, const ReferenceData& ref, const UVariables& uv,
               int sheet) {
  const auto& grid = s.domain.grid(sheet);
  const auto& inner = *s.domain.inner;
  const int m = grid->nt();
  const auto rt = s.rho_tilde(sheet);
  const auto kin = kinematics(s.domain, sheet, rt);

  std::vector<double> jump(m);
  for (int j = 0; j < m; ++j) {
    const int k = inner.index(inner.interface_row(), j);
    jump[j] = uv.U[1][k] - uv.U[0][k];
  }
  const auto ext = extend_tilde(s.domain.tube, jump);
  std::vector<double> e(rt.size());
  for (int i = 0; i < grid->nr(); ++i) {
    for (int j = 0; j < m; ++j) {
      e[grid->index(i, j)] = i == grid->interface_row() ? jump[j] : ext(grid->position(i, j));
    }
  }

  UTerms out;
  out.E = grid_jets(grid, e);
  out.U = grid_jets(grid, uv.U[sheet]);
  const std::size_t count = rt.size();
  std::vector<Vec2> du(count);
  const auto& u0 = ref.u0_jet[sheet];
  const auto& q = ref.q[sheet];
  for (std::size_t k = 0; k < count; ++k) {
    du[k] = u0[k].grad + rt[k] * q[k].grad + q[k].value * kin.rho[k].grad + out.U[k].grad;
  }
  out.metric = metric_from(kin.dphi, du);
  out.A.resize(count);
  out.F.resize(count);
  const auto& dh = ref.delta_hat[sheet];
  for (std::size_t k = 0; k < count; ++k) {
    const Mat2& hinv = out.metric.inverse[k];
    const double B = q[k].value - kin.zeta_bar[k] * kin.nu_bar(k).dot(du[k]);
    out.A[k] = dh[k].value * B;
    const double nonlocal = 2.0 * dh[k].grad.dot(hinv * out.E[k].grad) +
                            out.E[k].value * trace(hinv, dh[k].hess);
    out.F[k] = B * nonlocal - du[k].dot(transport_term(kin, k, hinv)) +
               2.0 * kin.rho[k].grad.dot(hinv * q[k].grad) + trace(hinv, u0[k].hess) +
               rt[k] * trace(hinv, q[k].hess);
  }
  return out;
}

std::vector<double> coefficient_A(const TransformedState& s, const ReferenceData& ref, int sheet) {
  return u_terms(s, ref, to_U(s, ref), sheet).A;
}

std::vector<double> forcing_F(const TransformedState& s, const ReferenceData& ref, int sheet) {
  return u_terms(s, ref, to_U(s, ref), sheet).F;
}

std::pair<std::vector<double>, std::vector<double>> u_time_derivatives(
    const TransformedState&, const ReferenceData& ref, const std::vector<double>& dt_u,
    const std::vector<double>& dt_rho_tilde, int sheet) {
  const std::size_t count = dt_u.size();
  std::vector<double> dU(count), dE(count);
  for (std::size_t k = 0; k < count; ++k) {
    dU[k] = dt_u[k] - ref.q[sheet][k].value * dt_rho_tilde[k];
    const double dh = ref.delta_hat[sheet][k].value;
    dE[k] = dt_rho_tilde[k] == 0.0 ? 0.0 : dt_rho_tilde[k] / dh;
  }
  return {dU, dE};
}

std::vector<double> u_system_residual_U(const TransformedState& s, const ReferenceData& ref,
                                        const std::vector<double>& dt_U,
                                        const std::vector<double>& dt_E, int sheet) {
  const auto terms = u_terms(s, ref, to_U(s, ref), sheet);
  std::vector<double> res(dt_U.size());
  for (std::size_t k = 0; k < res.size(); ++k) {
    const Mat2& hinv = terms.metric.inverse[k];
    const double LU = dt_U[k] - trace(hinv, terms.U[k].hess);
    const double LE = dt_E[k] - trace(hinv, terms.E[k].hess);
    res[k] = LU + terms.A[k] * LE - terms.F[k];
  }
  return res;
}

// ---------------------------------------------------------------------------

LinearizedBoundaryNode linearize_boundary(const BoundaryNode& b) {
  LinearizedBoundaryNode l;
  std::array<double, 3> n0{}, v0{}, hnn{};
  for (int I = 0; I < 3; ++I) {
    const Vec2& g = b.du0[I];
    n0[I] = g.dot(b.nu);
    const double lambda = g.dot(b.tau);
    v0[I] = std::sqrt(1.0 + g.squaredNorm());
    hnn[I] = b.nu.dot(b.d2u0[I] * b.nu);
    // Derivative of d_nu u0 along the curve, d_tau(d_nu u0) = D^2u0(tau, nu) - k0 lambda.
    const double dtau_dnu = b.tau.dot(b.d2u0[I] * b.nu) - b.k0 * lambda;
    const double v3 = v0[I] * v0[I] * v0[I];
    l.gamma0[I] = -(n0[I] * hnn[I] + lambda * dtau_dnu + lambda * lambda * b.k0) / v3;
    l.B1[I] = g / v3;
    l.B2[I] = b.nu / v0[I] - n0[I] / v3 * g;
  }
  const double gap = n0[0] - n0[1];
  if (std::abs(gap) < 1e-8) throw JunctionError("degenerate junction");
  l.delta0 = 1.0 / gap;
  double s1 = 0.0, s2 = 0.0;
  for (int I = 0; I < 3; ++I) {
    s1 += kSigmaPrime[I] * l.gamma0[I];
    s2 += kSigmaPrime[I] * (n0[I] * l.gamma0[I] + hnn[I] / v0[I]);
  }
  l.gamma1 = -l.delta0 * s1;
  l.gamma2 = l.delta0 * s2;
  return l;
}

std::vector<LinearizedBoundaryNode> linearized_boundary(
    const InterfaceCurve& curve, const std::array<std::shared_ptr<const GraphField>, 3>& u0) {
  std::vector<LinearizedBoundaryNode> out;
  out.reserve(curve.size());
  for (int j = 0; j < curve.size(); ++j) {
    BoundaryNode b;
    b.tau = curve.tangent(j);
    b.nu = curve.normal(j);
    b.k0 = curve.curvature(j);
    for (int I = 0; I < 3; ++I) {
      const auto jet = u0[I]->jet(curve.point(j));
      b.du0[I] = jet.grad;
      b.d2u0[I] = jet.hess;
    }
    out.push_back(linearize_boundary(b));
  }
  return out;
}

Vec2 perturbed_gradient(const BoundaryNode& b, int I, const BoundaryPerturbation& p) {
  const Vec2& g = b.du0[I];
  const double n0 = g.dot(b.nu), lambda = g.dot(b.tau);
  // D(d_nubar u0) on the curve is D^2u0 nu - k0 lambda tau.
  const Vec2 dq = b.d2u0[I] * b.nu - b.k0 * lambda * b.tau;
  return g + n0 * p.drho * b.tau + p.rho * dq + p.DU[I];
}

namespace {

std::pair<double, double> sheet_slopes(const BoundaryNode& b, int I, const BoundaryPerturbation& p) {
  const auto fa = frame_action_at(b.tau, b.nu, b.k0, p.rho, p.drho);
  const Vec2 du = perturbed_gradient(b, I, p);
  return {fa.tau_hat.dot(du), fa.mu.dot(du)};
}

}  // namespace

double inverse_v(const BoundaryNode& b, int I, const BoundaryPerturbation& p) {
  const auto [dt, dm] = sheet_slopes(b, I, p);
  return 1.0 / std::sqrt(1.0 + dt * dt + dm * dm);
}

double inverse_v_linear(const BoundaryNode& b, const LinearizedBoundaryNode& l, int I,
                        const BoundaryPerturbation& p) {
  const double v0 = std::sqrt(1.0 + b.du0[I].squaredNorm());
  return -b.du0[I].dot(p.DU[I]) / (v0 * v0 * v0) + l.gamma0[I] * p.rho;
}

double bc1_nonlinear(const BoundaryNode& b, const BoundaryPerturbation& p) {
  double s = 0.0;
  for (int I = 0; I < 3; ++I) s += kSigmaPrime[I] * inverse_v(b, I, p);
  return s;
}

double bc2_nonlinear(const BoundaryNode& b, const BoundaryPerturbation& p) {
  double s = 0.0;
  for (int I = 0; I < 3; ++I) {
    const auto [dt, dm] = sheet_slopes(b, I, p);
    s += kSigmaPrime[I] * dm / std::sqrt(1.0 + dt * dt + dm * dm);
  }
  return s;
}

double lbc1(const LinearizedBoundaryNode& l, const BoundaryPerturbation& p) {
  double s = 0.0;
  for (int I = 0; I < 3; ++I) s += kSigmaPrime[I] * l.B1[I].dot(p.DU[I]);
  return s + l.gamma1 * (p.U[1] - p.U[0]);
}

double lbc2(const LinearizedBoundaryNode& l, const BoundaryPerturbation& p) {
  double s = 0.0;
  for (int I = 0; I < 3; ++I) s += kSigmaPrime[I] * l.B2[I].dot(p.DU[I]);
  return s + l.gamma2 * (p.U[1] - p.U[0]);
}

}  // namespace tj
