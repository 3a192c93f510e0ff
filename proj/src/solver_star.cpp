#include "solver_detail.hpp"

#include "tj/geometry.hpp"

#include <Eigen/Sparse>

#include <cmath>
#include <sstream>

namespace tj::detail {

namespace {

using Stencil = std::vector<std::pair<int, double>>;

struct Grids {
  PolarGrid inner, outer;
  const PolarGrid& operator[](int sheet) const { return sheet < 2 ? inner : outer; }
};

Grids make_grids(const SolverState& s, const std::vector<double>& R) {
  return {PolarGrid(DomainTag::Inner, s.n_inner, R, s.outer_radius),
          PolarGrid(DomainTag::Outer, s.n_outer, R, s.outer_radius)};
}

// Node index with the center mirror (i < 0) and the Neumann ghost (i >= n).
int ghost_index(const PolarGrid& g, int i, int j) {
  const int n = g.nr();
  if (i < 0) return g.index(-1 - i, j + g.nt() / 2);
  if (i >= n) return g.index(2 * (n - 1) - i, j);
  return g.index(i, j);
}

// Weights of f_y, f_t, f_yy, f_yt, f_tt at a node off the interface row.
std::array<Stencil, 5> interior_stencil(const PolarGrid& g, int i, int j) {
  const double hy = g.hy(), ht = g.ht();
  auto at = [&](int di, int dj) { return ghost_index(g, i + di, j + dj); };
  std::array<Stencil, 5> s;
  s[0] = {{at(1, 0), 0.5 / hy}, {at(-1, 0), -0.5 / hy}};
  s[1] = {{at(0, 1), 0.5 / ht}, {at(0, -1), -0.5 / ht}};
  s[2] = {{at(1, 0), 1.0 / (hy * hy)}, {at(0, 0), -2.0 / (hy * hy)}, {at(-1, 0), 1.0 / (hy * hy)}};
  const double c = 0.25 / (hy * ht);
  s[3] = {{at(1, 1), c}, {at(1, -1), -c}, {at(-1, 1), -c}, {at(-1, -1), c}};
  s[4] = {{at(0, 1), 1.0 / (ht * ht)}, {at(0, 0), -2.0 / (ht * ht)}, {at(0, -1), 1.0 / (ht * ht)}};
  return s;
}

std::array<double, 6> apply(const std::array<Stencil, 5>& s, const std::vector<double>& f,
                            double value) {
  std::array<double, 6> d{value, 0, 0, 0, 0, 0};
  for (int k = 0; k < 5; ++k)
    for (const auto& [idx, w] : s[k]) d[k + 1] += w * f[idx];
  return d;
}

// Derivatives on the interface row: one-sided in y, central in theta. The
// fine variant uses the higher-order stencils for the first derivatives.
std::array<double, 6> interface_derivs(const PolarGrid& g, const std::vector<double>& f, int j,
                                       bool fine) {
  const bool inner = g.tag() == DomainTag::Inner;
  const int n = g.nr();
  const double sign = inner ? -1.0 : 1.0;
  const double hy = g.hy(), ht = g.ht();
  auto row = [&](int k) { return inner ? n - 1 - k : k; };
  auto val = [&](int k, int dj) { return f[g.index(row(k), j + dj)]; };
  auto dtheta = [&](int k) { return (val(k, 1) - val(k, -1)) / (2.0 * ht); };
  std::array<double, 6> d{};
  d[0] = val(0, 0);
  if (fine) {
    std::array<double, 5> col{};
    for (int k = 0; k < 5; ++k) col[k] = val(k, 0);
    d[1] = sign * away_d1_fine(col, hy);
    d[2] = (-val(0, 2) + 8.0 * val(0, 1) - 8.0 * val(0, -1) + val(0, -2)) / (12.0 * ht);
  } else {
    d[1] = sign * away_d1(val(0, 0), val(1, 0), val(2, 0), hy);
    d[2] = dtheta(0);
  }
  d[3] = away_d2(val(0, 0), val(1, 0), val(2, 0), val(3, 0), hy);
  d[4] = sign * away_d1(dtheta(0), dtheta(1), dtheta(2), hy);
  d[5] = (val(0, 1) - 2.0 * val(0, 0) + val(0, -1)) / (ht * ht);
  return d;
}

MapJet node_map(const PolarGrid& g, int i, int j) { return g.map(g.y(i), g.theta(j)); }

FieldJet node_jet(const PolarGrid& g, const std::vector<double>& f, int i, int j) {
  const auto mj = node_map(g, i, j);
  if (i == g.interface_row()) return cartesian_jet(mj, interface_derivs(g, f, j, false));
  return cartesian_jet(mj, apply(interior_stencil(g, i, j), f, f[g.index(i, j)]));
}

// Junction quantities of the three sheets at interface node j.
struct NodeJunction {
  Vec2 tau, nu;
  std::array<FieldJet, 3> jet;
  std::array<double, 2> bc{};
};

NodeJunction junction(const Grids& g, const std::array<std::vector<double>, 3>& u, int j,
                      bool fine) {
  NodeJunction nj;
  for (int I = 0; I < 3; ++I) {
    const auto& grid = g[I];
    const auto mj = node_map(grid, grid.interface_row(), j);
    nj.jet[I] = cartesian_jet(mj, interface_derivs(grid, u[I], j, fine));
    if (I == 0) {
      nj.tau = mj.jac.col(1).normalized();
      nj.nu = perp(nj.tau);
    }
  }
  constexpr std::array<double, 3> sg{1.0, 1.0, -1.0};
  for (int I = 0; I < 3; ++I) {
    const Vec2& p = nj.jet[I].grad;
    const double inv_v = 1.0 / std::sqrt(1.0 + p.squaredNorm());
    nj.bc[0] += sg[I] * inv_v;
    nj.bc[1] += sg[I] * p.dot(nj.nu) * inv_v;
  }
  return nj;
}

double quadrature_weight(const PolarGrid& g, int i) {
  const bool inner = g.tag() == DomainTag::Inner;
  const bool half = inner ? i == g.nr() - 1 : (i == 0 || i == g.nr() - 1);
  return (half ? 0.5 : 1.0) * g.hy() * g.ht();
}

}  // namespace

Diagnostics diagnostics_star(const SolverState& s) {
  const auto g = make_grids(s, s.R);
  const int m = g.inner.nt();
  Diagnostics d;
  for (int I = 0; I < 3; ++I) {
    const auto& grid = g[I];
    for (int i = 0; i < grid.nr(); ++i) {
      for (int j = 0; j < m; ++j) {
        const auto jet = node_jet(grid, s.u[I], i, j);
        const double area = std::abs(node_map(grid, i, j).jac.determinant());
        d.energy += quadrature_weight(grid, i) * std::sqrt(1.0 + jet.grad.squaredNorm()) * area;
      }
    }
  }
  d.length = InterfaceCurve::star(s.R).length();
  for (int j = 0; j < m; ++j) {
    const auto nj = junction(g, s.u, j, false);
    const auto fine = junction(g, s.u, j, true);
    InterfaceRecord rec;
    rec.theta = g.inner.theta(j);
    rec.R = s.R[j];
    std::array<double, 3> a{};
    double lambda = 0.0;
    for (int I = 0; I < 3; ++I) {
      rec.H[I] = mean_curvature(nj.jet[I]);
      a[I] = nj.jet[I].grad.dot(nj.nu);
      lambda += nj.jet[I].grad.dot(nj.tau) / 3.0;
    }
    rec.bc1 = nj.bc[0];
    rec.bc2 = nj.bc[1];
    rec.normal_velocity = interface_normal_velocity(JunctionPointData::from_slopes(lambda, a, rec.H));
    const double w1 = s.u[0][g.inner.index(g.inner.interface_row(), j)];
    const double w3 = s.u[2][g.outer.index(0, j)];
    d.max_match = std::max(d.max_match, std::abs(w1 - w3));
    d.max_match = std::max(d.max_match, std::abs(w1 - s.u[1][g.inner.index(g.inner.interface_row(), j)]));
    d.max_angle = std::max({d.max_angle, std::abs(nj.bc[0]), std::abs(nj.bc[1])});
    d.max_angle_fine = std::max({d.max_angle_fine, std::abs(fine.bc[0]), std::abs(fine.bc[1])});
    d.max_compat = std::max(d.max_compat, std::abs(rec.H[0] + rec.H[1] - rec.H[2]));
    d.max_normal_velocity = std::max(d.max_normal_velocity, std::abs(rec.normal_velocity));
    d.interface.push_back(rec);
  }
  return d;
}

namespace {

// Old-state data frozen over one step.
struct Frozen {
  std::vector<Vec2> position;
  std::vector<Vec2> grad;
  std::vector<Mat2> coeff;  // inverse graph metric I - p p^T / v^2
};

Frozen freeze(const PolarGrid& g, const std::vector<double>& f) {
  Frozen fr;
  const int count = g.nr() * g.nt();
  fr.position.resize(count);
  fr.grad.resize(count);
  fr.coeff.resize(count);
  for (int i = 0; i < g.nr(); ++i) {
    for (int j = 0; j < g.nt(); ++j) {
      const int k = g.index(i, j);
      const Vec2 p = node_jet(g, f, i, j).grad;
      fr.position[k] = g.position(i, j);
      fr.grad[k] = p;
      fr.coeff[k] = Mat2::Identity() - p * p.transpose() / (1.0 + p.squaredNorm());
    }
  }
  return fr;
}

class SheetSolver {
 public:
  std::vector<double> solve(const PolarGrid& g, const Frozen& fr, const std::vector<double>& f_old,
                            const std::vector<double>& w_gamma, double dt,
                            const std::function<double(const Vec2&)>& forcing) {
    const int n = g.nr(), m = g.nt(), count = n * m;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(count * 16);
    Eigen::VectorXd rhs(count);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) {
        const int k = g.index(i, j);
        trips.emplace_back(k, k, 1.0);
        if (i == g.interface_row()) {
          rhs[k] = w_gamma[j];
          continue;
        }
        const auto mj = node_map(g, i, j);
        const auto st = interior_stencil(g, i, j);
        for (int d = 0; d < 5; ++d) {
          std::array<double, 6> e{};
          e[d + 1] = 1.0;
          const double coef = fr.coeff[k].cwiseProduct(cartesian_jet(mj, e).hess).sum();
          for (const auto& [idx, w] : st[d]) trips.emplace_back(k, idx, -dt * coef * w);
        }
        const Vec2 mesh_velocity = (mj.x - fr.position[k]) / dt;
        rhs[k] = f_old[k] + dt * fr.grad[k].dot(mesh_velocity);
        if (forcing) rhs[k] += dt * forcing(mj.x);
      }
    }
    Eigen::SparseMatrix<double> A(count, count);
    A.setFromTriplets(trips.begin(), trips.end());
    if (!analyzed_) {
      lu_.analyzePattern(A);
      analyzed_ = true;
    }
    lu_.factorize(A);
    if (lu_.info() != Eigen::Success) throw StepRejected("singular implicit system", dt / 2);
    const Eigen::VectorXd x = lu_.solve(rhs);
    return std::vector<double>(x.data(), x.data() + count);
  }

 private:
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  bool analyzed_ = false;
};

// Normal-graph regime of the reference curve: the new interface must lie in
// its tube with 1 - k0 rho > 0.
void check_normal_graph(const SolverState& s, const std::vector<double>& R) {
  const auto curve = InterfaceCurve::star(s.R_initial);
  const int m = static_cast<int>(R.size());
  for (int j = 0; j < m; ++j) {
    const double th = node_parameter(j, m);
    const auto cp = curve.closest_point(R[j] * Vec2(std::cos(th), std::sin(th)));
    const double k0 = curve.frame_at(cp.parameter).curvature;
    if (!cp.in_tube || 1.0 - k0 * cp.signed_distance <= 1e-12) {
      std::ostringstream os;
      os << "left existence regime: interface node " << j << " is no longer a normal graph";
      throw RegimeExit(os.str());
    }
  }
}

}  // namespace

std::pair<SolverState, StepReport> step_star(const SolverState& s, const SolverConfig& c,
                                             double dt) {
  const int m = static_cast<int>(s.R.size());
  const double t1 = s.t + dt;
  const auto g0 = make_grids(s, s.R);
  std::array<Frozen, 3> frozen;
  for (int I = 0; I < 3; ++I) frozen[I] = freeze(g0[I], s.u[I]);
  std::array<SheetSolver, 3> solvers;

  auto advance = [&](const Grids& g, const std::array<std::vector<double>, 3>& gamma) {
    std::array<std::vector<double>, 3> u;
    for (int I = 0; I < 3; ++I) {
      std::function<double(const Vec2&)> forcing;
      if (c.manufactured) {
        forcing = [&, I](const Vec2& x) { return c.manufactured->forcing(I, x.norm(), t1); };
      }
      u[I] = solvers[I].solve(g[I], frozen[I], s.u[I], gamma[I], dt, forcing);
    }
    return u;
  };
  auto grids_for = [&](const std::vector<double>& R) {
    try {
      return make_grids(s, R);
    } catch (const GeometryError& e) {
      throw StepRejected(e.what(), dt / 2);
    }
  };

  SolverState next = s;
  next.t = t1;
  next.steps = s.steps + 1;
  int iterations = 0;
  if (c.manufactured) {
    const double R1 = c.manufactured->radius(t1);
    next.R.assign(m, R1);
    std::array<std::vector<double>, 3> gamma;
    for (int I = 0; I < 3; ++I) gamma[I].assign(m, c.manufactured->profile(I, R1, t1)[0]);
    next.u = advance(grids_for(next.R), gamma);
  } else {
    std::vector<double> x(2 * m);
    const auto d0 = s.steps > 0 ? Diagnostics{} : diagnostics_star(s);
    for (int j = 0; j < m; ++j) {
      x[j] = s.u[0][g0.inner.index(g0.inner.interface_row(), j)];
      double speed = 0.0;
      if (s.steps > 0) {
        speed = s.R_dot[j];
      } else {
        const auto nj = junction(g0, s.u, j, false);
        const double th = g0.inner.theta(j);
        speed = d0.interface[j].normal_velocity / Vec2(std::cos(th), std::sin(th)).dot(nj.nu);
      }
      x[m + j] = s.R[j] + dt * speed;
    }
    auto split = [m](const std::vector<double>& z) {
      std::array<std::vector<double>, 3> gamma;
      gamma.fill(std::vector<double>(z.begin(), z.begin() + m));
      return std::make_pair(gamma, std::vector<double>(z.begin() + m, z.end()));
    };
    auto residual = [&](const std::vector<double>& z) {
      const auto [gamma, R] = split(z);
      for (double r : R) {
        if (!(r > 0.0 && r < s.outer_radius)) throw StepRejected("interface iterate left the domain", dt / 2);
      }
      const auto g = grids_for(R);
      const auto u = advance(g, gamma);
      Eigen::VectorXd F(2 * m);
      for (int j = 0; j < m; ++j) {
        const auto nj = junction(g, u, j, false);
        F[j] = nj.bc[0];
        F[m + j] = nj.bc[1];
      }
      return F;
    };
    Eigen::MatrixXd J;
    if (s.boundary_jacobian) J = *s.boundary_jacobian;
    iterations = newton_solve(x, residual, c, dt, &J);
    next.boundary_jacobian = std::make_shared<const Eigen::MatrixXd>(J);
    const auto [gamma, R] = split(x);
    for (double r : R) check_regime(r, s.outer_radius, c.regime_margin);
    check_normal_graph(s, R);
    next.R = R;
    next.u = advance(grids_for(R), gamma);
  }
  next.R_dot.resize(m);
  for (int j = 0; j < m; ++j) next.R_dot[j] = (next.R[j] - s.R[j]) / dt;

  const auto d = diagnostics_star(next);
  StepReport rep;
  rep.t = t1;
  rep.dt = dt;
  for (double v : next.R_dot) rep.max_speed = std::max(rep.max_speed, std::abs(v));
  rep.max_angle_residual = d.max_angle;
  rep.max_angle_fine = d.max_angle_fine;
  rep.newton_iterations = iterations;
  rep.energy = d.energy;
  rep.length = d.length;
  return {next, rep};
}

}  // namespace tj::detail
