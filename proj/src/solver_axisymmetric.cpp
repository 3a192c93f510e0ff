#include "solver_detail.hpp"

#include <cmath>

namespace tj::detail {

double line_dy(const Line& L, const std::vector<double>& f, int i) {
  if (i == L.interface_node()) {
    const double d = away_d1(f[L.from_interface(0)], f[L.from_interface(1)],
                             f[L.from_interface(2)], L.h);
    return L.away_sign() * d;
  }
  return (line_value(L, f, i + 1) - line_value(L, f, i - 1)) / (2.0 * L.h);
}

InterfaceSlopes interface_slopes(const Line& L, const std::vector<double>& f, double R,
                                 double R_out) {
  std::array<double, 5> g{};
  for (int k = 0; k < 5; ++k) g[k] = f[L.from_interface(k)];
  const double ry = L.ry(R, R_out);
  InterfaceSlopes s;
  s.wr = L.away_sign() * away_d1(g[0], g[1], g[2], L.h) / ry;
  s.wr_fine = L.away_sign() * away_d1_fine(g, L.h) / ry;
  s.wrr = away_d2(g[0], g[1], g[2], g[3], L.h) / (ry * ry);
  return s;
}

void thomas(std::vector<double> a, std::vector<double> b, std::vector<double> c,
            std::vector<double>& d) {
  const std::size_t n = d.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double m = a[i] / b[i - 1];
    b[i] -= m * c[i - 1];
    d[i] -= m * d[i - 1];
  }
  d[n - 1] /= b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) d[i] = (d[i] - c[i] * d[i + 1]) / b[i];
}

std::vector<double> advance_line(const Line& L, const std::vector<double>& f_old, double R_old,
                                 double R_new, double R_out, double dt, double w_gamma,
                                 const std::vector<double>* forcing) {
  const int n = L.n;
  const int skip = L.interface_node();
  const double ry_old = L.ry(R_old, R_out), ry = L.ry(R_new, R_out);
  const double h2 = L.h * L.h;

  // Unknowns are the nodes other than the interface node, in natural order.
  const int m = n - 1;
  std::vector<double> lo(m), di(m), up(m), rhs(m);
  for (int k = 0; k < m; ++k) {
    const int i = L.inner ? k : k + 1;
    const double wr_old = line_dy(L, f_old, i) / ry_old;
    const double a = 1.0 / (1.0 + wr_old * wr_old);
    const double r = L.r(i, R_new, R_out);
    const double A = a / (ry * ry), B = 1.0 / (ry * r);
    double l = -dt * (A / h2 - B / (2.0 * L.h));
    double u = -dt * (A / h2 + B / (2.0 * L.h));
    di[k] = 1.0 + 2.0 * dt * A / h2;
    const double mesh_velocity = (r - L.r(i, R_old, R_out)) / dt;
    rhs[k] = f_old[i] + dt * wr_old * mesh_velocity;
    if (forcing) rhs[k] += dt * (*forcing)[i];
    if (i == 0) {  // mirror across the center
      di[k] += l;
      l = 0.0;
    }
    if (i == n - 1 && !L.inner) {  // Neumann ghost
      l += u;
      u = 0.0;
    }
    if (i - 1 == skip) {
      rhs[k] -= l * w_gamma;
      l = 0.0;
    }
    if (i + 1 == skip) {
      rhs[k] -= u * w_gamma;
      u = 0.0;
    }
    lo[k] = l;
    up[k] = u;
  }
  thomas(lo, di, up, rhs);
  std::vector<double> f(n);
  for (int k = 0; k < m; ++k) f[L.inner ? k : k + 1] = rhs[k];
  f[skip] = w_gamma;
  return f;
}

double line_area(const Line& L, const std::vector<double>& f, double R, double R_out) {
  const double ry = L.ry(R, R_out);
  double sum = 0.0;
  for (int i = 0; i < L.n; ++i) {
    const double wr = line_dy(L, f, i) / ry;
    const double g = std::sqrt(1.0 + wr * wr) * L.r(i, R, R_out) * ry;
    double weight = L.h;
    if (L.inner && i == L.n - 1) weight = 0.5 * L.h;
    if (!L.inner && (i == 0 || i == L.n - 1)) weight = 0.5 * L.h;
    sum += weight * g;
  }
  return 2.0 * kPi * sum;
}

std::array<double, 2> radial_angle_residuals(const std::array<double, 3>& wr) {
  std::array<double, 3> inv_v{};
  for (int I = 0; I < 3; ++I) inv_v[I] = 1.0 / std::sqrt(1.0 + wr[I] * wr[I]);
  // d_nu w = -w_r for the inward normal.
  return {inv_v[0] + inv_v[1] - inv_v[2],
          -(wr[0] * inv_v[0] + wr[1] * inv_v[1] - wr[2] * inv_v[2])};
}

namespace {

std::array<Line, 3> lines(const SolverState& s) {
  return {Line(true, s.n_inner), Line(true, s.n_inner), Line(false, s.n_outer)};
}

}  // namespace

Diagnostics diagnostics_axisymmetric(const SolverState& s) {
  const auto L = lines(s);
  const double R = s.R[0], Ro = s.outer_radius;
  Diagnostics d;
  std::array<double, 3> wr{}, wr_fine{};
  InterfaceRecord rec;
  rec.R = R;
  std::array<double, 3> a{};
  for (int I = 0; I < 3; ++I) {
    const auto sl = interface_slopes(L[I], s.u[I], R, Ro);
    wr[I] = sl.wr;
    wr_fine[I] = sl.wr_fine;
    const double v = std::sqrt(1.0 + sl.wr * sl.wr);
    rec.H[I] = (sl.wrr / (v * v) + sl.wr / R) / v;
    a[I] = -sl.wr;
    d.energy += line_area(L[I], s.u[I], R, Ro);
  }
  const auto bc = radial_angle_residuals(wr);
  const auto fine = radial_angle_residuals(wr_fine);
  rec.bc1 = bc[0];
  rec.bc2 = bc[1];
  rec.normal_velocity = interface_normal_velocity(JunctionPointData::from_slopes(0.0, a, rec.H));
  d.length = 2.0 * kPi * R;
  const double w1 = s.u[0][L[0].interface_node()], w2 = s.u[1][L[1].interface_node()],
               w3 = s.u[2][L[2].interface_node()];
  d.max_match = std::max(std::abs(w1 - w2), std::abs(w2 - w3));
  d.max_angle = std::max(std::abs(bc[0]), std::abs(bc[1]));
  d.max_angle_fine = std::max(std::abs(fine[0]), std::abs(fine[1]));
  d.max_compat = std::abs(rec.H[0] + rec.H[1] - rec.H[2]);
  d.max_normal_velocity = std::abs(rec.normal_velocity);
  d.interface.push_back(rec);
  return d;
}

std::pair<SolverState, StepReport> step_axisymmetric(const SolverState& s, const SolverConfig& c,
                                                     double dt) {
  const auto L = lines(s);
  const double Ro = s.outer_radius, R0 = s.R[0];
  const double t1 = s.t + dt;

  auto advance_all = [&](double w_gamma, double R1, const std::array<double, 3>* gammas) {
    std::array<std::vector<double>, 3> out;
    for (int I = 0; I < 3; ++I) {
      std::vector<double> forcing;
      if (c.manufactured) {
        forcing.resize(L[I].n);
        for (int i = 0; i < L[I].n; ++i) {
          forcing[i] = c.manufactured->forcing(I, L[I].r(i, R1, Ro), t1);
        }
      }
      const double wg = gammas ? (*gammas)[I] : w_gamma;
      out[I] = advance_line(L[I], s.u[I], R0, R1, Ro, dt, wg, c.manufactured ? &forcing : nullptr);
    }
    return out;
  };

  SolverState next = s;
  next.t = t1;
  next.steps = s.steps + 1;
  int iterations = 0;
  if (c.manufactured) {
    const double R1 = c.manufactured->radius(t1);
    std::array<double, 3> g{};
    for (int I = 0; I < 3; ++I) g[I] = c.manufactured->profile(I, R1, t1)[0];
    next.u = advance_all(0.0, R1, &g);
    next.R = {R1};
  } else {
    const double speed = s.steps > 0 ? s.R_dot[0]
                                     : -diagnostics_axisymmetric(s).interface[0].normal_velocity;
    std::vector<double> x{s.u[0][L[0].interface_node()], R0 + dt * speed};
    auto residual = [&](const std::vector<double>& z) {
      if (!(z[1] > 0.0 && z[1] < Ro)) throw StepRejected("interface iterate left the domain", dt / 2);
      const auto u = advance_all(z[0], z[1], nullptr);
      std::array<double, 3> wr{};
      for (int I = 0; I < 3; ++I) wr[I] = interface_slopes(L[I], u[I], z[1], Ro).wr;
      const auto bc = radial_angle_residuals(wr);
      return Eigen::VectorXd(Eigen::Vector2d(bc[0], bc[1]));
    };
    iterations = newton_solve(x, residual, c, dt);
    check_regime(x[1], Ro, c.regime_margin);
    next.u = advance_all(x[0], x[1], nullptr);
    next.R = {x[1]};
  }
  next.R_dot = {(next.R[0] - R0) / dt};

  const auto d = diagnostics_axisymmetric(next);
  StepReport rep;
  rep.t = t1;
  rep.dt = dt;
  rep.max_speed = std::abs(next.R_dot[0]);
  rep.max_angle_residual = d.max_angle;
  rep.max_angle_fine = d.max_angle_fine;
  rep.newton_iterations = iterations;
  rep.energy = d.energy;
  rep.length = d.length;
  return {next, rep};
}

}  // namespace tj::detail
