#include "solver_detail.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace tj {

double ManufacturedSolution::forcing(int sheet, double r, double t) const {
  const auto p = profile(sheet, r, t);
  const double wr = p[1], wrr = p[2];
  return p[3] - (wrr / (1.0 + wr * wr) + wr / r);
}

void SolverConfig::check() const {
  if (interface_radii.empty()) throw std::invalid_argument("no interface radii");
  if (mode == SolverMode::Axisymmetric && interface_radii.size() != 1) {
    throw std::invalid_argument("axisymmetric mode takes a single interface radius");
  }
  if (mode == SolverMode::Star2d && (n_theta() < 16 || n_theta() % 2 != 0)) {
    throw std::invalid_argument("star2d needs an even number (>= 16) of angular nodes");
  }
  if (n_inner < 8 || n_outer < 8) throw std::invalid_argument("grids need at least 8 radial nodes");
  if (!(dt > 0)) throw std::invalid_argument("time step must be positive");
  if (!(t_end >= 0)) throw std::invalid_argument("end time must be nonnegative");
  for (int j = 0; j < n_theta(); ++j) {
    const double r = interface_radii[j];
    if (!(r > 0 && r < outer_radius)) {
      throw GeometryError("interface radius outside (0, outer radius)", j);
    }
  }
  if (!manufactured) {
    for (const auto& s : sheets) {
      if (!s) throw std::invalid_argument("missing initial sheet");
    }
  }
}

namespace detail {

void check_regime(double R, double R_out, double margin) {
  if (!(R > margin * R_out && R < (1.0 - margin) * R_out)) {
    std::ostringstream os;
    os << "left existence regime: interface radius " << R << " outside (" << margin * R_out
       << ", " << (1.0 - margin) * R_out << ")";
    throw RegimeExit(os.str());
  }
}

int newton_solve(std::vector<double>& x, const ResidualFn& f, const SolverConfig& c, double dt,
                 Eigen::MatrixXd* reuse) {
  const int n = static_cast<int>(x.size());
  Eigen::VectorXd F = f(x);
  Eigen::MatrixXd J;
  Eigen::FullPivLU<Eigen::MatrixXd> lu;
  bool fresh = false;
  auto build = [&] {
    J.resize(F.size(), n);
    for (int k = 0; k < n; ++k) {
      auto xp = x;
      const double h = c.jacobian_step * std::max(1.0, std::abs(x[k]));
      xp[k] += h;
      J.col(k) = (f(xp) - F) / h;
    }
    lu.compute(J);
    fresh = true;
    if (reuse) *reuse = J;
  };
  if (reuse && reuse->rows() == F.size() && reuse->cols() == n) {
    J = *reuse;
    lu.compute(J);
  } else {
    build();
  }
  for (int it = 0; it <= c.newton_max_iterations; ++it) {
    const double norm = F.lpNorm<Eigen::Infinity>();
    if (norm < c.newton_tol) return it;
    if (it == c.newton_max_iterations) break;
    const Eigen::VectorXd dx = lu.solve(-F);
    // Backtrack until the residual decreases.
    double lambda = 1.0;
    std::vector<double> trial(n);
    Eigen::VectorXd Ft;
    bool improved = false;
    for (int b = 0; b < 8 && dx.allFinite(); ++b) {
      for (int k = 0; k < n; ++k) trial[k] = x[k] + lambda * dx[k];
      try {
        Ft = f(trial);
        if (Ft.allFinite() && Ft.lpNorm<Eigen::Infinity>() < norm) {
          improved = true;
          break;
        }
      } catch (const StepRejected&) {
      }
      lambda *= 0.5;
    }
    if (!improved) {
      if (!fresh) {
        build();
        continue;
      }
      if (norm < c.newton_stagnation) return it;
      break;
    }
    const double new_norm = Ft.lpNorm<Eigen::Infinity>();
    x = trial;
    F = Ft;
    if (new_norm > 0.5 * norm && new_norm >= c.newton_tol) {
      if (!fresh) {
        build();
      } else if (new_norm < c.newton_stagnation) {
        return it + 1;  // stagnated below the stagnation threshold
      }
    }
  }
  std::ostringstream os;
  os << "Newton did not converge (residual " << F.lpNorm<Eigen::Infinity>() << ")";
  throw StepRejected(os.str(), dt / 2);
}

}  // namespace detail

namespace {

std::shared_ptr<const InterfaceCurve> initial_curve(const SolverConfig& c) {
  if (c.mode == SolverMode::Star2d) {
    return std::make_shared<const InterfaceCurve>(InterfaceCurve::star(c.interface_radii));
  }
  return std::make_shared<const InterfaceCurve>(
      InterfaceCurve::star(std::vector<double>(32, c.interface_radii[0])));
}

}  // namespace

CompatibilityReport compatibility_report(const SolverConfig& c) {
  TripleConfig tc;
  tc.outer_radius = c.outer_radius;
  tc.interface = initial_curve(c);
  tc.sheets = c.sheets;
  CompatibilityReport r;
  r.order0 = validate_order0(tc);
  r.order1 = validate_order1(tc);
  r.order0_ok = r.order0.max_abs() <= c.order0_tol;
  r.order1_ok = r.order1.max_abs() <= c.order1_tol;
  return r;
}

std::string CompatibilityReport::to_text() const {
  return order0.to_text("order0") + order1.to_text("order1") + "order0 " +
         (order0_ok ? "PASS" : "FAIL") + "\norder1 " + (order1_ok ? "PASS" : "FAIL") + "\n";
}

namespace {

void compatibility_gate(const SolverConfig& c) {
  const auto r = compatibility_report(c);
  if (!r.order0_ok) {
    throw CompatibilityError("initial data violate the order-0 conditions", r.to_text());
  }
  if (!r.order1_ok) {
    throw CompatibilityError("initial data violate the order-1 condition", r.to_text());
  }
}

}  // namespace

SolverState init(const SolverConfig& c) {
  c.check();
  if (!c.manufactured) compatibility_gate(c);
  SolverState s;
  s.mode = c.mode;
  s.outer_radius = c.outer_radius;
  s.n_inner = c.n_inner;
  s.n_outer = c.n_outer;
  s.R = c.interface_radii;
  s.R_initial = s.R;
  s.R_dot.assign(s.R.size(), 0.0);
  if (c.mode == SolverMode::Axisymmetric) {
    const double R = s.R[0];
    for (int I = 0; I < 3; ++I) {
      const detail::Line L(I < 2, I < 2 ? c.n_inner : c.n_outer);
      s.u[I].resize(L.n);
      for (int i = 0; i < L.n; ++i) {
        const double r = L.r(i, R, c.outer_radius);
        s.u[I][i] = c.manufactured ? c.manufactured->profile(I, r, 0.0)[0]
                                   : c.sheets[I]->jet(Vec2(r, 0.0)).value;
      }
    }
  } else {
    for (int I = 0; I < 3; ++I) {
      const PolarGrid g(I < 2 ? DomainTag::Inner : DomainTag::Outer, I < 2 ? c.n_inner : c.n_outer,
                        s.R, c.outer_radius);
      s.u[I].resize(g.nr() * g.nt());
      for (int i = 0; i < g.nr(); ++i) {
        for (int j = 0; j < g.nt(); ++j) {
          const Vec2 x = g.position(i, j);
          s.u[I][g.index(i, j)] = c.manufactured ? c.manufactured->profile(I, x.norm(), 0.0)[0]
                                                 : c.sheets[I]->jet(x).value;
        }
      }
    }
  }
  return s;
}

Diagnostics diagnostics(const SolverState& s) {
  return s.mode == SolverMode::Axisymmetric ? detail::diagnostics_axisymmetric(s)
                                            : detail::diagnostics_star(s);
}

namespace {

double cap_for_speed(const SolverState& s, double speed) {
  if (!(speed > 0)) return std::numeric_limits<double>::infinity();
  double r_min = s.R[0], gap_min = s.outer_radius - s.R[0];
  for (double R : s.R) {
    r_min = std::min(r_min, R);
    gap_min = std::min(gap_min, s.outer_radius - R);
  }
  const double h_in = 1.0 / (s.n_inner - 0.5), h_out = 1.0 / (s.n_outer - 1);
  return 0.5 * std::min(h_in * r_min, h_out * gap_min) / speed;
}

double observed_speed(const SolverState& s) {
  double speed = 0.0;
  if (s.steps > 0) {
    for (double v : s.R_dot) speed = std::max(speed, std::abs(v));
  } else {
    speed = diagnostics(s).max_normal_velocity;
  }
  return speed;
}

double interface_speed(const SolverState& s, const SolverConfig& c) {
  if (c.manufactured) {
    const double e = 1e-6;
    return std::abs(c.manufactured->radius(s.t + e) - c.manufactured->radius(s.t)) / e;
  }
  return observed_speed(s);
}

}  // namespace

double advective_cap(const SolverState& s) { return cap_for_speed(s, observed_speed(s)); }

std::pair<SolverState, StepReport> step(const SolverState& s, const SolverConfig& c, double dt) {
  if (!(dt > 0)) throw std::invalid_argument("time step must be positive");
  const double cap = cap_for_speed(s, interface_speed(s, c));
  if (dt > cap * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "time step " << dt << " above the advective cap " << cap;
    throw StepRejected(os.str(), cap);
  }
  return s.mode == SolverMode::Axisymmetric ? detail::step_axisymmetric(s, c, dt)
                                            : detail::step_star(s, c, dt);
}

RunResult run(const SolverConfig& c, const std::function<void(const SolverState&)>& on_snapshot) {
  RunResult out;
  SolverState s = init(c);
  auto snapshot = [&](const SolverState& st) {
    out.snapshots.push_back(st);
    if (on_snapshot) on_snapshot(st);
  };
  snapshot(s);
  const double e0 = diagnostics(s).energy;
  double e_prev = e0;
  const double t_eps = 1e-12 * std::max(1.0, c.t_end);
  while (s.t < c.t_end - t_eps) {
    double dt = std::min(c.dt, c.t_end - s.t);
    const double cap = cap_for_speed(s, interface_speed(s, c));
    if (dt > cap) dt = 0.9 * cap;
    int halvings = 0;
    for (;;) {
      try {
        auto [next, rep] = step(s, c, dt);
        if (rep.energy > e_prev + 1e-8 * e0) ++out.energy_increases;
        e_prev = rep.energy;
        s = std::move(next);
        out.reports.push_back(rep);
        break;
      } catch (const StepRejected& e) {
        if (++halvings > c.max_halvings) throw;
        dt = std::min(e.suggested_dt(), dt / 2);
      } catch (const RegimeExit& e) {
        out.regime_exit = true;
        out.message = e.what();
        break;
      }
    }
    if (out.regime_exit) break;
    if (c.snapshot_every > 0 && s.steps % c.snapshot_every == 0) snapshot(s);
  }
  if (out.snapshots.back().steps != s.steps) snapshot(s);
  return out;
}

std::array<std::shared_ptr<const GraphField>, 3> lens_sheets(double R0, double B) {
  const double A = kSqrt3 / (2.0 * R0);
  auto profile = [A, B, R0](double sign) {
    return [A, B, R0, sign](double r) {
      const double q = r * r - R0 * R0;
      return std::array<double, 3>{sign * (A * q + B * q * q), sign * (2 * A * r + 4 * B * q * r),
                                   sign * (2 * A + 4 * B * q + 8 * B * r * r)};
    };
  };
  auto w1 = std::make_shared<FunctionField>(FunctionField::radial(DomainTag::Inner, profile(1.0)));
  auto w2 = std::make_shared<FunctionField>(FunctionField::radial(DomainTag::Inner, profile(-1.0)));
  auto w3 = std::make_shared<FunctionField>(DomainTag::Outer, [](const Vec2&) { return FieldJet{}; });
  return {w1, w2, w3};
}

std::array<std::shared_ptr<const GraphField>, 3> lemma_sheets(double R0, double outer_radius,
                                                              double a3, double H1) {
  const auto sl = lemma12_solve(1.0, a3);
  const std::array<double, 3> a{sl.a1, sl.a2, a3};
  // The interface normal points inward, so w_r(R0) = -a.
  std::array<double, 3> c1{}, c2{};
  for (int I = 0; I < 3; ++I) c1[I] = -a[I] / (2.0 * R0);
  c2[2] = -c1[2] / (2.0 * (outer_radius * outer_radius - R0 * R0));
  // H at R0 is affine in c2 with slope 8 R0^2 / v^3.
  auto H = [&](int I, double c) {
    const double wr = 2 * R0 * c1[I], wrr = 2 * c1[I] + 8 * c * R0 * R0;
    const double v = std::sqrt(1 + wr * wr);
    return (wrr / (v * v) + wr / R0) / v;
  };
  auto solve = [&](int I, double target) {
    const double v = std::sqrt(1 + 4 * R0 * R0 * c1[I] * c1[I]);
    return (target - H(I, 0.0)) * v * v * v / (8 * R0 * R0);
  };
  c2[0] = solve(0, H1);
  c2[1] = solve(1, H(2, c2[2]) - H1);
  std::array<std::shared_ptr<const GraphField>, 3> out;
  for (int I = 0; I < 3; ++I) {
    const double b = c1[I], c = c2[I];
    out[I] = std::make_shared<FunctionField>(FunctionField::radial(
        I < 2 ? DomainTag::Inner : DomainTag::Outer, [b, c, R0](double r) {
          const double q = r * r - R0 * R0;
          return std::array<double, 3>{b * q + c * q * q, 2 * r * (b + 2 * c * q),
                                       2 * b + 4 * c * q + 8 * c * r * r};
        }));
  }
  return out;
}

namespace {

class StandardManufactured final : public ManufacturedSolution {
 public:
  StandardManufactured(double R0, double outer) : R0_(R0), k_(kPi / outer) {}
  double radius(double t) const override { return R0_ - 0.3 * t; }
  std::array<double, 4> profile(int sheet, double r, double t) const override {
    const double c = 1.0 + 0.5 * t;
    double p, pr, prr;
    if (sheet == 0) {
      p = 0.5 * r * r + 0.1 * r * r * r * r;
      pr = r + 0.4 * r * r * r;
      prr = 1.0 + 1.2 * r * r;
    } else if (sheet == 1) {
      p = std::cos(r);
      pr = -std::sin(r);
      prr = -std::cos(r);
    } else {
      p = std::cos(k_ * r);
      pr = -k_ * std::sin(k_ * r);
      prr = -k_ * k_ * std::cos(k_ * r);
    }
    return {c * p, c * pr, c * prr, 0.5 * p};
  }

 private:
  double R0_, k_;
};

}  // namespace

std::shared_ptr<const ManufacturedSolution> standard_manufactured(double R0, double outer_radius) {
  return std::make_shared<StandardManufactured>(R0, outer_radius);
}

std::vector<Vec2> node_positions(const SolverState& s, int sheet) {
  std::vector<Vec2> out;
  if (s.mode == SolverMode::Axisymmetric) {
    const detail::Line L(sheet < 2, sheet < 2 ? s.n_inner : s.n_outer);
    for (int i = 0; i < L.n; ++i) out.emplace_back(L.r(i, s.R[0], s.outer_radius), 0.0);
    return out;
  }
  const PolarGrid g(sheet < 2 ? DomainTag::Inner : DomainTag::Outer,
                    sheet < 2 ? s.n_inner : s.n_outer, s.R, s.outer_radius);
  out.resize(g.nr() * g.nt());
  for (int i = 0; i < g.nr(); ++i)
    for (int j = 0; j < g.nt(); ++j) out[g.index(i, j)] = g.position(i, j);
  return out;
}

double manufactured_error(const SolverState& s, const ManufacturedSolution& m) {
  double err = 0.0;
  for (int I = 0; I < 3; ++I) {
    const auto x = node_positions(s, I);
    for (std::size_t k = 0; k < x.size(); ++k) {
      err = std::max(err, std::abs(s.u[I][k] - m.profile(I, x[k].norm(), s.t)[0]));
    }
  }
  return err;
}

}  // namespace tj
