#include "tj/solver.hpp"

#include <cmath>
#include <sstream>
#include <string>

using namespace tj;

namespace {

SolverConfig lens(int n, double dt, double t_end) {
  SolverConfig c;
  c.sheets = lens_sheets(1.0);
  c.n_inner = n;
  c.n_outer = n;
  c.dt = dt;
  c.t_end = t_end;
  return c;
}

double max_fine_angle(const RunResult& r) {
  double m = 0.0;
  for (const auto& rep : r.reports) m = std::max(m, rep.max_angle_fine);
  return m;
}

SolverConfig manufactured(int n, double dt) {
  SolverConfig c;
  c.manufactured = standard_manufactured(1.0, 2.0);
  c.n_inner = n;
  c.n_outer = n;
  c.dt = dt;
  c.t_end = 0.2;
  return c;
}

double max_diff(const SolverState& a, const SolverState& b) {
  double d = 0.0;
  for (int I = 0; I < 3; ++I) {
    for (std::size_t k = 0; k < a.u[I].size(); ++k) d = std::max(d, std::abs(a.u[I][k] - b.u[I][k]));
  }
  return d;
}

}  // namespace

bool solver_criterion(std::string& detail) {
  std::ostringstream os;

  // (a) angle residuals under h -> h/2 with dt = h^2.
  const double e64 = max_fine_angle(run(lens(64, 1.0 / (64 * 64), 0.1)));
  const double e128 = max_fine_angle(run(lens(128, 1.0 / (128 * 128), 0.1)));
  const bool a = e64 / e128 >= 3.5;
  os << "angle_ratio=" << e64 / e128 << ' ';

  // (b) energy over 1000 steps.
  const auto energy = run(lens(32, 1e-4, 0.1));
  const bool b = energy.reports.size() == 1000 && energy.energy_increases == 0;
  os << "energy_increases=" << energy.energy_increases << '/' << energy.reports.size() << ' ';

  // (c) star2d against the axisymmetric run.
  auto c16 = lens(16, 1.0 / 256, 0.05);
  const auto axi = run(c16);
  c16.mode = SolverMode::Star2d;
  c16.interface_radii.assign(16, 1.0);
  const auto star = run(c16);
  double star_gap = star.snapshots.size() == axi.snapshots.size() ? 0.0 : INFINITY;
  for (std::size_t k = 0; k < std::min(star.snapshots.size(), axi.snapshots.size()); ++k) {
    for (double r : star.snapshots[k].R) {
      star_gap = std::max(star_gap, std::abs(r - axi.snapshots[k].R[0]) / axi.snapshots[k].R[0]);
    }
  }
  const bool c = star_gap <= 1e-3;
  os << "star2d_rel_gap=" << star_gap << ' ';

  // (d) manufactured solution: spatial with dt ~ h^2, temporal by self-convergence.
  const auto m = standard_manufactured(1.0, 2.0);
  const double s32 = manufactured_error(run(manufactured(32, 0.5 / (32 * 32))).snapshots.back(), *m);
  const double s64 = manufactured_error(run(manufactured(64, 0.5 / (64 * 64))).snapshots.back(), *m);
  const auto t1 = run(manufactured(64, 0.02)).snapshots.back();
  const auto t2 = run(manufactured(64, 0.01)).snapshots.back();
  const auto t3 = run(manufactured(64, 0.005)).snapshots.back();
  const double spatial = std::log2(s32 / s64);
  const double temporal = std::log2(max_diff(t1, t2) / max_diff(t2, t3));
  const bool d = spatial >= 1.9 && temporal >= 0.9;
  os << "mms_spatial=" << spatial << " mms_temporal=" << temporal << ' ';

  detail = os.str();
  return a && b && c && d;
}

bool gate_criterion(std::string& detail) {
  std::ostringstream os;

  SolverConfig flat = lens(128, 1.0 / (128 * 128), 0.0);
  for (int I = 0; I < 3; ++I) {
    flat.sheets[I] = std::make_shared<FunctionField>(I < 2 ? DomainTag::Inner : DomainTag::Outer,
                                                     [](const Vec2&) { return FieldJet{}; });
  }
  const auto fr = compatibility_report(flat);
  bool rejected = false;
  try {
    init(flat);
  } catch (const CompatibilityError&) {
    rejected = true;
  }
  const double bc1 = fr.order0.max_abs("bc1");
  const bool flat_ok = rejected && std::abs(bc1 - 1.0) < 1e-12;
  os << "flat_rejected=" << rejected << " flat_bc1=" << bc1 << ' ';

  SolverConfig lemma = flat;
  lemma.sheets = lemma_sheets(1.0, lemma.outer_radius, 0.3, 0.5);
  const auto lr = compatibility_report(lemma);
  bool accepted = true;
  double discrete = INFINITY;
  try {
    discrete = diagnostics(init(lemma)).max_compat;
  } catch (const CompatibilityError&) {
    accepted = false;
  }
  const bool lemma_ok = accepted && lr.order0.max_abs() < 1e-6 && lr.order1.max_abs() < 1e-3 && discrete < 1e-3;
  os << "lemma_accepted=" << accepted << " order0=" << lr.order0.max_abs() << " order1=" << lr.order1.max_abs()
     << " discrete_order1=" << discrete;

  detail = os.str();
  return flat_ok && lemma_ok;
}
