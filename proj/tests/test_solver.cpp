#include "doctest.h"

#include "tj/solver.hpp"

#include <cmath>

using namespace tj;

namespace {

SolverConfig lens(int n, double B = 0.0) {
  SolverConfig c;
  c.sheets = lens_sheets(1.0, B);
  c.n_inner = n;
  c.n_outer = n;
  c.dt = 1.0 / (n * n);
  return c;
}

double first_speed(const SolverConfig& c) {
  const auto s = init(c);
  const auto [next, rep] = step(s, c, c.dt);
  return next.R_dot[0];
}

double max_fine_angle(const RunResult& r) {
  double m = 0.0;
  for (const auto& rep : r.reports) m = std::max(m, rep.max_angle_fine);
  return m;
}

std::array<std::vector<double>, 3> manufactured_run(int n, double dt) {
  SolverConfig c;
  c.manufactured = standard_manufactured(1.0, 2.0);
  c.n_inner = n;
  c.n_outer = n;
  c.dt = dt;
  c.t_end = 0.2;
  return run(c).snapshots.back().u;
}

}  // namespace

TEST_CASE("compatibility gate") {
  auto c = lens(32);
  const auto s = init(c);
  CHECK(s.u[0].size() == 32);
  const auto d = diagnostics(s);
  CHECK(d.max_match < 1e-14);
  CHECK(d.max_angle_fine < 1e-3);

  auto flat = c;
  for (int I = 0; I < 3; ++I) {
    flat.sheets[I] = std::make_shared<FunctionField>(I < 2 ? DomainTag::Inner : DomainTag::Outer,
                                                     [](const Vec2&) { return FieldJet{}; });
  }
  try {
    init(flat);
    FAIL("flat sheets accepted");
  } catch (const CompatibilityError& e) {
    CHECK(e.report().find("order0 max") != std::string::npos);
    CHECK(e.report().find("bc1=1 ") != std::string::npos);
  }

  auto touching = c;
  touching.interface_radii = {2.0};
  CHECK_THROWS_AS(init(touching), GeometryError);
  auto coarse = c;
  coarse.n_inner = 6;
  CHECK_THROWS_AS(init(coarse), std::invalid_argument);
}

TEST_CASE("first step follows the junction velocity law") {
  // Symmetric lens: H1 - H2 = 5 sqrt(3) / 4, so the interface moves inward at 5/4.
  CHECK(first_speed(lens(64)) == doctest::Approx(-1.25).epsilon(0.03));
  // B = -sqrt(3)/8 gives H1 - H2 = sqrt(3): speed 1.
  CHECK(first_speed(lens(64, -kSqrt3 / 8)) == doctest::Approx(-1.0).epsilon(0.03));
  // B = -5 sqrt(3)/8 gives H1 = H2 = 0: the interface stays put. The sampled
  // data carry an O(h^2) discrete angle mismatch that the first step absorbs,
  // so the observed speed only tends to zero with the grid.
  const double still64 = std::abs(first_speed(lens(64, -5 * kSqrt3 / 8)));
  const double still128 = std::abs(first_speed(lens(128, -5 * kSqrt3 / 8)));
  CHECK(still128 < 0.08);
  CHECK(still128 < 0.6 * still64);
  const auto c = lens(64);
  CHECK(diagnostics(init(c)).interface[0].normal_velocity == doctest::Approx(1.25).epsilon(1e-3));
}

TEST_CASE("angle residuals converge at second order") {
  auto c1 = lens(64);
  c1.t_end = 0.1;
  auto c2 = lens(128);
  c2.t_end = 0.1;
  const auto r1 = run(c1);
  const auto r2 = run(c2);
  CHECK_FALSE(r1.regime_exit);
  const double e1 = max_fine_angle(r1), e2 = max_fine_angle(r2);
  CAPTURE(e1);
  CAPTURE(e2);
  CHECK(e1 / e2 >= 3.5);
  for (const auto& rep : r2.reports) {
    CHECK(rep.max_angle_residual < 1e-9);
    CHECK(rep.newton_iterations <= 25);
  }
  // Shrinking interface.
  for (std::size_t k = 1; k < r1.snapshots.size(); ++k) {
    CHECK(r1.snapshots[k].R[0] < r1.snapshots[k - 1].R[0]);
  }
}

TEST_CASE("energy does not increase") {
  auto c = lens(32);
  c.dt = 1e-4;
  c.t_end = 0.1;
  const auto r = run(c);
  CHECK(r.reports.size() == 1000);
  CHECK(r.energy_increases == 0);
  CHECK(r.reports.back().energy < r.reports.front().energy);
}

TEST_CASE("star2d reproduces the axisymmetric run") {
  auto c = lens(16);
  c.t_end = 0.05;
  const auto axi = run(c);
  c.mode = SolverMode::Star2d;
  c.interface_radii.assign(16, 1.0);
  const auto star = run(c);
  REQUIRE(star.snapshots.size() == axi.snapshots.size());
  for (std::size_t k = 0; k < star.snapshots.size(); ++k) {
    for (double r : star.snapshots[k].R) {
      CHECK(std::abs(r - axi.snapshots[k].R[0]) <= 1e-3 * 1.0);
    }
  }
  CHECK(star.reports.back().energy == doctest::Approx(axi.reports.back().energy).epsilon(1e-8));
}

TEST_CASE("manufactured solution converges") {
  SolverConfig c;
  const auto m = standard_manufactured(1.0, 2.0);
  c.manufactured = m;
  c.t_end = 0.2;
  double prev = 0.0;
  for (int n : {32, 64}) {
    c.n_inner = n;
    c.n_outer = n;
    c.dt = 0.5 / (n * n);
    const double e = manufactured_error(run(c).snapshots.back(), *m);
    if (prev > 0) CHECK(std::log2(prev / e) >= 1.9);
    prev = e;
  }
  const auto a = manufactured_run(64, 0.02), b = manufactured_run(64, 0.01),
             d = manufactured_run(64, 0.005);
  double d1 = 0.0, d2 = 0.0;
  for (int I = 0; I < 3; ++I) {
    for (std::size_t k = 0; k < a[I].size(); ++k) {
      d1 = std::max(d1, std::abs(a[I][k] - b[I][k]));
      d2 = std::max(d2, std::abs(b[I][k] - d[I][k]));
    }
  }
  CHECK(std::log2(d1 / d2) >= 0.9);
}

TEST_CASE("step and run edge cases") {
  auto c = lens(32);
  const auto s = init(c);
  const double cap = advective_cap(s);
  CHECK(cap > 0);
  CHECK_THROWS_AS(step(s, c, 2 * cap), StepRejected);

  c.t_end = 0.0;
  const auto r = run(c);
  CHECK(r.snapshots.size() == 1);
  CHECK(r.reports.empty());

  c.t_end = 1.0;
  c.dt = 2e-3;
  const auto collapse = run(c);
  CHECK(collapse.regime_exit);
  CHECK(collapse.message.find("left existence regime") != std::string::npos);
  CHECK(collapse.snapshots.back().R[0] > 0.02 * 2.0);
}

TEST_CASE("asymmetric junction data from the slope lemma") {
  const double a3 = 0.3, H1 = 0.5;
  const auto sheets = lemma_sheets(1.0, 2.0, a3, H1);
  SolverConfig c;
  c.sheets = sheets;
  c.n_inner = c.n_outer = 128;
  c.dt = 1.0 / (128 * 128);
  const auto rep = compatibility_report(c);
  CHECK(rep.passed());
  CHECK(rep.order0.max_abs() < 1e-12);
  CHECK(rep.order1.max_abs() < 1e-12);

  const auto s = init(c);
  const auto d = diagnostics(s);
  CHECK(d.max_compat < 1e-3);
  CHECK(d.max_match == 0.0);
  const auto& rec = d.interface[0];
  CHECK(rec.H[0] == doctest::Approx(H1).epsilon(1e-3));

  // Speed from the junction relations alone, with the exact curvatures.
  const double H3 = rec.H[2];
  const double law = interface_normal_velocity(junction_from_lemma(0.0, a3, {H1, H3 - H1, H3}));
  CHECK(rec.normal_velocity == doctest::Approx(law).epsilon(1e-3));
  const auto [next, r] = step(s, c, c.dt);
  CAPTURE(law);
  CHECK(next.R_dot[0] == doctest::Approx(-law).epsilon(0.05));
}
