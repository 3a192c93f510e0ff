#include "doctest.h"

#include "tj/config_file.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace tj;

namespace {

int error_line(const std::string& text, const TolOverrides& tol = {}) {
  try {
    parse_config(text, "<test>", tol);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

std::string error_text(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("defaults and scalar keys") {
  const auto p = parse_config(R"(
# symmetric lens
[geometry]
outer_radius = 2.5
interface_radius = 1.0

[solver]
n_inner = 40   ; trailing comment
dt = 2.5e-4
t_end = 0.05

[tolerances]
order1 = 1E-2
)");
  CHECK(p.solver.mode == SolverMode::Axisymmetric);
  CHECK(p.solver.outer_radius == 2.5);
  CHECK(p.solver.interface_radii == std::vector<double>{1.0});
  CHECK(p.solver.n_inner == 40);
  CHECK(p.solver.n_outer == 64);
  CHECK(p.solver.dt == 2.5e-4);
  CHECK(p.solver.order1_tol == 1e-2);
  CHECK(p.solver.sheets[0] != nullptr);
  CHECK(p.junction.H1 == 1.0);

  const auto o = parse_config("[tolerances]\norder1 = 1e-2\n", "<s>", {{"order1", "5e-3"}});
  CHECK(o.solver.order1_tol == 5e-3);
}

TEST_CASE("errors carry the line and key") {
  CHECK(error_line("[solver]\n\nn_iner = 4\n") == 3);
  CHECK(error_text("[solver]\nn_iner = 4\n").find("n_iner") != std::string::npos);
  CHECK(error_line("[solver]\ndt = 1e-3\ndt = 2e-3\n") == 3);
  CHECK(error_line("[solvers]\n") == 1);
  CHECK(error_line("[solver\n") == 1);
  CHECK(error_line("dt = 1\n") == 1);
  CHECK(error_line("[solver]\ndt 1e-3\n") == 2);
  CHECK(error_line("[solver]\ndt = 1e-3x\n") == 2);
  CHECK(error_line("[solver]\nn_inner = 32.5\n") == 2);
  CHECK(error_line("[solver]\ndt =\n") == 2);
  CHECK(error_line("[geometry]\nmode = spherical\n") == 2);
  CHECK(error_line("[geometry]\nn_theta = 16\n") == 2);
  CHECK(error_line("", {{"ordr1", "1"}}) == 0);
  // Semantic checks are not tied to a line.
  CHECK(error_line("[solver]\nn_inner = 4\n") == 0);
  CHECK(error_line("[solver]\ndt = -1\n") == 0);
  CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("star2d interface") {
  const auto p = parse_config(R"([geometry]
mode = star2d
n_theta = 16
perturbation = 0.1
perturbation_mode = 2
)");
  REQUIRE(p.solver.interface_radii.size() == 16);
  CHECK(p.solver.interface_radii[0] == doctest::Approx(1.1));
  CHECK(p.solver.interface_radii[2] == doctest::Approx(1.0));
  CHECK(p.solver.interface_radii[4] == doctest::Approx(0.9));
  CHECK(error_line("[geometry]\nmode = star2d\nn_theta = 15\n") == 0);
}

TEST_CASE("field families") {
  const auto lens = lens_sheets(1.0);
  const auto p = parse_config(R"([fields]
family = radial
sheet1 = poly 0 0.8660254037844386
sheet2 = poly 0 -0.8660254037844386
sheet3 = log 0 0
)");
  const Vec2 x(0.3, -0.4);
  for (int I = 0; I < 2; ++I) {
    const auto a = p.solver.sheets[I]->jet(x), b = lens[I]->jet(x);
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-14));
    CHECK((a.grad - b.grad).norm() < 1e-14);
    CHECK((a.hess - b.hess).norm() < 1e-14);
  }
  // Quadratic in q = r^2 - 1: w = q^2, w_r = 4 r q, w_rr = 4 q + 8 r^2.
  const auto q = parse_config("[fields]\nfamily = radial\nsheet1 = poly 0 0 1\nsheet2 = poly 0\nsheet3 = poly 0\n");
  const auto j = q.solver.sheets[0]->jet(Vec2(2.0, 0.0));
  CHECK(j.value == doctest::Approx(9.0));
  CHECK(j.grad.x() == doctest::Approx(24.0));
  CHECK(j.hess(0, 0) == doctest::Approx(44.0));
  CHECK(j.hess(1, 1) == doctest::Approx(12.0));

  const auto l = parse_config("[fields]\nfamily = radial\nsheet1 = poly 0\nsheet2 = poly 0\nsheet3 = log 1 2\n");
  const auto k = l.solver.sheets[2]->jet(Vec2(0.0, 2.0));
  CHECK(k.value == doctest::Approx(1.0 + 2.0 * std::log(2.0)));
  CHECK(k.grad.y() == doctest::Approx(1.0));
  CHECK(k.hess(1, 1) == doctest::Approx(-0.5));
  CHECK(k.hess(0, 0) == doctest::Approx(0.5));

  CHECK(error_line("[fields]\nfamily = radial\nsheet1 = log 0 1\nsheet2 = poly 0\nsheet3 = poly 0\n") == 3);
  CHECK(error_line("[fields]\nfamily = radial\nsheet1 = spline 1\nsheet2 = poly 0\nsheet3 = poly 0\n") == 3);
  CHECK(error_line("[fields]\nfamily = radial\nsheet1 = poly\nsheet2 = poly 0\nsheet3 = poly 0\n") == 3);
  CHECK(error_line("[fields]\nfamily = radial\nsheet1 = poly 0\nsheet2 = poly 0\n") == 0);
  CHECK(error_line("[fields]\nsheet1 = poly 0\n") == 2);
  CHECK(error_line("[fields]\nfamily = manufactured\n") == -1);
  CHECK(error_line("[fields]\nfamily = lemma\nlemma_a3 = 0.7\n") == 3);
  CHECK(error_line("[fields]\nfamily = lens\nlemma_a3 = 0.1\n") == 3);
  const auto lemma = parse_config("[fields]\nfamily = lemma\nlemma_a3 = 0.3\nlemma_H1 = 0.5\n");
  const auto expected = lemma_sheets(1.0, 2.0, 0.3, 0.5);
  CHECK(lemma.solver.sheets[1]->jet(x).value == expected[1]->jet(x).value);
  CHECK(parse_config("[fields]\nfamily = manufactured\n").solver.manufactured != nullptr);
}

TEST_CASE("sampled profiles") {
  const auto dir = std::filesystem::temp_directory_path() / "tj_config_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "line.txt");
    f << "# r w\n";
    for (int i = 0; i <= 20; ++i) f << 2.0 + 0.1 * i << ' ' << 1.0 + 0.5 * (2.0 + 0.1 * i) << '\n';
    std::ofstream cfg(dir / "case.cfg");
    cfg << "[fields]\nfamily = radial\nsheet1 = poly 0\nsheet2 = poly 0\nsheet3 = samples line.txt\n";
  }
  const auto p = load_config((dir / "case.cfg").string());
  // A natural cubic spline reproduces linear data exactly.
  const auto j = p.solver.sheets[2]->jet(Vec2(2.37, 0.0));
  CHECK(j.value == doctest::Approx(1.0 + 0.5 * 2.37).epsilon(1e-13));
  CHECK(j.grad.x() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(j.hess(0, 0)) < 1e-10);
  CHECK_THROWS_AS(p.solver.sheets[2]->jet(Vec2(1.5, 0.0)), DomainError);

  CHECK_THROWS_AS(sampled_radial_field(DomainTag::Outer, {0, 1, 1, 2}, {0, 0, 0, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(sampled_radial_field(DomainTag::Outer, {0, 1, 2}, {0, 0, 0}), std::invalid_argument);
  CHECK(error_line("[fields]\nfamily = radial\nsheet1 = poly 0\nsheet2 = poly 0\nsheet3 = samples missing.txt\n") == 5);
  std::filesystem::remove_all(dir);
}
