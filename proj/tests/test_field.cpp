#include "doctest.h"

#include "tj/configuration.hpp"
#include "tj/field.hpp"

using namespace tj;

namespace {

double f(const Vec2& x) { return std::sin(x.x()) * std::cos(0.7 * x.y()) + 0.3 * x.x() * x.y(); }

FieldJet exact(const Vec2& x) {
  FieldJet j;
  const double s = std::sin(x.x()), c = std::cos(x.x());
  const double sy = std::sin(0.7 * x.y()), cy = std::cos(0.7 * x.y());
  j.value = f(x);
  j.grad = Vec2(c * cy + 0.3 * x.y(), -0.7 * s * sy + 0.3 * x.x());
  j.hess << -s * cy, -0.7 * c * sy + 0.3, -0.7 * c * sy + 0.3, -0.49 * s * cy;
  return j;
}

std::vector<double> star_radii(int m) {
  std::vector<double> r(m);
  for (int j = 0; j < m; ++j) r[j] = 1.0 + 0.1 * std::cos(2 * node_parameter(j, m));
  return r;
}

// Max jet error over interface-row nodes and a few interior points.
double jet_error(DomainTag tag, int n, int m, int order) {
  auto grid = std::make_shared<const PolarGrid>(tag, n, star_radii(m), 2.0);
  std::vector<double> vals(n * m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) vals[grid->index(i, j)] = f(grid->position(i, j));
  PolarGridField field(grid, vals);
  double err = 0.0;
  const int row = grid->interface_row();
  for (int j = 0; j < m; ++j) {
    const auto nj = field.node_jet(row, j, order);
    const auto ej = exact(grid->position(row, j));
    err = std::max({err, (nj.grad - ej.grad).norm(), (nj.hess - ej.hess).norm()});
  }
  for (const Vec2 x : {Vec2(0.31, -0.2), Vec2(-0.5, 0.4), Vec2(0.02, 0.01)}) {
    const Vec2 p = tag == DomainTag::Inner ? x : Vec2(1.5 * x / x.norm());
    const auto fj = field.jet(p);
    const auto ej = exact(p);
    err = std::max({err, std::abs(fj.value - ej.value), (fj.grad - ej.grad).norm(),
                    (fj.hess - ej.hess).norm()});
  }
  return err;
}

}  // namespace

TEST_CASE("polar grid jets converge at second order") {
  for (auto tag : {DomainTag::Inner, DomainTag::Outer}) {
    const double e1 = jet_error(tag, 32, 64, 2);
    const double e2 = jet_error(tag, 64, 128, 2);
    CAPTURE(e1);
    CAPTURE(e2);
    CHECK(std::log2(e1 / e2) > 1.8);
  }
}

TEST_CASE("higher-order interface stencils converge faster") {
  const double e1 = jet_error(DomainTag::Inner, 32, 64, 4);
  const double e2 = jet_error(DomainTag::Inner, 64, 128, 4);
  CHECK(e2 < jet_error(DomainTag::Inner, 64, 128, 2));
}

TEST_CASE("grid fields refuse points outside their domain") {
  auto grid = std::make_shared<const PolarGrid>(DomainTag::Inner, 16, star_radii(32), 2.0);
  PolarGridField field(grid, std::vector<double>(16 * 32, 1.0));
  CHECK_THROWS_AS(field.jet(Vec2(1.5, 0.0)), DomainError);
  auto outer = std::make_shared<const PolarGrid>(DomainTag::Outer, 16, star_radii(32), 2.0);
  PolarGridField field3(outer, std::vector<double>(16 * 32, 1.0));
  CHECK_THROWS_AS(field3.jet(Vec2(0.5, 0.0)), DomainError);
  CHECK_THROWS_AS(field3.jet(Vec2(2.5, 0.0)), DomainError);
  CHECK_THROWS_AS(PolarGrid(DomainTag::Outer, 16, star_radii(32), 1.0), GeometryError);
}

TEST_CASE("radial chain rule") {
  // w = r^3: Dw = 3 r x, D^2 w = 3 r I + 3 x x^T / r.
  const Vec2 x(0.3, -0.4);
  const double r = 0.5;
  const auto j = radial_jet(x, {r * r * r, 3 * r * r, 6 * r});
  CHECK((j.grad - 3 * r * x).norm() < 1e-14);
  const Mat2 h = 3 * r * Mat2::Identity() + 3 * x * x.transpose() / r;
  CHECK((j.hess - h).norm() < 1e-14);
}
