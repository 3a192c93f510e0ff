#include "doctest.h"

#include "tj/configuration.hpp"

#include <random>

using namespace tj;

namespace {

JunctionPointData random_junction(std::mt19937_64& rng, bool flat_tangent = false) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double lambda = flat_tangent ? 0.0 : 2.0 * u(rng);
  const double alpha = std::sqrt(1 + lambda * lambda);
  const double a3 = 0.99 * u(rng) * alpha / kSqrt3;
  const double h1 = 3 * u(rng), h2 = 3 * u(rng);
  return junction_from_lemma(lambda, a3, {h1, h2, h1 + h2});
}

std::shared_ptr<const InterfaceCurve> unit_circle(int m) {
  std::vector<double> r(m, 1.0);
  return std::make_shared<const InterfaceCurve>(InterfaceCurve::star(r));
}

std::shared_ptr<const GraphField> constant_field(DomainTag tag, double c) {
  return std::make_shared<FunctionField>(tag, [c](const Vec2&) {
    FieldJet j;
    j.value = c;
    return j;
  });
}

}  // namespace

TEST_CASE("mean curvature of simple graphs") {
  FieldJet plane;
  plane.grad = Vec2(0.4, -1.3);
  CHECK(mean_curvature(plane) == 0.0);

  FieldJet cap;  // sqrt(1 - |x|^2) at the apex
  cap.value = 1.0;
  cap.hess = -Mat2::Identity();
  CHECK(mean_curvature(cap) == -2.0);

  FieldJet bowl;  // |x|^2 / 2 at the origin
  bowl.hess = Mat2::Identity();
  CHECK(mean_curvature(bowl) == 2.0);

  // Sphere of radius 2 away from the apex: H = -2/R = -1 everywhere.
  const double R = 2.0;
  const auto sphere = FunctionField::radial(DomainTag::Inner, [R](double r) {
    const double s = std::sqrt(R * R - r * r);
    return std::array<double, 3>{s, -r / s, -R * R / (s * s * s)};
  });
  CHECK(mean_curvature(sphere, Vec2(0.7, 0.9)) == doctest::Approx(-1.0).epsilon(1e-13));
}

TEST_CASE("junction slopes from the 120-degree condition") {
  const auto s0 = lemma12_solve(1.0, 0.0);
  CHECK(s0.v3 == doctest::Approx(1.0));
  CHECK(s0.a1 == doctest::Approx(-kSqrt3));
  CHECK(s0.v1 == doctest::Approx(2.0));
  CHECK(s0.a2 == doctest::Approx(kSqrt3));
  CHECK(s0.v2 == doctest::Approx(2.0));

  // Recomputed from the closed-form solution; see the decisions notes.
  const auto s = lemma12_solve(1.0, 0.5);
  CHECK(s.v3 == doctest::Approx(1.1180339887).epsilon(1e-9));
  CHECK(s.a1 == doctest::Approx(-0.6602540378).epsilon(1e-9));
  CHECK(s.v1 == doctest::Approx(1.1983052176).epsilon(1e-9));
  CHECK(s.a2 == doctest::Approx(16.6602540378).epsilon(1e-9));
  CHECK(s.v2 == doctest::Approx(16.6902386024).epsilon(1e-9));
  CHECK(std::abs(1 / s.v1 + 1 / s.v2 - 1 / s.v3) < 1e-12);
  CHECK(std::abs(s.a1 / s.v1 + s.a2 / s.v2 - 0.5 / s.v3) < 1e-12);
  CHECK(std::abs(s.v2 - std::sqrt(1 + s.a2 * s.a2)) < 1e-12);

  CHECK_THROWS_WITH_AS(lemma12_solve(1.0, 0.6), "no admissible junction slopes", JunctionError);
}

TEST_CASE("rotation form agrees with the slope formulas") {
  const auto [w1, w2] = rotation_form(Vec2(0, 1));
  CHECK((w1 - Vec2(-kSqrt3 / 2, 0.5)).norm() < 1e-15);
  CHECK((w2 - Vec2(kSqrt3 / 2, 0.5)).norm() < 1e-15);
  const auto [z1, z2] = rotation_form(Vec2::Zero());
  CHECK(z1.norm() == 0.0);
  CHECK(z2.norm() == 0.0);

  const auto s = lemma12_solve(1.0, 0.5);
  const Vec2 o3 = Vec2(0.5, 1.0) / s.v3;
  const auto [r1, r2] = rotation_form(o3);
  CHECK((r1 - Vec2(s.a1, 1.0) / s.v1).norm() < 1e-12);
  CHECK((r2 - Vec2(s.a2, 1.0) / s.v2).norm() < 1e-12);
}

TEST_CASE("junction frames") {
  std::mt19937_64 rng(7);
  const Vec2 tau(0.6, 0.8), n = perp(tau);
  for (int k = 0; k < 200; ++k) {
    const auto j = random_junction(rng);
    const auto f = frame_vectors(j, tau, n);
    CHECK((f.N[0] + f.N[1] - f.N[2]).norm() < 1e-12);
    CHECK((f.T[0] + f.T[1] - f.T[2]).norm() < 1e-12);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(f.E.norm() - 1) < 1e-12);
      CHECK(std::abs(f.N[i].norm() - 1) < 1e-12);
      CHECK(std::abs(f.E.dot(f.N[i])) < 1e-12);
      CHECK((conormal_closed_form(j, i, tau, n) - f.T[i]).norm() < 1e-12);
    }
    CHECK(f.T[2].dot(f.N[0] - f.N[1]) == doctest::Approx(-kSqrt3).epsilon(1e-12));
    CHECK(std::abs(f.N[2].dot(f.N[0] - f.N[1])) < 1e-12);
  }
  const auto sym = junction_from_lemma(0.0, 0.0);
  const auto f = frame_vectors(sym, tau, n);
  CHECK((f.E - Vec3(tau.x(), tau.y(), 0)).norm() < 1e-15);
  CHECK((f.N[2] - Vec3(0, 0, 1)).norm() < 1e-15);
  CHECK((f.T[2] + Vec3(n.x(), n.y(), 0)).norm() < 1e-15);
}

TEST_CASE("velocity decomposition reconstructs the sheet velocities") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Vec2 tau(1, 0), n(0, 1);
  for (int k = 0; k < 200; ++k) {
    const auto j = random_junction(rng);
    const Vec2 adot(u(rng), u(rng));
    const auto d = velocity_decomposition(j, adot, tau, n);
    const auto f = frame_vectors(j, tau, n);
    for (int i = 0; i < 3; ++i) {
      const Vec2 dw = j.lambda0 * tau + j.a[i] * n;
      const Vec3 direct(adot.x(), adot.y(), dw.dot(adot) + j.v[i] * j.H[i]);
      const Vec3 rebuilt = d.lambda[i] * f.E + d.mu[i] * f.T[i] + j.H[i] * f.N[i];
      CHECK((rebuilt - direct).norm() < 1e-10);
    }
  }
  auto sym = junction_from_lemma(0.0, 0.0);
  const auto d = velocity_decomposition(sym, Vec2(0, 0.7), tau, n);
  for (int i = 0; i < 3; ++i) CHECK(d.mu[i] == doctest::Approx(-0.7 * sym.v[i]));
  const auto z = velocity_decomposition(sym, Vec2::Zero(), tau, n);
  for (int i = 0; i < 3; ++i) CHECK(z.mu[i] == 0.0);
}

TEST_CASE("relation system has rank two") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 500; ++k) {
    const auto j = random_junction(rng, k % 5 == 0);
    const auto r = relations_rank(j);
    CHECK(r.rank == 2);
    CHECK(r.projection_residual < 1e-9);
    CHECK(least_squares_normal_velocity(j) ==
          doctest::Approx(interface_normal_velocity(j)).epsilon(1e-9));
    if (j.lambda0 == 0.0) {
      const auto A = relations_system(j);
      CHECK(A.row(4).norm() == 0.0);
      CHECK(A.row(5).norm() == 0.0);
    }
  }
  auto bad = junction_from_lemma(0.3, 0.1);
  bad.a[0] += 1e-3;
  bad.v[0] = std::sqrt(1 + 0.09 + bad.a[0] * bad.a[0]);
  CHECK_THROWS_WITH_AS(relations_rank(bad), "not a configuration point", JunctionError);
}

TEST_CASE("interface normal velocity") {
  auto j = junction_from_lemma(0.0, 0.0, {1.0, 0.0, 1.0});
  CHECK(std::abs(interface_normal_velocity(j) - 1.0 / kSqrt3) < 1e-12);
  CHECK(least_squares_normal_velocity(j) == doctest::Approx(1.0 / kSqrt3).epsilon(1e-12));
  // Relation (3) at the symmetric point reads H1 - H2 = sqrt(3) adot.n.
  const auto A = relations_system(j);
  CHECK(A(2, 0) == doctest::Approx(-kSqrt3));
  CHECK(A(2, 3) == 0.0);
  j.H = {0.4, 0.4, 0.8};
  CHECK(interface_normal_velocity(j) == 0.0);
}

TEST_CASE("order-0 and order-1 validation") {
  TripleConfig cfg;
  cfg.outer_radius = 2.0;
  cfg.interface = unit_circle(32);
  cfg.sheets = {constant_field(DomainTag::Inner, 0.0), constant_field(DomainTag::Inner, 0.0),
                constant_field(DomainTag::Outer, 0.0)};
  const auto flat = validate_order0(cfg);
  CHECK(flat.max_abs("bc1") == 1.0);
  CHECK(flat.max_abs("bc0_12") == 0.0);
  CHECK(flat.max_abs("neumann") == 0.0);

  cfg.sheets[0] = constant_field(DomainTag::Inner, 1e-3);
  CHECK(validate_order0(cfg).max_abs("bc0_12") == doctest::Approx(1e-3));

  // Symmetric cone-like data: w1 = sqrt(3)/2 (r^2 - 1), w2 = -w1, w3 = 0
  // meet at 120 degrees on the unit circle.
  auto w1 = std::make_shared<FunctionField>(FunctionField::radial(DomainTag::Inner, [](double r) {
    return std::array<double, 3>{kSqrt3 / 2 * (r * r - 1), kSqrt3 * r, kSqrt3};
  }));
  auto w2 = std::make_shared<FunctionField>(FunctionField::radial(DomainTag::Inner, [](double r) {
    return std::array<double, 3>{-kSqrt3 / 2 * (r * r - 1), -kSqrt3 * r, -kSqrt3};
  }));
  cfg.sheets = {w1, w2, constant_field(DomainTag::Outer, 0.0)};
  const auto ok = validate_order0(cfg);
  CHECK(ok.max_abs() < 1e-12);
  const auto h = validate_order1(cfg);
  // H1 = -H2, H3 = 0.
  CHECK(h.max_abs() < 1e-12);
  CHECK(ok.to_text("order0").find("order0 max") != std::string::npos);
}
