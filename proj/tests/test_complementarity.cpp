#include "doctest.h"

#include "tj/complementarity.hpp"

#include <random>

using namespace tj;

namespace {

const JunctionSymbolData kSymmetric = JunctionSymbolData::from_lemma(0.0, 0.0);

}  // namespace

TEST_CASE("metric coefficients") {
  JunctionSymbolData flat;
  flat.v0 = {1, 1, 1};
  CHECK(metric_coeffs(flat, 0).lower.isIdentity());

  const auto m = metric_coeffs(kSymmetric, 0);
  CHECK(m.lower(0, 0) == doctest::Approx(4.0));
  CHECK(m.upper(0, 0) == doctest::Approx(0.25));
  CHECK(m.lower.determinant() == doctest::Approx(4.0));

  const auto d = JunctionSymbolData::from_lemma(0.7, 0.3);
  for (int i = 0; i < 3; ++i) {
    const auto g = metric_coeffs(d, i);
    CHECK((g.lower * g.upper - Mat2::Identity()).norm() < 1e-14);
    CHECK(g.lower.determinant() == doctest::Approx(d.v0[i] * d.v0[i]).epsilon(1e-14));
  }
}

TEST_CASE("indicial roots") {
  const auto rs = indicial_roots(kSymmetric, {1.0, 0.0});
  CHECK(std::abs(rs.rho[0] - cplx(0, 2)) < 1e-14);
  CHECK(std::abs(rs.rho[1] - cplx(0, 2)) < 1e-14);
  CHECK(std::abs(rs.rho[2] - cplx(0, 1)) < 1e-14);

  const auto flat_tangent = JunctionSymbolData::from_lemma(0.0, 0.2);
  const auto r0 = indicial_roots(flat_tangent, {cplx(0.3, 2.0), -1.5});
  for (int i = 0; i < 3; ++i) {
    CHECK(r0.a[i].norm() == 0.0);
    CHECK(std::abs(r0.r[i](0) - r0.rho[i] / flat_tangent.v0[i]) < 1e-15);
    CHECK(r0.r[i](1) == cplx(0.0));
  }

  CHECK_THROWS_AS(indicial_roots(kSymmetric, {0.0, 0.0}), std::domain_error);
  CHECK_THROWS_AS(indicial_roots(kSymmetric, {-2.0, 1.0}), std::domain_error);

  // Root substitution and decay on a 20 x 20 sample.
  const auto d = JunctionSymbolData::from_lemma(-1.1, -0.4);
  double worst = 0.0;
  for (int a = 0; a < 20; ++a) {
    for (int b = 0; b < 20; ++b) {
      const SpectralPoint sp{cplx(0.05 + 0.5 * a, -5.0 + 0.5 * b), -4.0 + 0.4 * b};
      const auto rs2 = indicial_roots(d, sp);
      for (int i = 0; i < 3; ++i) {
        const auto g = metric_coeffs(d, i).upper;
        const double sg = JunctionSymbolData::sigma[i];
        const cplx rho = rs2.rho[i];
        const cplx q = g(0, 0) * rho * rho + 2.0 * sg * g(0, 1) * sp.xi * rho +
                       g(1, 1) * sp.xi * sp.xi + sp.p;
        worst = std::max(worst, std::abs(q) / (std::abs(sp.p) + sp.xi * sp.xi + std::norm(rho)));
        CHECK(rho.imag() > 0);
      }
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("frame vectors of the roots") {
  const auto d = JunctionSymbolData::from_lemma(0.7, 0.3);
  const auto rs = indicial_roots(d, {cplx(1.3, -0.4), 2.2});
  CHECK((rs.t[0] + rs.t[1] - rs.t[2]).norm() < 1e-12);
  CHECK((rs.t[0] - rotation(kPi / 3) * rs.t[2]).norm() < 1e-12);
  CHECK((rs.t[1] - rotation(5 * kPi / 3) * rs.t[2]).norm() < 1e-12);
  const double a2 = 0.49 * 2.2 * 2.2 / 1.49;
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(rs.t[i].norm() - 1.0) < 1e-12);
    CHECK(rs.a[i].squaredNorm() == doctest::Approx(a2).epsilon(1e-12));
    CHECK((rs.r[i] - rs.a[i].cast<cplx>() - cplx(0, 1) * rs.b).norm() < 1e-12);
  }
  CHECK((rs.a[0] + rs.a[1] + rs.a[2]).norm() < 1e-12);
  CHECK((rs.a[0] - rotation(4 * kPi / 3) * rs.a[2]).norm() < 1e-12);
  CHECK((rs.a[1] - rotation(2 * kPi / 3) * rs.a[2]).norm() < 1e-12);
  CHECK(rs.a[0].dot(rs.a[1]) == doctest::Approx(-a2 / 2).epsilon(1e-12));
  CHECK(rs.a[0].dot(perp(rs.a[1])) == doctest::Approx(kSqrt3 / 2 * a2).epsilon(1e-12));
  CHECK(rs.a[1].dot(perp(rs.a[2])) == doctest::Approx(kSqrt3 / 2 * a2).epsilon(1e-12));
  CHECK(rs.a[2].dot(perp(rs.a[0])) == doctest::Approx(kSqrt3 / 2 * a2).epsilon(1e-12));
}

TEST_CASE("symbol matrix entries") {
  const auto T = build_T(kSymmetric, {1.0, 0.0});
  CHECK(T(0, 0) == cplx(1.0));
  CHECK(T(0, 1) == cplx(1.0));
  CHECK(T(0, 2) == cplx(-1.0));
  CHECK(std::abs(T(1, 0) - cplx(0, -kSqrt3 / 2)) < 1e-14);
  CHECK(std::abs(T(1, 1) - cplx(0, kSqrt3 / 2)) < 1e-14);
  CHECK(std::abs(T(1, 2)) < 1e-14);

  // xi = 0 removes the lambda0 xi terms.
  const auto d = JunctionSymbolData::from_lemma(0.9, 0.1);
  const auto Tz = build_T(d, {cplx(2.0, 1.0), 0.0});
  const auto rs = indicial_roots(d, {cplx(2.0, 1.0), 0.0});
  for (int i = 0; i < 3; ++i) {
    const double v2 = d.v0[i] * d.v0[i];
    CHECK(std::abs(Tz(1, i) - d.n0[i] / v2 * rs.rho[i]) < 1e-14);
    CHECK(std::abs(Tz(2, i) - (1 + 0.81) / v2 * rs.rho[i]) < 1e-14);
  }

  // The reduced matrix is a row scaling of T.
  const SpectralPoint sp{cplx(0.4, 3.0), -1.7};
  const auto T2 = build_T(d, sp);
  const auto R = reduced_matrix(d, sp);
  const double alpha = d.alpha();
  CHECK((R.row(0) - T2.row(0)).norm() < 1e-14);
  CHECK((R.row(1) - alpha * T2.row(1)).norm() < 1e-13);
  CHECK((R.row(2) + T2.row(2)).norm() < 1e-13);
}

TEST_CASE("reduced determinant") {
  const auto ref = reduced_det(kSymmetric, {1.0, 0.0});
  CHECK(std::abs(std::abs(ref.det_direct) - 1.5 * kSqrt3) < 1e-12);
  CHECK(std::abs(ref.det_direct.imag()) < 1e-14);
  CHECK(ref.match);
  CHECK(determinant_sign() == -1.0);

  const auto d = JunctionSymbolData::from_lemma(0.7, 0.3);
  const auto r1 = reduced_det(d, {0.8, 0.0});
  const auto r2 = reduced_det(d, {1.6, 0.0});
  CHECK(std::abs(r1.det_direct.imag()) < 1e-13);
  CHECK(std::abs(r2.det_direct) == doctest::Approx(2 * std::abs(r1.det_direct)).epsilon(1e-12));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 300; ++k) {
    const double lambda = 2 * u(rng);
    const auto dk = JunctionSymbolData::from_lemma(lambda, 0.99 * u(rng) * std::sqrt(1 + lambda * lambda) / kSqrt3);
    const SpectralPoint sp{cplx(0.01 + 5 * (u(rng) + 1), 5 * u(rng)), 5 * u(rng)};
    const auto r = reduced_det(dk, sp);
    CHECK(r.match);
    CHECK(std::abs(r.det_trilinear - r.sign * r.det_direct) / r.det_modulus < 1e-10);
  }
}

TEST_CASE("region scan") {
  ScanSpec spec;
  spec.n = 11;
  const auto rep = scan_region(kSymmetric, spec);
  CHECK(rep.samples == 11 * 11 * 11);
  CHECK(rep.passed());
  CHECK(rep.max_root_residual < 1e-12);
  // The minimum sits at the smallest |Delta| on the grid: p = 0.1, xi = 0.
  CHECK(rep.min_det == doctest::Approx(1.5 * kSqrt3 * 0.1).epsilon(1e-10));
  CHECK(rep.argmin.xi == 0.0);
  const auto other = scan_region(JunctionSymbolData::from_lemma(0.7, 0.3), spec);
  CHECK(other.passed());
  CHECK(other.to_text().find("status=PASS") != std::string::npos);
}
