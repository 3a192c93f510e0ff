#include "tj/complementarity.hpp"

#include "tj/configuration.hpp"

#include <iomanip>
#include <sstream>

namespace tj {

JunctionSymbolData JunctionSymbolData::from_lemma(double lambda0, double a3) {
  const auto j = junction_from_lemma(lambda0, a3);
  JunctionSymbolData d;
  d.lambda0 = lambda0;
  d.n0 = j.a;
  d.v0 = j.v;
  return d;
}

bool in_region(const JunctionSymbolData& d, const SpectralPoint& s) {
  const double l2 = 1.0 + d.lambda0 * d.lambda0;
  return std::abs(s.p) + std::abs(s.xi) > 0 && l2 * s.p.real() > -s.xi * s.xi;
}

MetricCoeffs metric_coeffs(const JunctionSymbolData& d, int sheet) {
  const double n = d.n0[sheet], l = d.lambda0, v2 = d.v0[sheet] * d.v0[sheet];
  MetricCoeffs m;
  m.lower << 1.0 + n * n, l * n, l * n, 1.0 + l * l;
  m.upper << (1.0 + l * l) / v2, -l * n / v2, -l * n / v2, (1.0 + n * n) / v2;
  return m;
}

RootSet indicial_roots(const JunctionSymbolData& d, const SpectralPoint& s) {
  if (!in_region(d, s)) throw std::domain_error("spectral point outside the admissible region");
  const double l = d.lambda0;
  const double l2 = 1.0 + l * l;
  const double alpha = std::sqrt(l2);
  RootSet rs;
  rs.delta = s.xi * s.xi + s.p * l2;
  if (rs.delta.real() <= 0 && rs.delta.imag() == 0) {
    throw std::logic_error("indicial_roots: Delta on the branch cut inside the region");
  }
  rs.sqrt_delta = std::sqrt(rs.delta);  // principal branch, Re > 0 off the cut
  rs.b = CVec2(rs.sqrt_delta / alpha, 0.0);
  for (int i = 0; i < 3; ++i) {
    const double sg = JunctionSymbolData::sigma[i];
    const double n = d.n0[i], v = d.v0[i];
    rs.rho[i] = v / l2 * (sg * l * n / v * s.xi + cplx(0, 1) * rs.sqrt_delta);
    rs.t[i] = Vec2(n, alpha) / v;
    rs.r[i] = CVec2(alpha * rs.rho[i], l * sg * s.xi) / v;
    rs.a[i] = sg * l * s.xi / v * Vec2(n / alpha, 1.0);
  }
  return rs;
}

CMat3 build_T(const JunctionSymbolData& d, const SpectralPoint& s) {
  const auto rs = indicial_roots(d, s);
  const double l = d.lambda0;
  CMat3 T;
  for (int i = 0; i < 3; ++i) {
    const double sg = JunctionSymbolData::sigma[i];
    const double n = d.n0[i], v2 = d.v0[i] * d.v0[i];
    T(0, i) = sg;
    T(1, i) = n / v2 * rs.rho[i] + sg * l / v2 * s.xi;
    T(2, i) = (1.0 + l * l) / v2 * rs.rho[i] - sg * l * n / v2 * s.xi;
  }
  return T;
}

CMat3 reduced_matrix(const JunctionSymbolData& d, const SpectralPoint& s) {
  const auto rs = indicial_roots(d, s);
  CMat3 M;
  for (int i = 0; i < 3; ++i) {
    const CVec2 t = rs.t[i].cast<cplx>();
    M(0, i) = JunctionSymbolData::sigma[i];
    M(1, i) = bdot(t, rs.r[i]);
    M(2, i) = bdot(cperp(t), rs.r[i]);
  }
  return M;
}

namespace {

cplx closed_form(const JunctionSymbolData& d, cplx delta) {
  return -1.5 * kSqrt3 * delta / (1.0 + d.lambda0 * d.lambda0);
}

}  // namespace

double determinant_sign() {
  static const double s = [] {
    const auto d = JunctionSymbolData::from_lemma(0.0, 0.0);
    const SpectralPoint ref{1.0, 0.0};
    const cplx det = reduced_matrix(d, ref).determinant();
    const cplx closed = closed_form(d, indicial_roots(d, ref).delta);
    return (det / closed).real() > 0 ? 1.0 : -1.0;
  }();
  return s;
}

DeterminantReport reduced_det(const JunctionSymbolData& d, const SpectralPoint& s) {
  const auto rs = indicial_roots(d, s);
  DeterminantReport rep;
  rep.det_direct = reduced_matrix(d, s).determinant();
  rep.det_closed = closed_form(d, rs.delta);
  rep.det_modulus = std::abs(rep.det_closed);
  const auto& r = rs.r;
  rep.det_trilinear = 0.5 * kSqrt3 * (bdot(r[0], r[2]) + bdot(r[1], r[2]) + bdot(r[0], r[1])) +
                      0.5 * (bdot(r[0], cperp(r[1])) + bdot(r[1], cperp(r[2])) +
                             bdot(r[2], cperp(r[0])));
  rep.sign = determinant_sign();
  rep.mismatch = std::abs(std::abs(rep.det_direct) - rep.det_modulus) / rep.det_modulus;
  rep.signed_mismatch = std::abs(rep.det_direct - rep.sign * rep.det_closed) / rep.det_modulus;
  rep.match = rep.mismatch <= 1e-10 && rep.signed_mismatch <= 1e-10;
  return rep;
}

bool ScanReport::passed(double tol) const {
  return samples > 0 && min_det > 0 && max_mismatch <= tol && max_signed_mismatch <= tol;
}

std::string ScanReport::to_text() const {
  std::ostringstream os;
  os << std::setprecision(12);
  for (const auto& rec : points) {
    os << "point re_p=" << rec.point.p.real() << " im_p=" << rec.point.p.imag()
       << " xi=" << rec.point.xi << " abs_det=" << rec.det_abs << " mismatch=" << rec.mismatch
       << '\n';
  }
  os << "summary samples=" << samples << " min_abs_det=" << min_det
     << " argmin_re_p=" << argmin.p.real() << " argmin_im_p=" << argmin.p.imag()
     << " argmin_xi=" << argmin.xi << " closed_form_at_argmin=" << min_det_closed
     << " max_mismatch=" << max_mismatch << " max_signed_mismatch=" << max_signed_mismatch
     << " max_root_residual=" << max_root_residual << " sign=" << determinant_sign()
     << " status=" << (passed() ? "PASS" : "FAIL") << '\n';
  return os.str();
}

ScanReport scan_region(const JunctionSymbolData& d, const ScanSpec& spec) {
  ScanReport rep;
  rep.min_det = std::numeric_limits<double>::infinity();
  const int n = spec.n;
  auto lin = [n](double lo, double hi, int k) { return lo + (hi - lo) * k / (n - 1); };
  for (int a = 0; a < n; ++a) {
    const double re = spec.re_min * std::pow(spec.re_max / spec.re_min, double(a) / (n - 1));
    for (int b = 0; b < n; ++b) {
      const double im = lin(-spec.im_max, spec.im_max, b);
      for (int c = 0; c < n; ++c) {
        const SpectralPoint sp{cplx(re, im), lin(-spec.xi_max, spec.xi_max, c)};
        if (!in_region(d, sp)) continue;
        const auto rs = indicial_roots(d, sp);
        for (int i = 0; i < 3; ++i) {
          const auto g = metric_coeffs(d, i).upper;
          const double sg = JunctionSymbolData::sigma[i];
          const cplx q1 = g(0, 0) * rs.rho[i] * rs.rho[i];
          const cplx q2 = 2.0 * sg * g(0, 1) * sp.xi * rs.rho[i];
          const cplx q3 = g(1, 1) * sp.xi * sp.xi;
          const double scale = std::max({std::abs(q1), std::abs(q2), std::abs(q3), std::abs(sp.p)});
          rep.max_root_residual =
              std::max(rep.max_root_residual, std::abs(q1 + q2 + q3 + sp.p) / scale);
        }
        const auto dr = reduced_det(d, sp);
        const double da = std::abs(dr.det_direct);
        ++rep.samples;
        rep.max_mismatch = std::max(rep.max_mismatch, dr.mismatch);
        rep.max_signed_mismatch = std::max(rep.max_signed_mismatch, dr.signed_mismatch);
        if (da < rep.min_det) {
          rep.min_det = da;
          rep.argmin = sp;
          rep.min_det_closed = dr.det_modulus;
        }
        if (spec.keep_points) rep.points.push_back({sp, da, dr.mismatch});
      }
    }
  }
  return rep;
}

}  // namespace tj
