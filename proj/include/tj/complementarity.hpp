#pragma once

#include "tj/common.hpp"

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace tj {

using cplx = std::complex<double>;
using CVec2 = Eigen::Vector2cd;
using CMat3 = Eigen::Matrix3cd;

/// Frozen first-order data of the three sheets at one junction point, in the
/// coordinates (normal, tangent) of the interface.
struct JunctionSymbolData {
  double lambda0 = 0.0;
  std::array<double, 3> n0{};  // normal slopes
  std::array<double, 3> v0{};
  static constexpr std::array<double, 3> sigma{1.0, 1.0, -1.0};

  /// Data with sheet-3 normal slope a3, the other slopes from the 120-degree
  /// condition.
  static JunctionSymbolData from_lemma(double lambda0, double a3);
  double alpha() const { return std::sqrt(1.0 + lambda0 * lambda0); }
};

struct SpectralPoint {
  cplx p;
  double xi = 0.0;
};

/// |p| + |xi| > 0 and (1 + lambda0^2) Re p > -xi^2.
bool in_region(const JunctionSymbolData& d, const SpectralPoint& s);

struct MetricCoeffs {
  Mat2 lower;
  Mat2 upper;
};

/// Metric of sheet I in the (normal, tangent) coordinates and its inverse.
MetricCoeffs metric_coeffs(const JunctionSymbolData& d, int sheet);

struct RootSet {
  cplx delta;
  cplx sqrt_delta;  // Re > 0
  std::array<cplx, 3> rho;
  std::array<Vec2, 3> t;
  std::array<CVec2, 3> r;
  std::array<Vec2, 3> a;  // real parts of r (for real xi)
  CVec2 b;                // common imaginary part of r
};

/// Decaying roots of the indicial equation. Throws std::domain_error outside
/// the region.
RootSet indicial_roots(const JunctionSymbolData& d, const SpectralPoint& s);

/// Symbol matrix of the conjugation operator (first row 1 1 -1).
CMat3 build_T(const JunctionSymbolData& d, const SpectralPoint& s);

/// Matrix with rows (1, 1, -1), (t_I . r_I), (t_I^perp . r_I) using the
/// bilinear product.
CMat3 reduced_matrix(const JunctionSymbolData& d, const SpectralPoint& s);

struct DeterminantReport {
  cplx det_direct;
  cplx det_closed;        // -(3 sqrt3 / 2) Delta / (1 + lambda0^2), the printed form
  double det_modulus = 0.0;  // (3 sqrt3 / 2) |Delta| / (1 + lambda0^2)
  cplx det_trilinear;     // expansion through pairwise products of the r_I
  double sign = 0.0;      // global sign s with det_direct = s det_closed
  double mismatch = 0.0;  // | |det_direct| - det_modulus | / det_modulus
  double signed_mismatch = 0.0;  // |det_direct - s det_closed| / |det_closed|
  bool match = false;
};

/// Global sign between the direct determinant and the printed closed form,
/// measured once at the symmetric reference point.
double determinant_sign();

DeterminantReport reduced_det(const JunctionSymbolData& d, const SpectralPoint& s);

inline cplx bdot(const CVec2& x, const CVec2& y) { return x(0) * y(0) + x(1) * y(1); }
inline CVec2 cperp(const CVec2& x) { return CVec2(-x(1), x(0)); }

struct ScanSpec {
  double re_min = 0.1;
  double re_max = 10.0;
  double im_max = 10.0;
  double xi_max = 10.0;
  int n = 41;                 // samples per axis
  bool keep_points = false;
};

struct ScanRecord {
  SpectralPoint point;
  double det_abs = 0.0;
  double mismatch = 0.0;
};

struct ScanReport {
  int samples = 0;
  double min_det = 0.0;
  SpectralPoint argmin;
  double min_det_closed = 0.0;   // closed-form modulus at the argmin
  double max_mismatch = 0.0;
  double max_signed_mismatch = 0.0;
  double max_root_residual = 0.0;
  std::vector<ScanRecord> points;

  bool passed(double tol = 1e-9) const;
  std::string to_text() const;
};

/// Samples Re p log-spaced in [re_min, re_max], Im p and xi uniformly in the
/// symmetric intervals.
ScanReport scan_region(const JunctionSymbolData& d, const ScanSpec& spec = {});

}  // namespace tj
