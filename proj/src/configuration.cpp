#include "tj/configuration.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <sstream>

namespace tj {

double mean_curvature(const FieldJet& j) {
  const double v2 = 1.0 + j.grad.squaredNorm();
  const Mat2 ginv = Mat2::Identity() - j.grad * j.grad.transpose() / v2;
  return (ginv.cwiseProduct(j.hess)).sum() / std::sqrt(v2);
}

double mean_curvature(const GraphField& field, const Vec2& x) {
  try {
    return mean_curvature(field.jet(x));
  } catch (const DomainError& e) {
    std::ostringstream os;
    os << "mean curvature stencil leaves the domain at (" << x.x() << ", " << x.y() << "): "
       << e.what();
    throw DomainError(os.str());
  }
}

double trace_g_hessian(const FieldJet& j) {
  return mean_curvature(j) * std::sqrt(1.0 + j.grad.squaredNorm());
}

JunctionPointData JunctionPointData::from_slopes(double lambda0, const std::array<double, 3>& a,
                                                 const std::array<double, 3>& H) {
  JunctionPointData j;
  j.lambda0 = lambda0;
  j.a = a;
  j.H = H;
  j.vE = std::sqrt(1.0 + lambda0 * lambda0);
  for (int i = 0; i < 3; ++i) j.v[i] = std::sqrt(1.0 + lambda0 * lambda0 + a[i] * a[i]);
  return j;
}

void JunctionPointData::check() const {
  if (std::abs(vE - std::sqrt(1.0 + lambda0 * lambda0)) > 1e-12 * vE) {
    throw JunctionError("junction data: vE inconsistent with lambda0");
  }
  for (int i = 0; i < 3; ++i) {
    if (std::abs(v[i] - std::sqrt(1.0 + lambda0 * lambda0 + a[i] * a[i])) > 1e-12 * v[i]) {
      throw JunctionError("junction data: v inconsistent with slopes for sheet " +
                          std::to_string(i + 1));
    }
  }
}

Lemma12Slopes lemma12_solve(double alpha, double a3) {
  if (!(alpha > 0)) throw JunctionError("lemma12_solve: alpha must be positive");
  if (std::abs(a3) >= alpha / kSqrt3) throw JunctionError("no admissible junction slopes");
  Lemma12Slopes s;
  s.v3 = std::sqrt(alpha * alpha + a3 * a3);
  const double inv_v1 = (0.5 + kSqrt3 * a3 / (2.0 * alpha)) / s.v3;
  const double inv_v2 = (0.5 - kSqrt3 * a3 / (2.0 * alpha)) / s.v3;
  const double q1 = a3 / (2.0 * s.v3) - kSqrt3 * alpha / (2.0 * s.v3);  // a1 / v1
  const double q2 = a3 / (2.0 * s.v3) + kSqrt3 * alpha / (2.0 * s.v3);  // a2 / v2
  s.v1 = 1.0 / inv_v1;
  s.v2 = 1.0 / inv_v2;
  s.a1 = q1 * s.v1;
  s.a2 = q2 * s.v2;
  return s;
}

JunctionPointData junction_from_lemma(double lambda0, double a3, const std::array<double, 3>& H) {
  const double alpha = std::sqrt(1.0 + lambda0 * lambda0);
  const auto s = lemma12_solve(alpha, a3);
  JunctionPointData j;
  j.lambda0 = lambda0;
  j.a = {s.a1, s.a2, a3};
  j.v = {s.v1, s.v2, s.v3};
  j.vE = alpha;
  j.H = H;
  return j;
}

std::pair<Vec2, Vec2> rotation_form(const Vec2& omega3) {
  return {rotation(kPi / 3.0) * omega3, rotation(5.0 * kPi / 3.0) * omega3};
}

namespace {

Vec3 lift(const Vec2& p, double z) { return {p.x(), p.y(), z}; }

}  // namespace

JunctionFrames frame_vectors(const JunctionPointData& j, const Vec2& tau, const Vec2& n) {
  JunctionFrames f;
  f.E = lift(tau, j.lambda0) / j.vE;
  for (int i = 0; i < 3; ++i) {
    const Vec2 dw = j.lambda0 * tau + j.a[i] * n;
    f.N[i] = lift(-dw, 1.0) / j.v[i];
    f.T[i] = f.E.cross(f.N[i]);
  }
  return f;
}

Vec3 conormal_closed_form(const JunctionPointData& j, int sheet, const Vec2& tau, const Vec2& n) {
  // Dw = lambda0 tau + a n, so (Dw)^perp = lambda0 n - a tau.
  const Vec2 dw_perp = j.lambda0 * n - j.a[sheet] * tau;
  return -lift(n + j.lambda0 * dw_perp, j.a[sheet]) / (j.v[sheet] * j.vE);
}

VelocityDecomposition velocity_decomposition(const JunctionPointData& j, const Vec2& adot,
                                             const Vec2& tau, const Vec2& n) {
  const double at = adot.dot(tau);
  const double an = adot.dot(n);
  VelocityDecomposition d;
  for (int i = 0; i < 3; ++i) {
    const double dw_adot = j.lambda0 * at + j.a[i] * an;
    d.mu[i] = -(j.v[i] * an + j.a[i] * j.H[i]) / j.vE;
    d.lambda[i] = (at + j.lambda0 * (dw_adot + j.v[i] * j.H[i])) / j.vE;
  }
  return d;
}

Eigen::Matrix<double, 6, 4> relations_system(const JunctionPointData& j) {
  const auto& a = j.a;
  const auto& v = j.v;
  const double l = j.lambda0;
  Eigen::Matrix<double, 6, 4> A;
  A << 0.0, 1.0, 1.0, -1.0,                                      //
      v[0] + v[1] - v[2], a[0], a[1], -a[2],                     //
      -kSqrt3 * v[2] / j.vE, 1.0, -1.0, -kSqrt3 * a[2] / j.vE,   //
      v[0] - v[1], a[0], -a[1], kSqrt3 * j.vE,                   //
      l * (a[0] - a[2]), l * v[0], 0.0, -l * v[2],               //
      l * (a[1] - a[2]), 0.0, l * v[1], -l * v[2];
  return A;
}

RankReport relations_rank(const JunctionPointData& j) {
  const double angle1 = 1.0 / j.v[0] + 1.0 / j.v[1] - 1.0 / j.v[2];
  const double angle2 = j.a[0] / j.v[0] + j.a[1] / j.v[1] - j.a[2] / j.v[2];
  if (std::abs(angle1) > 1e-8 || std::abs(angle2) > 1e-8) {
    throw JunctionError("not a configuration point");
  }
  const auto A = relations_system(j);
  RankReport r;
  Eigen::JacobiSVD<Eigen::Matrix<double, 6, 4>> svd(A);
  r.singular_values = svd.singularValues();
  const double cutoff = 1e-9 * r.singular_values[0];
  for (int k = 0; k < 4; ++k) r.rank += r.singular_values[k] > cutoff ? 1 : 0;

  Eigen::Matrix<double, 4, 2> basis;
  basis.col(0) = A.row(0).transpose();
  basis.col(1) = A.row(2).transpose();
  const auto qr = basis.colPivHouseholderQr();
  for (int k = 0; k < 6; ++k) {
    const Eigen::Vector4d row = A.row(k).transpose();
    const Eigen::Vector2d c = qr.solve(row);
    const double res = (basis * c - row).norm() / std::max(1.0, row.norm());
    r.projection_residual = std::max(r.projection_residual, res);
  }
  return r;
}

double interface_normal_velocity(const JunctionPointData& j) {
  return j.vE / (j.v[2] * kSqrt3) * (j.H[0] - j.H[1]) - j.a[2] / j.v[2] * j.H[2];
}

double least_squares_normal_velocity(const JunctionPointData& j) {
  const auto A = relations_system(j);
  const Eigen::Vector3d h(j.H[0], j.H[1], j.H[2]);
  const Eigen::Matrix<double, 6, 1> c = A.col(0);
  const Eigen::Matrix<double, 6, 1> rhs = -A.rightCols<3>() * h;
  return c.dot(rhs) / c.squaredNorm();
}

// ---------------------------------------------------------------------------

double ResidualReport::max_abs(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw std::invalid_argument("ResidualReport: no column " + name);
  const auto col = static_cast<std::size_t>(it - names.begin());
  double m = 0.0;
  for (const auto& row : rows) m = std::max(m, std::abs(row[col]));
  return m;
}

double ResidualReport::max_abs() const {
  double m = 0.0;
  for (const auto& name : names) m = std::max(m, max_abs(name));
  return m;
}

std::string ResidualReport::to_text(const std::string& title) const {
  std::ostringstream os;
  os << std::setprecision(10);
  for (std::size_t j = 0; j < rows.size(); ++j) {
    os << title << " node " << j;
    for (std::size_t c = 0; c < names.size(); ++c) os << ' ' << names[c] << '=' << rows[j][c];
    os << '\n';
  }
  os << title << " max";
  for (const auto& name : names) os << ' ' << name << '=' << max_abs(name);
  os << '\n';
  return os.str();
}

JunctionPointData junction_at_node(const TripleConfig& config, int j) {
  const auto& curve = *config.interface;
  const Vec2 x = curve.point(j);
  const Vec2 tau = curve.tangent(j);
  const Vec2 n = curve.normal(j);
  std::array<double, 3> a{}, H{};
  double lambda = 0.0;
  for (int i = 0; i < 3; ++i) {
    const FieldJet fj = config.sheets[i]->jet(x);
    a[i] = fj.grad.dot(n);
    lambda += fj.grad.dot(tau) / 3.0;
    H[i] = mean_curvature(fj);
  }
  return JunctionPointData::from_slopes(lambda, a, H);
}

ResidualReport validate_order0(const TripleConfig& config) {
  ResidualReport rep;
  rep.names = {"bc0_12", "bc0_23", "bc1", "bc2", "ordering", "neumann"};
  const auto& curve = *config.interface;
  const int m = curve.size();
  for (int j = 0; j < m; ++j) {
    const Vec2 x = curve.point(j);
    std::vector<double> row(rep.names.size(), 0.0);
    try {
      std::array<double, 3> w{};
      for (int i = 0; i < 3; ++i) w[i] = config.sheets[i]->jet(x).value;
      const auto jd = junction_at_node(config, j);
      row[0] = w[0] - w[1];
      row[1] = w[1] - w[2];
      row[2] = 1.0 / jd.v[0] + 1.0 / jd.v[1] - 1.0 / jd.v[2];
      row[3] = jd.a[0] / jd.v[0] + jd.a[1] / jd.v[1] - jd.a[2] / jd.v[2];
      row[4] = std::max(0.0, jd.a[0] - jd.a[1]);
    } catch (const DomainError&) {
      std::fill(row.begin(), row.end() - 1, std::numeric_limits<double>::infinity());
    }
    const double th = node_parameter(j, m);
    const Vec2 e(std::cos(th), std::sin(th));
    try {
      row[5] = config.sheets[2]->jet(config.outer_radius * e).grad.dot(e);
    } catch (const DomainError&) {
      row[5] = std::numeric_limits<double>::infinity();
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

ResidualReport validate_order1(const TripleConfig& config) {
  ResidualReport rep;
  rep.names = {"curvature_sum"};
  const auto& curve = *config.interface;
  for (int j = 0; j < curve.size(); ++j) {
    double r;
    try {
      const auto jd = junction_at_node(config, j);
      r = jd.H[0] + jd.H[1] - jd.H[2];
    } catch (const DomainError&) {
      r = std::numeric_limits<double>::infinity();
    }
    rep.rows.push_back({r});
  }
  return rep;
}

}  // namespace tj
