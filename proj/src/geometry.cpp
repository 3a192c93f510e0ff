#include "tj/geometry.hpp"

#include "tj/field.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace tj {

namespace {

bool segments_cross(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  const double d1 = cross(p2 - p1, q1 - p1);
  const double d2 = cross(p2 - p1, q2 - p1);
  const double d3 = cross(q2 - q1, p1 - q1);
  const double d4 = cross(q2 - q1, p2 - q1);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 &&
         d4 != 0;
}

double wrap_parameter(double s) {
  const double two_pi = 2.0 * kPi;
  s = std::fmod(s, two_pi);
  return s < 0 ? s + two_pi : s;
}

}  // namespace

InterfaceCurve InterfaceCurve::from_points(std::span<const Vec2> points) {
  const int m = static_cast<int>(points.size());
  if (m < 16) {
    throw GeometryError("interface needs at least 16 samples, got " + std::to_string(m));
  }
  double diameter = 0.0;
  for (const auto& p : points) diameter = std::max(diameter, (p - points[0]).norm());
  for (int j = 0; j < m; ++j) {
    const int next = (j + 1) % m;
    if ((points[next] - points[j]).norm() <= 1e-12 * std::max(diameter, 1.0)) {
      throw GeometryError("repeated interface sample at node " + std::to_string(next), next);
    }
  }
  for (int j = 0; j < m; ++j) {
    for (int k = j + 2; k < m; ++k) {
      if (j == 0 && k == m - 1) continue;
      if (segments_cross(points[j], points[(j + 1) % m], points[k], points[(k + 1) % m])) {
        throw GeometryError("self-intersecting interface near node " + std::to_string(k), k);
      }
    }
  }

  double area2 = 0.0;
  for (int j = 0; j < m; ++j) area2 += cross(points[j], points[(j + 1) % m]);

  InterfaceCurve c;
  c.points_.assign(points.begin(), points.end());
  if (area2 < 0) {
    std::reverse(c.points_.begin(), c.points_.end());
    c.reversed_ = true;
  }
  c.finish();
  return c;
}

InterfaceCurve InterfaceCurve::star(std::span<const double> radii) {
  const int m = static_cast<int>(radii.size());
  std::vector<Vec2> pts(m);
  for (int j = 0; j < m; ++j) {
    if (!(radii[j] > 0)) throw GeometryError("star-shaped interface needs positive radii", j);
    const double th = node_parameter(j, m);
    pts[j] = radii[j] * Vec2(std::cos(th), std::sin(th));
  }
  return from_points(pts);
}

void InterfaceCurve::finish() {
  const int m = size();
  std::vector<double> xs(m), ys(m);
  for (int j = 0; j < m; ++j) {
    xs[j] = points_[j].x();
    ys[j] = points_[j].y();
  }
  x_ = PeriodicInterpolant(xs);
  y_ = PeriodicInterpolant(ys);

  tangents_.resize(m);
  normals_.resize(m);
  curvature_.resize(m);
  speed_.resize(m);
  length_ = 0.0;
  for (int j = 0; j < m; ++j) {
    const Frame f = frame_at(node_parameter(j, m));
    tangents_[j] = f.tangent;
    normals_[j] = f.normal;
    curvature_[j] = f.curvature;
    speed_[j] = f.speed;
    length_ += f.speed * 2.0 * kPi / m;
  }

  // Reach: smallest radius of curvature, and half the shortest chord whose
  // endpoints are far apart along the curve (arc >= pi/2 * chord, which is
  // met only by the diameter on a circle).
  double reach = std::numeric_limits<double>::infinity();
  for (double k : curvature_) {
    if (std::abs(k) > 0) reach = std::min(reach, 1.0 / std::abs(k));
  }
  std::vector<double> arc(m + 1, 0.0);
  for (int j = 0; j < m; ++j) {
    arc[j + 1] = arc[j] + 0.5 * (speed_[j] + speed_[(j + 1) % m]) * 2.0 * kPi / m;
  }
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const double along = std::min(arc[j] - arc[i], length_ - (arc[j] - arc[i]));
      const double chord = (points_[j] - points_[i]).norm();
      if (along >= 0.5 * kPi * chord * (1.0 - 1e-6)) reach = std::min(reach, 0.5 * chord);
    }
  }
  reach_ = reach;
}

InterfaceCurve::Frame InterfaceCurve::frame_at(double s) const {
  const auto jx = x_.eval(s);
  const auto jy = y_.eval(s);
  const Vec2 d1(jx.d1, jy.d1);
  const Vec2 d2(jx.d2, jy.d2);
  Frame f;
  f.point = Vec2(jx.value, jy.value);
  f.speed = d1.norm();
  f.tangent = d1 / f.speed;
  f.normal = perp(f.tangent);
  f.curvature = cross(d1, d2) / (f.speed * f.speed * f.speed);
  return f;
}

InterfaceCurve::ClosestPoint InterfaceCurve::closest_point(const Vec2& x) const {
  const int m = size();
  int best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (int j = 0; j < m; ++j) {
    const double d2 = (points_[j] - x).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = j;
    }
  }
  const double h = 2.0 * kPi / m;
  double s = node_parameter(best, m);
  for (int it = 0; it < 50; ++it) {
    const auto jx = x_.eval(s);
    const auto jy = y_.eval(s);
    const Vec2 c(jx.value, jy.value), d1(jx.d1, jy.d1), d2(jx.d2, jy.d2);
    const double g = (c - x).dot(d1);
    const double gp = d1.squaredNorm() + (c - x).dot(d2);
    double ds = gp > 0 ? -g / gp : -g / d1.squaredNorm();
    ds = std::clamp(ds, -h, h);
    s += ds;
    if (std::abs(ds) < 1e-15) break;
  }
  s = wrap_parameter(s);
  // Snap to a node when the foot is a node up to round-off, so node data
  // are reproduced exactly.
  const int nearest = static_cast<int>(std::lround(s / h)) % m;
  if (std::abs(s - nearest * h) < 1e-11 || std::abs(s - 2.0 * kPi) < 1e-11) {
    s = node_parameter(nearest, m);
  }

  const Frame f = frame_at(s);
  ClosestPoint out;
  out.parameter = s;
  out.foot = f.point;
  out.distance = (x - f.point).norm();
  out.signed_distance = (x - f.point).dot(f.normal) >= 0 ? out.distance : -out.distance;
  out.in_tube = out.distance < reach_;
  return out;
}

std::vector<double> InterfaceCurve::arclength_derivative(std::span<const double> values) const {
  if (static_cast<int>(values.size()) != size()) {
    throw std::invalid_argument("arclength_derivative: size mismatch");
  }
  const PeriodicInterpolant f(values);
  std::vector<double> d = f.node_derivative(1);
  for (int j = 0; j < size(); ++j) d[j] /= speed_[j];
  return d;
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kRamp = 0.25;  // fraction of the transition used by each slope ramp

double smoothstep5(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }
double smoothstep5_d(double t) { return 30.0 * t * t * (1.0 - t) * (1.0 - t); }
double smoothstep5_int(double t) { return t * t * t * t * (2.5 + t * (-3.0 + t)); }

// Normalized slope density on [0, 1] and its integral and derivative.
double slope_density(double t) {
  const double peak = 1.0 / (1.0 - kRamp);
  if (t <= 0 || t >= 1) return 0.0;
  if (t < kRamp) return peak * smoothstep5(t / kRamp);
  if (t > 1.0 - kRamp) return peak * smoothstep5((1.0 - t) / kRamp);
  return peak;
}
double slope_density_d(double t) {
  const double peak = 1.0 / (1.0 - kRamp);
  if (t <= 0 || t >= 1) return 0.0;
  if (t < kRamp) return peak * smoothstep5_d(t / kRamp) / kRamp;
  if (t > 1.0 - kRamp) return -peak * smoothstep5_d((1.0 - t) / kRamp) / kRamp;
  return 0.0;
}
double slope_cumulative(double t) {
  const double peak = 1.0 / (1.0 - kRamp);
  if (t <= 0) return 0.0;
  if (t >= 1) return 1.0;
  if (t < kRamp) return peak * kRamp * smoothstep5_int(t / kRamp);
  if (t > 1.0 - kRamp) return 1.0 - slope_cumulative(1.0 - t);
  return peak * (0.5 * kRamp + (t - kRamp));
}

}  // namespace

CutoffProfile::CutoffProfile(double inner, double outer) : inner_(inner), outer_(outer) {
  if (!(inner > 0 && outer > inner)) throw std::invalid_argument("CutoffProfile: need 0 < inner < outer");
}

double CutoffProfile::value(double r) const {
  const double t = (std::abs(r) - inner_) / (outer_ - inner_);
  return 1.0 - slope_cumulative(t);
}

double CutoffProfile::d1(double r) const {
  const double w = outer_ - inner_;
  const double t = (std::abs(r) - inner_) / w;
  const double sign = r < 0 ? -1.0 : 1.0;
  return -sign * slope_density(t) / w;
}

double CutoffProfile::d2(double r) const {
  const double w = outer_ - inner_;
  const double t = (std::abs(r) - inner_) / w;
  return -slope_density_d(t) / (w * w);
}

double CutoffProfile::max_slope() const { return 1.0 / ((1.0 - kRamp) * (outer_ - inner_)); }

// ---------------------------------------------------------------------------

TubularData::TubularData(std::shared_ptr<const InterfaceCurve> curve) : curve_(std::move(curve)) {
  const double rbar = curve_->reach();
  r0_ = std::min(rbar / 2.0, 0.5);
  zeta_ = CutoffProfile(r0_ / 2.0, r0_);
  chi_ = CutoffProfile(r0_, std::min(2.0 * r0_, rbar));
}

double TubularData::signed_distance(const Vec2& x) const {
  const auto cp = curve_->closest_point(x);
  if (!cp.in_tube) {
    std::ostringstream os;
    os << "outside tubular neighborhood at (" << x.x() << ", " << x.y() << ")";
    throw GeometryError(os.str());
  }
  return cp.signed_distance;
}

double TubularData::zeta(const Vec2& x) const {
  const auto cp = curve_->closest_point(x);
  return cp.in_tube ? zeta_.value(cp.signed_distance) : 0.0;
}

double TubularData::chi(const Vec2& x) const {
  const auto cp = curve_->closest_point(x);
  return cp.in_tube ? chi_.value(cp.signed_distance) : 0.0;
}

double TubularData::normal_derivative_of_zeta(const Vec2& x) const {
  const auto cp = curve_->closest_point(x);
  return cp.in_tube ? zeta_.d1(cp.signed_distance) : 0.0;
}

Vec2 TubularData::nu_bar(const Vec2& x) const {
  const auto cp = curve_->closest_point(x);
  if (!cp.in_tube) return Vec2::Zero();
  return zeta_.value(cp.signed_distance) * curve_->frame_at(cp.parameter).normal;
}

Mat2 TubularData::nu_bar_jacobian(const Vec2& x) const {
  const auto cp = curve_->closest_point(x);
  if (!cp.in_tube) return Mat2::Zero();
  const auto f = curve_->frame_at(cp.parameter);
  const double r = cp.signed_distance;
  // D^2 r = -k / (1 - k r) tau tau^T
  const Mat2 hess_r = -f.curvature / (1.0 - f.curvature * r) * f.tangent * f.tangent.transpose();
  return zeta_.d1(r) * f.normal * f.normal.transpose() + zeta_.value(r) * hess_r;
}

// ---------------------------------------------------------------------------

ScalarExtension::ScalarExtension(std::shared_ptr<const TubularData> tube,
                                 std::vector<double> node_values, ExtensionKind kind)
    : tube_(std::move(tube)), kind_(kind) {
  if (static_cast<int>(node_values.size()) != tube_->curve().size()) {
    throw std::invalid_argument("ScalarExtension: one value per interface node required");
  }
  for (std::size_t j = 0; j < node_values.size(); ++j) {
    if (!std::isfinite(node_values[j])) {
      throw std::invalid_argument("ScalarExtension: non-finite value at node " + std::to_string(j));
    }
  }
  interp_ = PeriodicInterpolant(node_values);
}

ScalarExtension::Jet ScalarExtension::jet(const Vec2& x) const {
  Jet out;
  const auto& curve = tube_->curve();
  const auto cp = curve.closest_point(x);
  if (!cp.in_tube) return out;
  const auto& profile = kind_ == ExtensionKind::Tilde ? tube_->zeta_profile() : tube_->chi_profile();
  const double r = cp.signed_distance;
  const double cut = profile.value(r);
  if (cut == 0.0 && profile.d1(r) == 0.0) return out;
  const auto f = curve.frame_at(cp.parameter);
  const auto fj = interp_.eval(cp.parameter);
  out.value = cut * fj.value;
  const double d_along = fj.d1 / (f.speed * (1.0 - f.curvature * r));
  out.gradient = profile.d1(r) * fj.value * f.normal + cut * d_along * f.tangent;
  return out;
}

ScalarExtension extend_tilde(std::shared_ptr<const TubularData> tube, std::vector<double> rho) {
  return ScalarExtension(std::move(tube), std::move(rho), ExtensionKind::Tilde);
}

ScalarExtension extend_hat(std::shared_ptr<const TubularData> tube, std::vector<double> f) {
  return ScalarExtension(std::move(tube), std::move(f), ExtensionKind::Hat);
}

ScalarExtension restrict_extend(std::shared_ptr<const TubularData> tube, const GraphField& field) {
  const auto& curve = tube->curve();
  std::vector<double> values(curve.size());
  for (int j = 0; j < curve.size(); ++j) {
    try {
      values[j] = field.jet(curve.point(j)).value;
    } catch (const DomainError& e) {
      throw DomainError(std::string("restrict_extend: field not evaluable on interface: ") + e.what());
    }
  }
  return extend_tilde(std::move(tube), std::move(values));
}

// ---------------------------------------------------------------------------

Diffeo::Diffeo(ScalarExtension offset) : offset_(std::move(offset)) {
  if (offset_.kind() != ExtensionKind::Tilde) {
    throw std::invalid_argument("Diffeo: offset must be a tilde extension");
  }
}

Vec2 Diffeo::map(const Vec2& x) const {
  return x + offset_(x) * offset_.tube().nu_bar(x);
}

Mat2 Diffeo::jacobian(const Vec2& x) const {
  const auto j = offset_.jet(x);
  const auto& tube = offset_.tube();
  return Mat2::Identity() + tube.nu_bar(x) * j.gradient.transpose() +
         j.value * tube.nu_bar_jacobian(x);
}

double Diffeo::zeta_bar(const Vec2& x) const {
  return 1.0 / (1.0 + 2.0 * offset_.tube().normal_derivative_of_zeta(x) * offset_(x));
}

Vec2 Diffeo::inverse(const Vec2& y) const {
  Vec2 x = y - offset_(y) * offset_.tube().nu_bar(y);
  for (int it = 0; it < 50; ++it) {
    const Vec2 res = map(x) - y;
    if (res.norm() < 1e-12) return x;
    x -= jacobian(x).partialPivLu().solve(res);
  }
  if ((map(x) - y).norm() < 1e-10) return x;
  throw GeometryError("Diffeo::inverse did not converge");
}

// ---------------------------------------------------------------------------

FrameActionNode frame_action_at(const Vec2& tangent, const Vec2& normal, double curvature,
                                double rho, double drho) {
  const double stretch = 1.0 - curvature * rho;
  if (!(stretch > 1e-12)) {
    throw GeometryError("interface left normal-graph regime");
  }
  const double s = std::sqrt(stretch * stretch + drho * drho);
  FrameActionNode out;
  out.a11 = 1.0 / s;
  out.a21 = -drho * out.a11 / stretch;
  out.a22 = s / stretch;
  out.tau_hat = out.a11 * tangent;
  out.mu = out.a21 * tangent + out.a22 * normal;
  out.n = (stretch * normal - drho * tangent) / s;
  out.tau = -perp(out.n);
  return out;
}

std::vector<FrameActionNode> diffeo_frame_action(const InterfaceCurve& curve,
                                                 std::span<const double> rho,
                                                 std::span<const double> drho) {
  const int m = curve.size();
  if (static_cast<int>(rho.size()) != m || static_cast<int>(drho.size()) != m) {
    throw std::invalid_argument("diffeo_frame_action: one value per node required");
  }
  std::vector<FrameActionNode> out(m);
  for (int j = 0; j < m; ++j) {
    try {
      out[j] = frame_action_at(curve.tangent(j), curve.normal(j), curve.curvature(j), rho[j], drho[j]);
    } catch (const GeometryError&) {
      throw GeometryError("interface left normal-graph regime at node " + std::to_string(j), j);
    }
  }
  return out;
}

}  // namespace tj
