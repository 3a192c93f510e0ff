#include "tj/field.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace tj {

namespace {

std::string where(const Vec2& x) {
  std::ostringstream os;
  os << "(" << x.x() << ", " << x.y() << ")";
  return os.str();
}

// Blend used by the inner grid map: 0 on [0, 1/4], rising to 1 at y = 1.
constexpr double kBlendStart = 0.25;

std::array<double, 3> blend(double y) {
  if (y <= kBlendStart) return {0.0, 0.0, 0.0};
  const double w = 1.0 - kBlendStart;
  const double t = (y - kBlendStart) / w;
  const double s = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
  const double ds = 30.0 * t * t * (1.0 - t) * (1.0 - t) / w;
  const double dds = (60.0 * t - 180.0 * t * t + 120.0 * t * t * t) / (w * w);
  return {s, ds, dds};
}

std::array<double, 4> lagrange4(double q) {
  // Nodes at 0, 1, 2, 3; q is the fractional position.
  return {-(q - 1) * (q - 2) * (q - 3) / 6.0, q * (q - 2) * (q - 3) / 2.0,
          -q * (q - 1) * (q - 3) / 2.0, q * (q - 1) * (q - 2) / 6.0};
}

}  // namespace

FieldJet radial_jet(const Vec2& x, const std::array<double, 3>& p) {
  FieldJet out;
  out.value = p[0];
  const double r = x.norm();
  if (r < 1e-14) {
    out.hess = p[2] * Mat2::Identity();
    return out;
  }
  const Vec2 e = x / r;
  const Mat2 ee = e * e.transpose();
  out.grad = p[1] * e;
  out.hess = p[2] * ee + (p[1] / r) * (Mat2::Identity() - ee);
  return out;
}

FunctionField FunctionField::radial(DomainTag tag,
                                    std::function<std::array<double, 3>(double)> profile,
                                    InsideFn inside) {
  return FunctionField(
      tag, [profile = std::move(profile)](const Vec2& x) { return radial_jet(x, profile(x.norm())); },
      std::move(inside));
}

FieldJet FunctionField::jet(const Vec2& x) const {
  if (inside_ && !inside_(x)) throw DomainError("field evaluated outside its domain at " + where(x));
  return fn_(x);
}

// ---------------------------------------------------------------------------

PolarGrid::PolarGrid(DomainTag tag, int n, std::vector<double> interface_radii, double outer_radius)
    : tag_(tag), n_(n), m_(static_cast<int>(interface_radii.size())), outer_radius_(outer_radius) {
  if (n_ < 6) throw std::invalid_argument("PolarGrid: need at least 6 radial nodes");
  if (m_ < 8 || m_ % 2 != 0) throw std::invalid_argument("PolarGrid: angular count must be even and >= 8");
  mean_radius_ = std::accumulate(interface_radii.begin(), interface_radii.end(), 0.0) / m_;
  for (int j = 0; j < m_; ++j) {
    const double r = interface_radii[j];
    if (!(r > 0)) throw GeometryError("PolarGrid: nonpositive interface radius", j);
    if (tag_ == DomainTag::Inner && std::abs(r - mean_radius_) >= 0.4 * mean_radius_) {
      throw GeometryError("PolarGrid: interface too far from a circle for the inner grid map", j);
    }
    if (tag_ == DomainTag::Outer && !(r < outer_radius_)) {
      throw GeometryError("PolarGrid: interface meets the outer boundary", j);
    }
  }
  hy_ = tag_ == DomainTag::Inner ? 1.0 / (n_ - 0.5) : 1.0 / (n_ - 1);
  radii_ = PeriodicInterpolant(interface_radii);
}

double PolarGrid::y(int i) const {
  return tag_ == DomainTag::Inner ? (i + 0.5) * hy_ : 1.0 + i * hy_;
}

MapJet PolarGrid::map(double y, double theta) const {
  const auto R = radii_.eval(theta);
  double r, ry, ryy, rt, ryt, rtt;
  if (tag_ == DomainTag::Inner) {
    const auto s = blend(y);
    const double dev = R.value - mean_radius_;
    r = y * mean_radius_ + s[0] * dev;
    ry = mean_radius_ + s[1] * dev;
    ryy = s[2] * dev;
    rt = s[0] * R.d1;
    ryt = s[1] * R.d1;
    rtt = s[0] * R.d2;
  } else {
    r = R.value * (2.0 - y) + (y - 1.0) * outer_radius_;
    ry = outer_radius_ - R.value;
    ryy = 0.0;
    rt = (2.0 - y) * R.d1;
    ryt = -R.d1;
    rtt = (2.0 - y) * R.d2;
  }
  const Vec2 e(std::cos(theta), std::sin(theta));
  const Vec2 ep = perp(e);
  MapJet mj;
  mj.x = r * e;
  mj.jac.col(0) = ry * e;
  mj.jac.col(1) = rt * e + r * ep;
  mj.xyy = ryy * e;
  mj.xyt = ryt * e + ry * ep;
  mj.xtt = rtt * e + 2.0 * rt * ep - r * e;
  return mj;
}

std::pair<double, double> PolarGrid::locate(const Vec2& x) const {
  double theta = std::atan2(x.y(), x.x());
  if (theta < 0) theta += 2.0 * kPi;
  const double r = x.norm();
  const double R = radii_.value(theta);
  const double tol = 1e-9 * std::max(1.0, outer_radius_);
  if (tag_ == DomainTag::Inner) {
    if (r > R + tol) throw DomainError("point outside inner domain at " + where(x));
    if (r >= R) return {1.0, theta};
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double rm = mid * mean_radius_ + blend(mid)[0] * (R - mean_radius_);
      (rm < r ? lo : hi) = mid;
    }
    return {0.5 * (lo + hi), theta};
  }
  if (r < R - tol || r > outer_radius_ + tol) {
    throw DomainError("point outside outer domain at " + where(x));
  }
  const double y = 1.0 + (r - R) / (outer_radius_ - R);
  return {std::clamp(y, 1.0, 2.0), theta};
}

// ---------------------------------------------------------------------------

FieldJet cartesian_jet(const MapJet& mj, const std::array<double, 6>& d) {
  const Mat2 jinv = mj.jac.inverse();
  FieldJet out;
  out.value = d[0];
  out.grad = jinv.transpose() * Vec2(d[1], d[2]);
  Mat2 h;
  h << d[3], d[4], d[4], d[5];
  for (int k = 0; k < 2; ++k) {
    Mat2 xk;
    xk << mj.xyy[k], mj.xyt[k], mj.xyt[k], mj.xtt[k];
    h -= out.grad[k] * xk;
  }
  out.hess = jinv.transpose() * h * jinv;
  return out;
}

PolarGridField::PolarGridField(std::shared_ptr<const PolarGrid> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_->nr() * grid_->nt()) {
    throw std::invalid_argument("PolarGridField: value count does not match grid");
  }
}

double PolarGridField::at(int i, int j) const {
  if (i < 0) {
    // Across the origin: (-y, theta) is the node (y, theta + pi).
    return values_[grid_->index(-1 - i, j + grid_->nt() / 2)];
  }
  return values_[grid_->index(i, j)];
}

double PolarGridField::dy(int i, int j, int order) const {
  const int n = grid_->nr();
  const double h = grid_->hy();
  const bool inner = grid_->tag() == DomainTag::Inner;
  int sigma = 0;  // +1: backward one-sided, -1: forward one-sided
  if (i == n - 1) sigma = 1;
  if (!inner && i == 0) sigma = -1;
  if (sigma == 0) return (at(i + 1, j) - at(i - 1, j)) / (2.0 * h);
  auto f = [&](int k) { return at(i - sigma * k, j); };
  if (order == 4 && i == grid_->interface_row()) {
    return sigma * (25.0 * f(0) - 48.0 * f(1) + 36.0 * f(2) - 16.0 * f(3) + 3.0 * f(4)) / (12.0 * h);
  }
  return sigma * (3.0 * f(0) - 4.0 * f(1) + f(2)) / (2.0 * h);
}

double PolarGridField::dyy(int i, int j, int order) const {
  const int n = grid_->nr();
  const double h = grid_->hy();
  const bool inner = grid_->tag() == DomainTag::Inner;
  int sigma = 0;
  if (i == n - 1) sigma = 1;
  if (!inner && i == 0) sigma = -1;
  if (sigma == 0) return (at(i + 1, j) - 2.0 * at(i, j) + at(i - 1, j)) / (h * h);
  auto f = [&](int k) { return at(i - sigma * k, j); };
  if (order == 4 && i == grid_->interface_row()) {
    return (45.0 * f(0) - 154.0 * f(1) + 214.0 * f(2) - 156.0 * f(3) + 61.0 * f(4) - 10.0 * f(5)) /
           (12.0 * h * h);
  }
  return (2.0 * f(0) - 5.0 * f(1) + 4.0 * f(2) - f(3)) / (h * h);
}

std::array<double, 6> PolarGridField::node_derivatives(int i, int j, int order) const {
  const double ht = grid_->ht();
  const bool high = order == 4 && i == grid_->interface_row();
  std::array<double, 6> d{};
  d[0] = at(i, j);
  d[1] = dy(i, j, order);
  d[3] = dyy(i, j, order);
  if (high) {
    auto f = [&](int k) { return at(i, j + k); };
    auto g = [&](int k) { return dy(i, j + k, order); };
    d[2] = (-f(2) + 8.0 * f(1) - 8.0 * f(-1) + f(-2)) / (12.0 * ht);
    d[4] = (-g(2) + 8.0 * g(1) - 8.0 * g(-1) + g(-2)) / (12.0 * ht);
    d[5] = (-f(2) + 16.0 * f(1) - 30.0 * f(0) + 16.0 * f(-1) - f(-2)) / (12.0 * ht * ht);
  } else {
    d[2] = (at(i, j + 1) - at(i, j - 1)) / (2.0 * ht);
    d[4] = (dy(i, j + 1, order) - dy(i, j - 1, order)) / (2.0 * ht);
    d[5] = (at(i, j + 1) - 2.0 * d[0] + at(i, j - 1)) / (ht * ht);
  }
  return d;
}

FieldJet PolarGridField::node_jet(int i, int j, int order) const {
  return cartesian_jet(grid_->map(grid_->y(i), grid_->theta(j)), node_derivatives(i, j, order));
}

FieldJet PolarGridField::jet(const Vec2& x) const {
  const auto& g = *grid_;
  const int n = g.nr();
  const int m = g.nt();
  auto [y, theta] = g.locate(x);
  const bool inner = g.tag() == DomainTag::Inner;
  if (inner && y < 1e-9) {
    // The polar chart degenerates at the origin; evaluate just beside it.
    y = 1e-6;
  }

  const double qy = inner ? y / g.hy() - 0.5 : (y - 1.0) / g.hy();
  const int i0 = std::clamp(static_cast<int>(std::floor(qy)) - 1, inner ? -2 : 0, n - 4);
  const double qt = theta / g.ht();
  const int j0 = static_cast<int>(std::floor(qt)) - 1;
  const auto wy = lagrange4(qy - i0);
  const auto wt = lagrange4(qt - j0);

  std::array<double, 6> d{};
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const int i = i0 + a;
      const int j = j0 + b;
      std::array<double, 6> nd;
      if (i < 0) {
        nd = node_derivatives(-1 - i, j + m / 2);
        nd[1] = -nd[1];
        nd[4] = -nd[4];
      } else {
        nd = node_derivatives(i, j);
      }
      const double w = wy[a] * wt[b];
      for (int k = 0; k < 6; ++k) d[k] += w * nd[k];
    }
  }
  return cartesian_jet(g.map(y, theta), d);
}

}  // namespace tj
