#include "tj/periodic.hpp"

#include "tj/common.hpp"

#include <cmath>
#include <complex>

namespace tj {

PeriodicInterpolant::PeriodicInterpolant(std::span<const double> samples)
    : samples_(samples.begin(), samples.end()) {
  const int m = size();
  if (m < 2) throw std::invalid_argument("PeriodicInterpolant: need at least two samples");
  const int k_max = m / 2;
  cos_coef_.assign(k_max + 1, 0.0);
  sin_coef_.assign(k_max + 1, 0.0);
  for (int k = 0; k <= k_max; ++k) {
    double a = 0.0, b = 0.0;
    for (int j = 0; j < m; ++j) {
      const double arg = node_parameter((k * j) % m, m);
      a += samples_[j] * std::cos(arg);
      b += samples_[j] * std::sin(arg);
    }
    const bool edge = (k == 0) || (m % 2 == 0 && k == k_max);
    const double scale = edge ? 1.0 / m : 2.0 / m;
    cos_coef_[k] = a * scale;
    sin_coef_[k] = edge ? 0.0 : b * scale;
  }
}

PeriodicInterpolant::Jet PeriodicInterpolant::eval(double s) const {
  Jet out;
  out.value = cos_coef_[0];
  const std::complex<double> step(std::cos(s), std::sin(s));
  std::complex<double> phase = step;
  const int k_max = static_cast<int>(cos_coef_.size()) - 1;
  for (int k = 1; k <= k_max; ++k) {
    // Resynchronize the recurrence periodically to keep the phase accurate.
    if (k % 64 == 0) phase = std::polar(1.0, k * s);
    const double c = phase.real(), sn = phase.imag();
    const double a = cos_coef_[k], b = sin_coef_[k];
    out.value += a * c + b * sn;
    out.d1 += k * (-a * sn + b * c);
    out.d2 -= static_cast<double>(k) * k * (a * c + b * sn);
    phase *= step;
  }
  // Reproduce samples bit for bit at the nodes.
  const int m = size();
  const long q = std::lround(s / node_parameter(1, m));
  if (q >= 0 && q < m && s == node_parameter(static_cast<int>(q), m)) out.value = samples_[q];
  return out;
}

std::vector<double> PeriodicInterpolant::node_derivative(int order) const {
  const int m = size();
  std::vector<double> out(m);
  for (int j = 0; j < m; ++j) {
    const Jet jet = eval(node_parameter(j, m));
    out[j] = order == 0 ? jet.value : order == 1 ? jet.d1 : jet.d2;
  }
  return out;
}

}  // namespace tj
