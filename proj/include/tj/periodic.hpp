#pragma once

#include <span>
#include <vector>

namespace tj {

/// Trigonometric interpolant of samples f_j = f(2*pi*j/M), j = 0..M-1.
///
/// Reproduces the samples at the nodes and provides the first two derivatives
/// with respect to the periodic parameter anywhere on the circle. For even M
/// the Nyquist mode is carried as a pure cosine, so the interpolant stays real
/// and its derivative at the nodes is the usual spectral derivative.
class PeriodicInterpolant {
 public:
  struct Jet {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
  };

  PeriodicInterpolant() = default;
  explicit PeriodicInterpolant(std::span<const double> samples);

  int size() const { return static_cast<int>(samples_.size()); }
  const std::vector<double>& samples() const { return samples_; }

  /// Value and derivatives at parameter s (any real; wrapped into [0, 2*pi)).
  Jet eval(double s) const;
  double value(double s) const { return eval(s).value; }

  /// Derivatives at the nodes, computed once (O(M^2)).
  std::vector<double> node_derivative(int order) const;

 private:
  std::vector<double> samples_;
  std::vector<double> cos_coef_;  // a_k, k = 0..K
  std::vector<double> sin_coef_;  // b_k, k = 0..K (b_0 unused)
};

/// Node parameter 2*pi*j/M.
inline double node_parameter(int j, int m) {
  return 2.0 * 3.14159265358979323846 * static_cast<double>(j) / static_cast<double>(m);
}

}  // namespace tj
