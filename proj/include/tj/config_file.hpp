#pragma once

#include "tj/solver.hpp"

#include <map>
#include <stdexcept>
#include <string>

namespace tj {

/// Parse or semantic error in a configuration file. line() is 0 when the
/// problem is not tied to one line (for example a missing key).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& key, const std::string& message);
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

/// Junction data for the pointwise checks.
struct JunctionSpec {
  double lambda0 = 0.0;
  double a3 = 0.0;
  double H1 = 1.0;
  double H2 = 0.0;
};

struct ProblemConfig {
  SolverConfig solver;
  JunctionSpec junction;
  std::string source;  // file name, for reports
};

/// Overrides applied on top of the [tolerances] section, as from --tol KEY=VAL.
using TolOverrides = std::map<std::string, std::string>;

/// Reads the sectioned key = value format:
///
///   [geometry]   mode, outer_radius, interface_radius, n_theta,
///                perturbation, perturbation_mode
///   [fields]     family = lens | lemma | radial | manufactured; lens_B;
///                lemma_a3, lemma_H1;
///                sheet1..sheet3 = poly c0 c1 ... | log a b | samples FILE
///   [solver]     n_inner, n_outer, dt, t_end, snapshot_every, max_halvings
///   [tolerances] order0, order1, newton, newton_stagnation,
///                newton_max_iterations, jacobian_step, regime_margin
///   [junction]   lambda0, a3, H1, H2
///
/// Comments start with '#' or ';'. Unknown sections and keys are errors.
/// "poly" is sum c_k (r^2 - R0^2)^k with R0 = interface_radius; "log" is
/// a + b log r; "samples" reads "r w" pairs (relative paths resolve against
/// the config file) and interpolates with a natural cubic spline.
ProblemConfig parse_config(const std::string& text, const std::string& source = "<string>",
                           const TolOverrides& overrides = {});
ProblemConfig load_config(const std::string& path, const TolOverrides& overrides = {});

/// Radial profile through sampled (r, w) pairs; r strictly increasing.
std::shared_ptr<const GraphField> sampled_radial_field(DomainTag tag, std::vector<double> r,
                                                       std::vector<double> w);

}  // namespace tj
