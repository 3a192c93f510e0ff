#pragma once

#include "tj/config_file.hpp"
#include "tj/reports.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tj {

struct CheckOptions {
  std::uint64_t seed = 1;
  JunctionSpec junction;
  int samples = 10000;  // random junctions in the lemma sweeps
  int junctions = 20;   // random junctions in the complementarity scan
  int scan_n = 41;      // scan samples per axis
  int states = 10;      // random states in the equivalence check
  int n = 64;           // radial nodes in the equivalence check
};

struct CheckSuite {
  std::string name;
  std::vector<CheckRecord> records;
  double seconds = 0.0;
  bool passed() const;
  std::string to_text() const;
};

/// Slope relations and their rotation form, rank and row space of the
/// relation system, the velocity law against least squares, and the
/// configured junction (which must raise when inadmissible).
CheckSuite check_lemmas(const CheckOptions& o);

/// Determinant scans over the spectral region for the configured junction,
/// the symmetric reference point and random junctions.
CheckSuite check_complementarity(const CheckOptions& o);

/// Remainders of the linearized frame action, 1/v and the two angle
/// conditions; passes when every log-log slope over eps = 1e-2, 1e-3, 1e-4
/// is at least 1.9.
CheckSuite check_linearization(const CheckOptions& o);

/// Gap between the u and U forms of the transformed equation on random
/// states at n and 2n radial nodes, and the t = 0 identities A = 0, F = vH.
CheckSuite check_equivalence(const CheckOptions& o);

/// Product rule of the extensions, d_nu rho_tilde = 0 and the frame action
/// of D phi on a perturbed curve.
CheckSuite check_extensions(const CheckOptions& o);

}  // namespace tj
