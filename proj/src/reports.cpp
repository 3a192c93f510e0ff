#include "tj/reports.hpp"

#include <cstdio>
#include <iomanip>
#include <ostream>

namespace tj {

void write_snapshot(std::ostream& os, const SolverState& s) {
  const bool axi = s.mode == SolverMode::Axisymmetric;
  const int M = static_cast<int>(s.R.size());
  const auto d = diagnostics(s);
  os << std::setprecision(17);
  os << "snapshot 1\n";
  os << "t " << s.t << '\n';
  os << "mode " << (axi ? "axisymmetric" : "star2d") << '\n';
  os << "grids " << s.n_inner << ' ' << s.n_outer << ' ' << M << '\n';
  os << "steps " << s.steps << '\n';
  os << "energy " << d.energy << " length " << d.length << '\n';
  std::size_t count = 0;
  for (const auto& u : s.u) count += u.size();
  os << "nodes " << count << '\n';
  const int stride = axi ? 1 : M;
  for (int I = 0; I < 3; ++I) {
    const auto x = node_positions(s, I);
    for (std::size_t k = 0; k < x.size(); ++k) {
      os << I + 1 << ' ' << (I < 2 ? "inner" : "outer") << ' ' << k / stride << ' ' << k % stride
         << ' ' << x[k].x() << ' ' << x[k].y() << ' ' << s.u[I][k] << '\n';
    }
  }
  os << "interface " << d.interface.size() << '\n';
  for (const auto& r : d.interface) {
    os << r.theta << ' ' << r.R << ' ' << r.normal_velocity << ' ' << r.H[0] << ' ' << r.H[1] << ' '
       << r.H[2] << ' ' << r.bc1 << ' ' << r.bc2 << '\n';
  }
}

void write_step_log_header(std::ostream& os) {
  os << "# t dt max_speed max_angle_residual max_angle_fine newton_iterations energy length\n";
}

void write_step_log_line(std::ostream& os, const StepReport& r) {
  os << std::setprecision(12) << r.t << ' ' << r.dt << ' ' << r.max_speed << ' '
     << r.max_angle_residual << ' ' << r.max_angle_fine << ' ' << r.newton_iterations << ' '
     << r.energy << ' ' << r.length << '\n';
}

std::string snapshot_filename(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%04d.txt", index);
  return buf;
}

void write_check_record(std::ostream& os, const CheckRecord& r) {
  os << r.name << ' ' << (r.passed ? "PASS" : "FAIL") << ' ' << std::setprecision(6) << r.value;
  if (!r.detail.empty()) os << ' ' << r.detail;
  os << '\n';
}

}  // namespace tj
