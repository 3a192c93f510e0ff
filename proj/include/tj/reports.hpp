#pragma once

#include "tj/solver.hpp"

#include <iosfwd>
#include <string>

namespace tj {

/// Line-oriented snapshot:
///
///   snapshot 1
///   t <t>
///   mode <axisymmetric|star2d>
///   grids <n_inner> <n_outer> <n_theta>
///   steps <k>
///   energy <E> length <L>
///   nodes <count>
///   <sheet> <inner|outer> <i> <j> <x> <y> <u>      (one per node)
///   interface <M>
///   <theta> <R> <gamma_n> <H1> <H2> <H3> <bc1> <bc2>
void write_snapshot(std::ostream& os, const SolverState& s);

/// Header naming the StepReport columns, then one line per step.
void write_step_log_header(std::ostream& os);
void write_step_log_line(std::ostream& os, const StepReport& r);

/// snapshot_0000.txt, snapshot_0001.txt, ...
std::string snapshot_filename(int index);

/// One "name PASS|FAIL value detail" record of a check suite.
struct CheckRecord {
  std::string name;
  bool passed = false;
  double value = 0.0;
  std::string detail;
};

void write_check_record(std::ostream& os, const CheckRecord& r);

}  // namespace tj
