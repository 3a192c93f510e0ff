// Acceptance run: one PASS/FAIL line per criterion, with measured values.
// Exit status is nonzero when any criterion fails.

#include "tj/checks.hpp"
#include "tj/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace tj;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %d %s %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  failures += !pass;
}

struct Subset {
  bool pass = true;
  std::string text;
};

// Collects the named records of a suite.
Subset pick(const CheckSuite& s, std::initializer_list<const char*> names) {
  Subset out;
  std::ostringstream os;
  for (const char* name : names) {
    bool found = false;
    for (const auto& r : s.records) {
      if (r.name != name) continue;
      found = true;
      out.pass = out.pass && r.passed;
      os << r.name << '=' << r.value << ' ';
    }
    if (!found) {
      out.pass = false;
      os << name << "=missing ";
    }
  }
  out.text = os.str();
  return out;
}

Subset all_of(const CheckSuite& s) {
  Subset out;
  std::ostringstream os;
  for (const auto& r : s.records) {
    out.pass = out.pass && r.passed;
    os << r.name << '=' << r.value << ' ';
  }
  out.text = os.str();
  return out;
}

std::string timed(const std::string& text, double secs) {
  std::ostringstream os;
  os << text << "time=" << secs << "s";
  return os.str();
}

}  // namespace

// Solver criteria are in acceptance_solver.cpp.
bool solver_criterion(std::string& detail);
bool gate_criterion(std::string& detail);

int main() {
  CheckOptions opt;

  auto t0 = Clock::now();
  const auto lemmas = check_lemmas(opt);
  const double t_lemmas = seconds_since(t0);
  // The suite runs all three sweeps; its total time bounds each of them.
  auto c1 = pick(lemmas, {"lemma12_relations", "lemma12_rotation_form"});
  report(1, c1.pass && t_lemmas < 1.0, timed(c1.text, t_lemmas));
  auto c2 = pick(lemmas, {"relations_rank_two", "relations_row_space"});
  report(2, c2.pass && t_lemmas < 10.0, timed(c2.text, t_lemmas));
  auto c3 = pick(lemmas, {"velocity_law_least_squares", "velocity_law_reference"});
  report(3, c3.pass, c3.text);

  t0 = Clock::now();
  const auto comp = all_of(check_complementarity(opt));
  const double t_comp = seconds_since(t0);
  report(4, comp.pass && t_comp < 60.0, timed(comp.text, t_comp));

  const auto lin = all_of(check_linearization(opt));
  report(5, lin.pass, lin.text);

  t0 = Clock::now();
  const auto eq = all_of(check_equivalence(opt));
  report(6, eq.pass, timed(eq.text, seconds_since(t0)));

  const auto ext = all_of(check_extensions(opt));
  report(7, ext.pass, ext.text);

  std::string detail;
  t0 = Clock::now();
  const bool solver_ok = solver_criterion(detail);
  const double t_solver = seconds_since(t0);
  report(8, solver_ok && t_solver < 600.0, timed(detail, t_solver));

  detail.clear();
  report(9, gate_criterion(detail), detail);

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
