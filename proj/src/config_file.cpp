#include "tj/config_file.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_spline.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace tj {

namespace {

std::string describe(int line, const std::string& key, const std::string& message) {
  std::ostringstream os;
  if (line > 0) os << "line " << line << ": ";
  if (!key.empty()) os << "key '" << key << "': ";
  os << message;
  return os.str();
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"geometry",
       {"mode", "outer_radius", "interface_radius", "n_theta", "perturbation", "perturbation_mode"}},
      {"fields", {"family", "lens_B", "lemma_a3", "lemma_H1", "sheet1", "sheet2", "sheet3"}},
      {"solver", {"n_inner", "n_outer", "dt", "t_end", "snapshot_every", "max_halvings"}},
      {"tolerances",
       {"order0", "order1", "newton", "newton_stagnation", "newton_max_iterations",
        "jacobian_step", "regime_margin"}},
      {"junction", {"lambda0", "a3", "H1", "H2"}},
  };
  return keys;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

struct Entry {
  std::string value;
  int line = 0;
};

using Sections = std::map<std::string, std::map<std::string, Entry>>;

Sections read_sections(const std::string& text) {
  Sections out;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto cut = raw.find_first_of("#;");
    const std::string s = trim(std::string_view(raw).substr(0, cut));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(line, "", "unterminated section header");
      section = trim(std::string_view(s).substr(1, s.size() - 2));
      if (!known_keys().count(section)) {
        throw ConfigError(line, "", "unknown section [" + section + "]");
      }
      out[section];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "", "expected 'key = value'");
    const std::string key = trim(std::string_view(s).substr(0, eq));
    const std::string value = trim(std::string_view(s).substr(eq + 1));
    if (section.empty()) throw ConfigError(line, key, "key outside any section");
    if (!known_keys().at(section).count(key)) {
      throw ConfigError(line, key, "unknown key in [" + section + "]");
    }
    if (value.empty()) throw ConfigError(line, key, "empty value");
    auto& sec = out[section];
    if (sec.count(key)) throw ConfigError(line, key, "duplicate key");
    sec[key] = Entry{value, line};
  }
  return out;
}

double to_double(const std::string& s, int line, const std::string& key) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError(line, key, "not a number: '" + s + "'");
  }
  return v;
}

int to_int(const std::string& s, int line, const std::string& key) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw ConfigError(line, key, "not an integer: '" + s + "'");
  }
  return v;
}

class Reader {
 public:
  explicit Reader(const Sections& s) : s_(s) {}

  const Entry* find(const std::string& sec, const std::string& key) const {
    const auto it = s_.find(sec);
    if (it == s_.end()) return nullptr;
    const auto jt = it->second.find(key);
    return jt == it->second.end() ? nullptr : &jt->second;
  }
  double num(const std::string& sec, const std::string& key, double fallback) const {
    const Entry* e = find(sec, key);
    return e ? to_double(e->value, e->line, key) : fallback;
  }
  int integer(const std::string& sec, const std::string& key, int fallback) const {
    const Entry* e = find(sec, key);
    return e ? to_int(e->value, e->line, key) : fallback;
  }
  std::string text(const std::string& sec, const std::string& key, const std::string& fallback) const {
    const Entry* e = find(sec, key);
    return e ? e->value : fallback;
  }
  int line(const std::string& sec, const std::string& key) const {
    const Entry* e = find(sec, key);
    return e ? e->line : 0;
  }

 private:
  const Sections& s_;
};

class Spline {
 public:
  Spline(const std::vector<double>& r, const std::vector<double>& w)
      : lo_(r.front()), hi_(r.back()),
        spline_(gsl_spline_alloc(gsl_interp_cspline, r.size()), gsl_spline_free) {
    gsl_spline_init(spline_.get(), r.data(), w.data(), r.size());
  }
  std::array<double, 3> operator()(double r) const {
    if (r < lo_ - 1e-12 || r > hi_ + 1e-12) {
      std::ostringstream os;
      os << "sampled profile evaluated at r = " << r << " outside [" << lo_ << ", " << hi_ << "]";
      throw DomainError(os.str());
    }
    r = std::clamp(r, lo_, hi_);
    std::array<double, 3> p{};
    gsl_spline_eval_e(spline_.get(), r, nullptr, &p[0]);
    gsl_spline_eval_deriv_e(spline_.get(), r, nullptr, &p[1]);
    gsl_spline_eval_deriv2_e(spline_.get(), r, nullptr, &p[2]);
    return p;
  }

 private:
  double lo_, hi_;
  std::shared_ptr<gsl_spline> spline_;
};

std::vector<std::string> split(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

std::pair<std::vector<double>, std::vector<double>> read_samples(const std::filesystem::path& file,
                                                                 int line, const std::string& key) {
  std::ifstream in(file);
  if (!in) throw ConfigError(line, key, "cannot open sample file " + file.string());
  std::vector<double> r, w;
  std::string raw;
  int n = 0;
  while (std::getline(in, raw)) {
    ++n;
    const auto parts = split(raw.substr(0, raw.find('#')));
    if (parts.empty()) continue;
    const std::string where = file.filename().string() + ":" + std::to_string(n);
    if (parts.size() != 2) throw ConfigError(line, key, where + ": expected 'r w'");
    r.push_back(to_double(parts[0], line, key));
    w.push_back(to_double(parts[1], line, key));
  }
  return {r, w};
}

std::shared_ptr<const GraphField> sheet_field(const std::string& spec, int sheet, double R0,
                                              const std::filesystem::path& base, int line) {
  const std::string key = "sheet" + std::to_string(sheet + 1);
  const auto t = split(spec);
  const DomainTag tag = sheet < 2 ? DomainTag::Inner : DomainTag::Outer;
  std::vector<double> c;
  if (t[0] == "poly" || t[0] == "log") {
    for (std::size_t k = 1; k < t.size(); ++k) c.push_back(to_double(t[k], line, key));
  }
  if (t[0] == "poly") {
    if (c.empty()) throw ConfigError(line, key, "poly needs at least one coefficient");
    return std::make_shared<FunctionField>(FunctionField::radial(tag, [c, R0](double r) {
      // Horner in q = r^2 - R0^2, carrying d/dq and d^2/dq^2.
      const double q = r * r - R0 * R0;
      double p = 0.0, pq = 0.0, pqq = 0.0;
      for (std::size_t k = c.size(); k-- > 0;) {
        pqq = pqq * q + 2.0 * pq;
        pq = pq * q + p;
        p = p * q + c[k];
      }
      return std::array<double, 3>{p, 2.0 * r * pq, 2.0 * pq + 4.0 * r * r * pqq};
    }));
  }
  if (t[0] == "log") {
    if (c.size() != 2) throw ConfigError(line, key, "log takes two coefficients a b");
    if (sheet < 2 && c[1] != 0.0) throw ConfigError(line, key, "log profile is singular at the center");
    const double a = c[0], b = c[1];
    return std::make_shared<FunctionField>(FunctionField::radial(tag, [a, b](double r) {
      return std::array<double, 3>{a + b * std::log(r), b / r, -b / (r * r)};
    }));
  }
  if (t[0] == "samples") {
    if (t.size() != 2) throw ConfigError(line, key, "samples takes one file name");
    std::filesystem::path file(t[1]);
    if (file.is_relative()) file = base / file;
    auto [r, w] = read_samples(file, line, key);
    try {
      return sampled_radial_field(tag, std::move(r), std::move(w));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(line, key, e.what());
    }
  }
  throw ConfigError(line, key, "unknown profile '" + t[0] + "' (poly, log, samples)");
}

}  // namespace

std::shared_ptr<const GraphField> sampled_radial_field(DomainTag tag, std::vector<double> r,
                                                       std::vector<double> w) {
  if (r.size() != w.size() || r.size() < 4) {
    throw std::invalid_argument("sampled profile needs at least 4 (r, w) pairs");
  }
  for (std::size_t k = 1; k < r.size(); ++k) {
    if (!(r[k] > r[k - 1])) throw std::invalid_argument("sampled radii must increase strictly");
  }
  gsl_set_error_handler_off();
  const Spline s(r, w);
  return std::make_shared<FunctionField>(FunctionField::radial(tag, s));
}

ConfigError::ConfigError(int line, const std::string& key, const std::string& message)
    : std::runtime_error(describe(line, key, message)), line_(line), key_(key) {}

ProblemConfig parse_config(const std::string& text, const std::string& source,
                           const TolOverrides& overrides) {
  Sections sections = read_sections(text);
  for (const auto& [key, value] : overrides) {
    if (!known_keys().at("tolerances").count(key)) throw ConfigError(0, key, "unknown tolerance");
    sections["tolerances"][key] = Entry{value, 0};
  }
  const Reader in(sections);
  ProblemConfig out;
  out.source = source;
  SolverConfig& c = out.solver;

  const std::string mode = in.text("geometry", "mode", "axisymmetric");
  if (mode == "axisymmetric") {
    c.mode = SolverMode::Axisymmetric;
  } else if (mode == "star2d") {
    c.mode = SolverMode::Star2d;
  } else {
    throw ConfigError(in.line("geometry", "mode"), "mode", "expected axisymmetric or star2d");
  }
  c.outer_radius = in.num("geometry", "outer_radius", c.outer_radius);
  const double R0 = in.num("geometry", "interface_radius", 1.0);
  const double eps = in.num("geometry", "perturbation", 0.0);
  const int k = in.integer("geometry", "perturbation_mode", 3);
  if (c.mode == SolverMode::Axisymmetric) {
    for (const char* key : {"n_theta", "perturbation", "perturbation_mode"}) {
      if (in.find("geometry", key)) {
        throw ConfigError(in.line("geometry", key), key, "only used in star2d mode");
      }
    }
    c.interface_radii = {R0};
  } else {
    const int M = in.integer("geometry", "n_theta", 16);
    if (M < 1) throw ConfigError(in.line("geometry", "n_theta"), "n_theta", "must be positive");
    c.interface_radii.resize(M);
    for (int j = 0; j < M; ++j) c.interface_radii[j] = R0 * (1.0 + eps * std::cos(k * 2.0 * kPi * j / M));
  }

  const std::string family = in.text("fields", "family", "lens");
  const char* sheet_keys[3] = {"sheet1", "sheet2", "sheet3"};
  auto only_for = [&](const char* key, const std::string& fam) {
    if (family != fam && in.find("fields", key)) {
      throw ConfigError(in.line("fields", key), key, "only used by family " + fam);
    }
  };
  only_for("lens_B", "lens");
  only_for("lemma_a3", "lemma");
  only_for("lemma_H1", "lemma");
  if (family == "lens" || family == "manufactured" || family == "lemma") {
    for (const char* key : sheet_keys) {
      if (in.find("fields", key)) {
        throw ConfigError(in.line("fields", key), key, "not used by family " + family);
      }
    }
    if (family == "lens") {
      c.sheets = lens_sheets(R0, in.num("fields", "lens_B", 0.0));
    } else if (family == "lemma") {
      try {
        c.sheets = lemma_sheets(R0, c.outer_radius, in.num("fields", "lemma_a3", 0.0),
                                in.num("fields", "lemma_H1", 0.0));
      } catch (const JunctionError& e) {
        throw ConfigError(in.line("fields", "lemma_a3"), "lemma_a3", e.what());
      }
    } else {
      if (c.mode != SolverMode::Axisymmetric) {
        throw ConfigError(in.line("fields", "family"), "family", "manufactured needs axisymmetric mode");
      }
      c.manufactured = standard_manufactured(R0, c.outer_radius);
    }
  } else if (family == "radial") {
    const auto base = std::filesystem::path(source).parent_path();
    for (int I = 0; I < 3; ++I) {
      const Entry* e = in.find("fields", sheet_keys[I]);
      if (!e) throw ConfigError(0, sheet_keys[I], "missing in [fields] for family radial");
      c.sheets[I] = sheet_field(e->value, I, R0, base, e->line);
    }
  } else {
    throw ConfigError(in.line("fields", "family"), "family", "expected lens, lemma, radial or manufactured");
  }

  c.n_inner = in.integer("solver", "n_inner", c.n_inner);
  c.n_outer = in.integer("solver", "n_outer", c.n_outer);
  c.dt = in.num("solver", "dt", c.dt);
  c.t_end = in.num("solver", "t_end", c.t_end);
  c.snapshot_every = in.integer("solver", "snapshot_every", c.snapshot_every);
  c.max_halvings = in.integer("solver", "max_halvings", c.max_halvings);

  c.order0_tol = in.num("tolerances", "order0", c.order0_tol);
  c.order1_tol = in.num("tolerances", "order1", c.order1_tol);
  c.newton_tol = in.num("tolerances", "newton", c.newton_tol);
  c.newton_stagnation = in.num("tolerances", "newton_stagnation", c.newton_stagnation);
  c.newton_max_iterations = in.integer("tolerances", "newton_max_iterations", c.newton_max_iterations);
  c.jacobian_step = in.num("tolerances", "jacobian_step", c.jacobian_step);
  c.regime_margin = in.num("tolerances", "regime_margin", c.regime_margin);

  out.junction.lambda0 = in.num("junction", "lambda0", out.junction.lambda0);
  out.junction.a3 = in.num("junction", "a3", out.junction.a3);
  out.junction.H1 = in.num("junction", "H1", out.junction.H1);
  out.junction.H2 = in.num("junction", "H2", out.junction.H2);

  try {
    c.check();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, "", e.what());
  }
  return out;
}

ProblemConfig load_config(const std::string& path, const TolOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "", "cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path, overrides);
}

}  // namespace tj
