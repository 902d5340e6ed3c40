#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "gqg/errors.hpp"
#include "gqg/potential.hpp"
#include "gqg/theta_grid.hpp"

namespace gqg {

/// Aggregated validation failure: one message per offending key.
struct ConfigError : Error {
  std::vector<std::string> violations;

  explicit ConfigError(std::vector<std::string> v)
      : Error(join(v)), violations(std::move(v)) {}

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::ostringstream os;
    os << "invalid configuration (" << v.size() << " problem" << (v.size() == 1 ? "" : "s") << ")";
    for (const auto& s : v) os << "\n  - " << s;
    return os.str();
  }
};

struct RunConfig {
  int layers = 2;
  double t0 = 0.55;

  std::string potential_kind = "zero";  // zero | cosine | sampled
  double amplitude = 1.0;
  std::vector<double> potential_values;
  double evenness_tol = 1e-9;

  double lambda_min = 0.0;
  double lambda_max = 100.0;

  int grid_n1 = 128;
  int grid_n2 = 128;

  double window_center = 2.0 * std::numbers::pi / 3.0;
  double window_halfwidth = std::numbers::pi / 4.0;
  int window_samples = 257;

  int band_index = 1;
  int modes_samples = 16;
  std::uint64_t seed = 20240817ull;

  std::string out = "out";
  bool write_csv = true;
  bool write_json = true;

  int steps = 4096;
  double scan_step = 0.05;
  double dirichlet_guard = 1e-8;
  double fit_window = 0.05;
  int fit_samples = 65;

  EdgePotential potential() const {
    if (potential_kind == "zero") return EdgePotential::zero();
    if (potential_kind == "cosine") return EdgePotential::cosine(amplitude);
    return EdgePotential::sampled(potential_values, evenness_tol);
  }

  ThetaGrid theta_grid() const { return ThetaGrid::uniform(grid_n1, grid_n2); }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t used = 0;
    out = std::stod(s, &used);
    return used == s.size() && std::isfinite(out);
  } catch (...) {
    return false;
  }
}

inline bool parse_int(const std::string& s, int& out) {
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc{} && res.ptr == last;
}

inline bool parse_u64(const std::string& s, std::uint64_t& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

inline bool parse_bool(const std::string& s, bool& out) {
  if (s == "true" || s == "1" || s == "yes") {
    out = true;
    return true;
  }
  if (s == "false" || s == "0" || s == "no") {
    out = false;
    return true;
  }
  return false;
}

inline bool parse_grid(const std::string& s, int& n1, int& n2) {
  const auto x = s.find('x');
  if (x == std::string::npos) return false;
  return parse_int(trim(s.substr(0, x)), n1) && parse_int(trim(s.substr(x + 1)), n2);
}

inline bool parse_double_list(const std::string& s, std::vector<double>& out) {
  out.clear();
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const std::string item = trim(s.substr(pos, comma == std::string::npos ? std::string::npos
                                                                           : comma - pos));
    if (!item.empty()) {
      double v;
      if (!parse_double(item, v)) return false;
      out.push_back(v);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return !out.empty();
}

}  // namespace detail

/// Full validation; returns one message per violation (empty when valid).
inline std::vector<std::string> validate_config(const RunConfig& c) {
  std::vector<std::string> v;
  auto bad = [&](const std::string& msg) { v.push_back(msg); };

  if (c.layers != 2 && c.layers != 3) bad("layers: must be 2 or 3");
  if (!(c.t0 > 0.0) || !std::isfinite(c.t0)) {
    bad("t0: must be a positive real (t0 = 0 decouples the sheets and is not admitted)");
  }
  if (c.potential_kind != "zero" && c.potential_kind != "cosine" &&
      c.potential_kind != "sampled") {
    bad("potential: must be one of zero|cosine|sampled");
  }
  if (c.potential_kind == "cosine" && !std::isfinite(c.amplitude)) {
    bad("amplitude: must be finite");
  }
  if (c.potential_kind == "sampled") {
    try {
      (void)EdgePotential::sampled(c.potential_values, c.evenness_tol);
    } catch (const Error& e) {
      bad(std::string("potential_values: ") + e.what());
    }
  }
  if (!(c.lambda_min < c.lambda_max)) bad("lambda range: lambda_min must be < lambda_max");
  if (c.grid_n1 < 2 || c.grid_n2 < 2) bad("grid: both dimensions must be >= 2");
  if (!(c.window_halfwidth > 0.0)) bad("window_halfwidth: must be positive");
  if (c.window_samples < 64) bad("window_samples: must be >= 64");
  if (c.band_index < 1) bad("band_index: must be >= 1");
  if (c.modes_samples < 1) bad("modes_samples: must be >= 1");
  if (c.steps < 64) bad("steps: must be >= 64");
  if (!(c.scan_step > 0.0)) bad("scan_step: must be positive");
  if (!(c.dirichlet_guard > 0.0)) bad("dirichlet_guard: must be positive");
  if (!(c.fit_window > 0.0)) bad("fit_window: must be positive");
  if (c.fit_samples < 8) bad("fit_samples: must be >= 8");
  if (c.out.empty()) bad("out: must not be empty");
  return v;
}

/// Parse flat `key = value` text (# comments) into a validated RunConfig.
inline RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::vector<std::string> violations;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      violations.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    auto fail = [&](const std::string& why) {
      violations.push_back(key + ": " + why + " (got \"" + val + "\")");
    };

    if (key == "layers") {
      if (!detail::parse_int(val, c.layers)) fail("expected an integer");
    } else if (key == "t0") {
      if (!detail::parse_double(val, c.t0)) fail("expected a real number");
    } else if (key == "potential") {
      c.potential_kind = val;
    } else if (key == "amplitude") {
      if (!detail::parse_double(val, c.amplitude)) fail("expected a real number");
    } else if (key == "potential_values") {
      if (!detail::parse_double_list(val, c.potential_values)) fail("expected comma-separated reals");
    } else if (key == "evenness_tol") {
      if (!detail::parse_double(val, c.evenness_tol)) fail("expected a real number");
    } else if (key == "lambda_min") {
      if (!detail::parse_double(val, c.lambda_min)) fail("expected a real number");
    } else if (key == "lambda_max") {
      if (!detail::parse_double(val, c.lambda_max)) fail("expected a real number");
    } else if (key == "grid") {
      if (!detail::parse_grid(val, c.grid_n1, c.grid_n2)) fail("expected N1xN2");
    } else if (key == "window_center") {
      if (!detail::parse_double(val, c.window_center)) fail("expected a real number");
    } else if (key == "window_halfwidth") {
      if (!detail::parse_double(val, c.window_halfwidth)) fail("expected a real number");
    } else if (key == "window_samples") {
      if (!detail::parse_int(val, c.window_samples)) fail("expected an integer");
    } else if (key == "band_index") {
      if (!detail::parse_int(val, c.band_index)) fail("expected an integer");
    } else if (key == "modes_samples") {
      if (!detail::parse_int(val, c.modes_samples)) fail("expected an integer");
    } else if (key == "seed") {
      if (!detail::parse_u64(val, c.seed)) fail("expected an unsigned integer");
    } else if (key == "out") {
      c.out = val;
    } else if (key == "write_csv") {
      if (!detail::parse_bool(val, c.write_csv)) fail("expected true|false");
    } else if (key == "write_json") {
      if (!detail::parse_bool(val, c.write_json)) fail("expected true|false");
    } else if (key == "steps") {
      if (!detail::parse_int(val, c.steps)) fail("expected an integer");
    } else if (key == "scan_step") {
      if (!detail::parse_double(val, c.scan_step)) fail("expected a real number");
    } else if (key == "dirichlet_guard") {
      if (!detail::parse_double(val, c.dirichlet_guard)) fail("expected a real number");
    } else if (key == "fit_window") {
      if (!detail::parse_double(val, c.fit_window)) fail("expected a real number");
    } else if (key == "fit_samples") {
      if (!detail::parse_int(val, c.fit_samples)) fail("expected an integer");
    } else {
      violations.push_back("unknown key: " + key);
    }
  }

  const auto more = validate_config(c);
  violations.insert(violations.end(), more.begin(), more.end());
  if (!violations.empty()) throw ConfigError(std::move(violations));
  return c;
}

}  // namespace gqg
