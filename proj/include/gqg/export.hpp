#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gqg/config.hpp"
#include "gqg/cones.hpp"
#include "gqg/dispersion.hpp"
#include "gqg/hill.hpp"
#include "gqg/modes.hpp"
#include "gqg/random.hpp"
#include "gqg/selfcheck.hpp"
#include "gqg/spectrum.hpp"
#include "gqg/surfaces.hpp"
#include "gqg/version.hpp"

namespace gqg {

// 17 significant digits: round-trip exact for doubles.
inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct ExportEntry {
  std::string path;  // relative to the bundle directory
  std::string format;
  std::uint64_t bytes = 0;
  std::string checksum;
};

struct ExportBundle {
  std::filesystem::path out_dir;
  std::vector<ExportEntry> files;
  int check_failures = 0;
  std::vector<CheckResult> check_results;  // populated by the check command
};

namespace detail {

class BundleWriter {
 public:
  explicit BundleWriter(const std::filesystem::path& dir) : dir_(dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
  }

  void write(const std::string& name, const std::string& format, const std::string& content) {
    const auto full = dir_ / name;
    std::ofstream out(full, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + full.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write failed for " + full.string());
    entries_.push_back({name, format, content.size(), hex64(fnv1a64(content))});
  }

  const std::vector<ExportEntry>& entries() const { return entries_; }

 private:
  std::filesystem::path dir_;
  std::vector<ExportEntry> entries_;
};

inline nlohmann::json config_echo(const RunConfig& c) {
  // The output directory is deliberately omitted so identical physics
  // configurations produce identical bundles wherever they land.
  nlohmann::json j;
  j["layers"] = c.layers;
  j["t0"] = c.t0;
  j["potential"] = c.potential_kind;
  if (c.potential_kind == "cosine") j["amplitude"] = c.amplitude;
  if (c.potential_kind == "sampled") {
    j["potential_values"] = c.potential_values;
    j["evenness_tol"] = c.evenness_tol;
  }
  j["lambda_min"] = c.lambda_min;
  j["lambda_max"] = c.lambda_max;
  j["grid"] = std::to_string(c.grid_n1) + "x" + std::to_string(c.grid_n2);
  j["window_center"] = c.window_center;
  j["window_halfwidth"] = c.window_halfwidth;
  j["window_samples"] = c.window_samples;
  j["band_index"] = c.band_index;
  j["modes_samples"] = c.modes_samples;
  j["seed"] = c.seed;
  j["write_csv"] = c.write_csv;
  j["write_json"] = c.write_json;
  j["steps"] = c.steps;
  j["scan_step"] = c.scan_step;
  j["dirichlet_guard"] = c.dirichlet_guard;
  j["fit_window"] = c.fit_window;
  j["fit_samples"] = c.fit_samples;
  return j;
}

inline std::string bands_csv(const std::vector<HillBand>& bands) {
  std::string s = "index,lambda_lo,lambda_hi,direction,clipped_lo,clipped_hi\n";
  for (const auto& b : bands) {
    s += std::to_string(b.index) + "," + fmt17(b.lambda_lo) + "," + fmt17(b.lambda_hi) + "," +
         std::to_string(b.direction) + "," + (b.clipped_lo ? "1" : "0") + "," +
         (b.clipped_hi ? "1" : "0") + "\n";
  }
  return s;
}

inline std::string surfaces_csv(const std::vector<DispersionSurface>& surfaces) {
  std::string s = "theta1,theta2,branch,lambda\n";
  for (const auto& surf : surfaces) {
    for (const auto& p : surf.samples) {
      s += fmt17(p.theta1) + "," + fmt17(p.theta2) + "," + surf.branch + "," + fmt17(p.lambda) +
           "\n";
    }
  }
  return s;
}

inline std::string slice_csv(const DiagonalSlice& slice) {
  std::string s = "theta1,branch,r\n";
  for (std::size_t bi = 0; bi < slice.branches.size(); ++bi) {
    for (std::size_t i = 0; i < slice.theta1.size(); ++i) {
      s += fmt17(slice.theta1[i]) + "," + to_string(slice.branches[bi]) + "," +
           fmt17(slice.r[bi][i]) + "\n";
    }
  }
  return s;
}

inline nlohmann::json cone_report_json(const ConeReport& rep, const nlohmann::json& lambda_at,
                                       const nlohmann::json& lambda_slope) {
  nlohmann::json j;
  j["theta_d"] = rep.theta_d;
  j["upper"] = to_string(rep.upper);
  j["lower"] = to_string(rep.lower);
  j["classification"] = to_string(rep.classification);
  j["touch_gap"] = rep.touch_gap;
  j["touch_value"] = rep.touch_value;
  j["gamma_fit"] = rep.gamma_fit;
  j["linear_coeff"] = rep.linear_coeff;
  j["curvature_fit"] = rep.curvature_fit;
  j["reference"] = rep.reference;
  j["relative_deviation"] = rep.relative_deviation;
  j["lambda_at_touch"] = lambda_at;
  j["lambda_slope"] = lambda_slope;
  j["fit_window_linear"] = rep.fit_window_linear;
  j["fit_window_quadratic"] = rep.fit_window_quadratic;
  j["fit_samples"] = rep.fit_samples;
  j["residual_dominance"] = rep.residual_dominance;
  return j;
}

inline nlohmann::json spectrum_json(const SpectrumReport& rep) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["engine_version"] = kEngineVersion;
  j["layers"] = rep.layers;
  j["t0"] = rep.t0;
  j["potential"] = rep.potential;
  j["lambda_range"] = {rep.range_lo, rep.range_hi};
  j["ac_bands"] = nlohmann::json::array();
  for (const auto& b : rep.ac_bands) {
    j["ac_bands"].push_back({{"index", b.index},
                             {"lambda_lo", b.lambda_lo},
                             {"lambda_hi", b.lambda_hi},
                             {"direction", b.direction},
                             {"clipped_lo", b.clipped_lo},
                             {"clipped_hi", b.clipped_hi}});
  }
  j["flat_eigenvalues"] = nlohmann::json::array();
  for (const auto& f : rep.flat_eigenvalues) {
    j["flat_eigenvalues"].push_back(
        {{"lambda", f.lambda}, {"multiplicity", "infinite"}, {"at_band_edge", f.at_band_edge}});
  }
  j["sub_bands"] = nlohmann::json::array();
  for (const auto& sb : rep.sub_bands) {
    j["sub_bands"].push_back({{"band_index", sb.band_index},
                              {"branch", to_string(sb.branch)},
                              {"lambda_lo", sb.lambda_lo},
                              {"lambda_hi", sb.lambda_hi}});
  }
  // Theorem-level: this component is always empty; serialized so consumers
  // never have to infer it.
  j["singular_continuous"] = nlohmann::json::array();
  return j;
}

}  // namespace detail

/// Execute one CLI command and write its bundle. Returns the manifest data;
/// `check` additionally reports the number of failed invariants.
inline ExportBundle run_command(const std::string& command, const RunConfig& cfg) {
  const EdgePotential potential = cfg.potential();
  const HillOperator hill(potential, cfg.steps, cfg.scan_step, cfg.dirichlet_guard);
  const StackSpec spec(cfg.layers, cfg.t0);

  ExportBundle bundle;
  bundle.out_dir = cfg.out;
  detail::BundleWriter writer(bundle.out_dir);

  const auto grid = cfg.theta_grid();
  nlohmann::json grid_info = {{"n1", cfg.grid_n1},
                              {"n2", cfg.grid_n2},
                              {"axis1_nodes", grid.axis1.size()},
                              {"axis2_nodes", grid.axis2.size()}};

  if (command == "bands") {
    writer.write("bands.csv", "csv", detail::bands_csv(hill.bands(cfg.lambda_min, cfg.lambda_max)));
  } else if (command == "dispersion") {
    const auto bands = hill.bands(cfg.lambda_min, cfg.lambda_max);
    writer.write("bands.csv", "csv", detail::bands_csv(bands));
    for (const auto& band : bands) {
      const auto surfaces = dispersion_surface(spec, hill, grid, band);
      writer.write("dispersion_band" + std::to_string(band.index) + ".csv", "csv",
                   detail::surfaces_csv(surfaces));
    }
    const auto slice = diagonal_slice(spec, cfg.window_center - cfg.window_halfwidth,
                                      cfg.window_center + cfg.window_halfwidth,
                                      cfg.window_samples);
    writer.write("slice.csv", "csv", detail::slice_csv(slice));
  } else if (command == "cones") {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["engine_version"] = kEngineVersion;
    j["layers"] = cfg.layers;
    j["t0"] = cfg.t0;
    j["reports"] = nlohmann::json::array();

    const auto bands = hill.bands(cfg.lambda_min, cfg.lambda_max);
    const HillBand* band = nullptr;
    if (cfg.band_index >= 1 && static_cast<std::size_t>(cfg.band_index) <= bands.size()) {
      band = &bands[static_cast<std::size_t>(cfg.band_index - 1)];
    }

    TouchFitConfig fit;
    fit.linear_window = cfg.fit_window;
    fit.samples = cfg.fit_samples;

    std::vector<std::pair<Branch, Branch>> pairs = {{Branch::PlusInner, Branch::MinusInner},
                                                    {Branch::PlusOuter, Branch::MinusOuter}};
    if (cfg.layers == 3) {
      pairs.insert(pairs.begin(), {Branch::MonoPlus, Branch::MonoMinus});
    }
    for (double theta_d : {dirac_point_theta1(), -dirac_point_theta1()}) {
      const auto slice =
          diagonal_slice(spec, theta_d - cfg.window_halfwidth, theta_d + cfg.window_halfwidth,
                         cfg.window_samples);
      for (const auto& [up, lo] : pairs) {
        const auto rep = classify_touch(slice, up, lo, theta_d, fit);
        nlohmann::json lambda_at, lambda_slope;  // null unless computable
        if (band != nullptr && rep.classification != TouchClass::None) {
          try {
            lambda_at = hill.invert_discriminant(*band, 2.0 * rep.touch_value);
          } catch (const Error&) {
          }
        }
        if (band != nullptr && rep.classification == TouchClass::Linear) {
          try {
            lambda_slope = lambda_space_slope(rep, hill, *band);
          } catch (const Error&) {
          }
        }
        j["reports"].push_back(detail::cone_report_json(rep, lambda_at, lambda_slope));
      }
    }
    writer.write("cones.json", "json", j.dump(2) + "\n");
  } else if (command == "spectrum") {
    const auto rep = assemble_spectrum(spec, hill, cfg.lambda_min, cfg.lambda_max, grid);
    writer.write("spectrum.json", "json", detail::spectrum_json(rep).dump(2) + "\n");
  } else if (command == "modes") {
    const auto bands = hill.bands(cfg.lambda_min, cfg.lambda_max);
    if (bands.empty() || cfg.band_index < 1 ||
        static_cast<std::size_t>(cfg.band_index) > bands.size()) {
      throw DomainError("modes: band_index does not select a band in the lambda range");
    }
    const auto& band = bands[static_cast<std::size_t>(cfg.band_index - 1)];
    Rng rng(cfg.seed);

    std::string coeffs = "theta1,theta2,branch,component,re,im\n";
    std::string checks = "theta1,theta2,branch,lambda,eta,residual,continuity,kirchhoff,floquet\n";
    for (Branch b : branches_for(cfg.layers)) {
      int emitted = 0, attempts = 0;
      while (emitted < cfg.modes_samples && attempts < 200 * cfg.modes_samples) {
        ++attempts;
        const QuasiMomentum q(rng.uniform(-std::numbers::pi, std::numbers::pi),
                              rng.uniform(-std::numbers::pi, std::numbers::pi));
        const double r = roots_closed_form(spec, q).root(b);
        if (std::fabs(2.0 * r) > 1.98) continue;
        double lambda;
        try {
          lambda = hill.invert_discriminant(band, 2.0 * r, 1e-12);
        } catch (const DomainError&) {
          continue;
        }
        if (std::fabs(hill.monodromy(lambda).m12) < 1e-2) continue;
        ModeCoefficients mc;
        try {
          mc = solve_mode(spec, q, b);
        } catch (const NoModeError&) {
          continue;
        }
        const auto funcs = build_edge_functions(spec, mc, hill, lambda);
        const auto rep = verify_vertex_conditions(funcs, spec, q);
        for (std::size_t k = 0; k < mc.x.size(); ++k) {
          coeffs += fmt17(q.theta1) + "," + fmt17(q.theta2) + "," + to_string(b) + "," +
                    std::to_string(k) + "," + fmt17(mc.x[k].real()) + "," + fmt17(mc.x[k].imag()) +
                    "\n";
        }
        checks += fmt17(q.theta1) + "," + fmt17(q.theta2) + "," + to_string(b) + "," +
                  fmt17(lambda) + "," + fmt17(mc.eta_value) + "," + fmt17(mc.residual) + "," +
                  fmt17(rep.continuity) + "," + fmt17(rep.kirchhoff) + "," + fmt17(rep.floquet) +
                  "\n";
        ++emitted;
      }
    }
    writer.write("modes.csv", "csv", coeffs);
    writer.write("mode_checks.csv", "csv", checks);
  } else if (command == "check") {
    bundle.check_results = run_self_checks(cfg);
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["engine_version"] = kEngineVersion;
    j["results"] = nlohmann::json::array();
    for (const auto& r : bundle.check_results) {
      j["results"].push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
      if (!r.pass) ++bundle.check_failures;
    }
    j["failures"] = bundle.check_failures;
    writer.write("check.json", "json", j.dump(2) + "\n");
  } else {
    throw DomainError("unknown command: " + command);
  }

  nlohmann::json manifest;
  manifest["schema_version"] = kSchemaVersion;
  manifest["engine_version"] = kEngineVersion;
  manifest["command"] = command;
  manifest["config"] = detail::config_echo(cfg);
  manifest["grid"] = grid_info;
  manifest["files"] = nlohmann::json::array();
  for (const auto& e : writer.entries()) {
    manifest["files"].push_back({{"path", e.path},
                                 {"format", e.format},
                                 {"bytes", e.bytes},
                                 {"checksum_fnv1a64", e.checksum}});
  }
  writer.write("bundle.json", "json", manifest.dump(2) + "\n");
  bundle.files = writer.entries();
  return bundle;
}

}  // namespace gqg
