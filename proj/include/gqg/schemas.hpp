#pragma once

#include <json.hpp>

namespace gqg {

// Published report schemas (the same documents ship under schema/ in the
// repository root; a test keeps the two in sync).

inline const nlohmann::json& bundle_schema() {
  static const nlohmann::json s = nlohmann::json::parse(R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "grapheneqg export bundle manifest",
  "type": "object",
  "required": ["schema_version", "engine_version", "command", "config", "grid", "files"],
  "properties": {
    "schema_version": {"type": "string"},
    "engine_version": {"type": "string"},
    "command": {"type": "string", "enum": ["bands", "dispersion", "cones", "spectrum", "modes", "check"]},
    "config": {"type": "object"},
    "grid": {
      "type": "object",
      "required": ["n1", "n2", "axis1_nodes", "axis2_nodes"],
      "properties": {
        "n1": {"type": "integer"},
        "n2": {"type": "integer"},
        "axis1_nodes": {"type": "integer"},
        "axis2_nodes": {"type": "integer"}
      }
    },
    "files": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["path", "format", "bytes", "checksum_fnv1a64"],
        "properties": {
          "path": {"type": "string"},
          "format": {"type": "string", "enum": ["csv", "json"]},
          "bytes": {"type": "integer"},
          "checksum_fnv1a64": {"type": "string"}
        }
      }
    }
  }
})");
  return s;
}

inline const nlohmann::json& cone_report_schema() {
  static const nlohmann::json s = nlohmann::json::parse(R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "grapheneqg cone classification report",
  "type": "object",
  "required": ["schema_version", "engine_version", "layers", "t0", "reports"],
  "properties": {
    "schema_version": {"type": "string"},
    "engine_version": {"type": "string"},
    "layers": {"type": "integer"},
    "t0": {"type": "number"},
    "reports": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["theta_d", "upper", "lower", "classification", "touch_gap"],
        "properties": {
          "theta_d": {"type": "number"},
          "upper": {"type": "string"},
          "lower": {"type": "string"},
          "classification": {"type": "string", "enum": ["linear", "quadratic", "none"]},
          "touch_gap": {"type": "number"},
          "touch_value": {"type": "number"},
          "gamma_fit": {"type": ["number", "null"]},
          "linear_coeff": {"type": ["number", "null"]},
          "curvature_fit": {"type": ["number", "null"]},
          "reference": {"type": ["number", "null"]},
          "relative_deviation": {"type": ["number", "null"]},
          "lambda_at_touch": {"type": ["number", "null"]},
          "lambda_slope": {"type": ["number", "null"]},
          "fit_window_linear": {"type": "number"},
          "fit_window_quadratic": {"type": "number"},
          "fit_samples": {"type": "integer"},
          "residual_dominance": {"type": "boolean"}
        }
      }
    }
  }
})");
  return s;
}

inline const nlohmann::json& spectrum_report_schema() {
  static const nlohmann::json s = nlohmann::json::parse(R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "grapheneqg spectrum report",
  "type": "object",
  "required": ["schema_version", "engine_version", "layers", "t0", "potential",
               "lambda_range", "ac_bands", "flat_eigenvalues", "sub_bands",
               "singular_continuous"],
  "properties": {
    "schema_version": {"type": "string"},
    "engine_version": {"type": "string"},
    "layers": {"type": "integer"},
    "t0": {"type": "number"},
    "potential": {"type": "string"},
    "lambda_range": {"type": "array", "items": {"type": "number"}},
    "ac_bands": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["index", "lambda_lo", "lambda_hi", "direction", "clipped_lo", "clipped_hi"],
        "properties": {
          "index": {"type": "integer"},
          "lambda_lo": {"type": "number"},
          "lambda_hi": {"type": "number"},
          "direction": {"type": "integer"},
          "clipped_lo": {"type": "boolean"},
          "clipped_hi": {"type": "boolean"}
        }
      }
    },
    "flat_eigenvalues": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["lambda", "multiplicity", "at_band_edge"],
        "properties": {
          "lambda": {"type": "number"},
          "multiplicity": {"type": "string", "const": "infinite"},
          "at_band_edge": {"type": "boolean"}
        }
      }
    },
    "sub_bands": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["band_index", "branch", "lambda_lo", "lambda_hi"],
        "properties": {
          "band_index": {"type": "integer"},
          "branch": {"type": "string"},
          "lambda_lo": {"type": "number"},
          "lambda_hi": {"type": "number"}
        }
      }
    },
    "singular_continuous": {"type": "array"}
  }
})");
  return s;
}

inline const nlohmann::json& check_report_schema() {
  static const nlohmann::json s = nlohmann::json::parse(R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "grapheneqg invariant check report",
  "type": "object",
  "required": ["schema_version", "engine_version", "results", "failures"],
  "properties": {
    "schema_version": {"type": "string"},
    "engine_version": {"type": "string"},
    "results": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["name", "pass", "detail"],
        "properties": {
          "name": {"type": "string"},
          "pass": {"type": "boolean"},
          "detail": {"type": "string"}
        }
      }
    },
    "failures": {"type": "integer"}
  }
})");
  return s;
}

}  // namespace gqg
