#pragma once

#include <string>

#include "sparsedetect/bench.hpp"

namespace sparsedetect::config {

/// A run configuration as read from JSON.
///
///   {
///     "design": {"variant": "gaussian", "n": 2000, "p": 10000},
///     "model": "SFEM",                  // or "SREM"
///     "signal_parameter": "r",          // SFEM only: "r" or "amplitude"
///     "alpha_grid": [0.75],
///     "signal_grid": [0.125, 0.25, 0.5],
///     "trials": 200,
///     "seed": 0,
///     "sigma": 1.0,
///     "sigma_known": true,
///     "tests": ["ANOVA", "MAX", "HC_CONT", "HC_DISC"],
///     "s_policy": "adaptive-one",       // "theorem" | "adaptive-one" | "sqrt2"
///     "fresh_design_per_trial": true,
///     "zeta_rescale": false,
///     "threads": 1,
///     "plot": false
///   }
///
/// The design may also be given in its text form, "gaussian;n=2000;p=10000".
/// Only design, alpha_grid, signal_grid and tests are required. Unknown keys
/// are rejected.
struct RunConfig {
  bench::ExperimentConfig experiment;
  bool plot = false;
};

/// Throws Error(Parse) with line and column for malformed JSON, and
/// Error(Parameter) naming the offending field for invalid values.
RunConfig parse(const std::string& json_text);

/// Fully resolved JSON (every field present), pretty-printed.
std::string to_json(const RunConfig& config);

}  // namespace sparsedetect::config
