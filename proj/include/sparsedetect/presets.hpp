#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sparsedetect/bench.hpp"

namespace sparsedetect::presets {

/// Built-in, scaled-down reproductions of the published risk-curve figures.
///
/// fig1-desk: p = 2000; identity, Gaussian n = 400 and Gaussian n = 100
///            designs (the 10000 / 2000 / 500 layout shrunk by 5).
/// fig2-desk: p = 5000; identity, Gaussian n = 250 and Gaussian n = 50
///            (the 100000 / 5000 / 1000 layout shrunk by 20).
/// Both: SFEM, alpha in {0.5, 0.65, 0.8}, r in {0.025, 0.05, 0.1, 0.2, 0.4,
/// 0.8, 1.6}, tests ANOVA, MAX, HC_CONT, 200 trials, fresh design per trial.
std::vector<std::string> names();

/// Throws Error(Parameter) for an unknown preset name.
std::vector<bench::ExperimentConfig> preset(const std::string& name);

std::string description(const std::string& name);

/// Number of result rows the preset produces.
std::size_t cell_count(const std::string& name);

}  // namespace sparsedetect::presets
