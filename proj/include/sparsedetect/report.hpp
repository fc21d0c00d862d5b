#pragma once

#include <string>
#include <vector>

#include "sparsedetect/bench.hpp"

namespace sparsedetect::report {

/// Header of the results table, without trailing newline.
std::string csv_header();

/// One row per risk estimate:
/// design,variant-params,model,alpha,S,signal,test,s_policy,trials,best_risk,best_threshold,std_err,master_seed
/// Reals use 10 significant digits; s_policy is "-" for tests other than HC_DISC.
std::string csv_rows(const bench::ExperimentConfig& config, const std::vector<bench::RiskEstimate>& results);

struct Plot {
  std::string file_name;  // e.g. "gaussian_n400_p2000_alpha0.65.svg"
  std::string svg;
};

/// One risk-versus-signal panel per alpha, one polyline per test.
std::vector<Plot> risk_plots(const bench::ExperimentConfig& config, const std::vector<bench::RiskEstimate>& results);

}  // namespace sparsedetect::report
