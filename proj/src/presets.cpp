#include "sparsedetect/presets.hpp"

#include "sparsedetect/error.hpp"

namespace sparsedetect::presets {

namespace {

bench::ExperimentConfig panel(designs::DesignSpec design) {
  bench::ExperimentConfig c;
  c.design = design;
  c.model = alternatives::Model::Sfem;
  c.signal_parameter = bench::SignalParameter::Rate;
  c.alpha_grid = {0.5, 0.65, 0.8};
  c.signal_grid = {0.025, 0.05, 0.1, 0.2, 0.4, 0.8, 1.6};
  c.trials = 200;
  c.tests = {stats::TestKind::Anova, stats::TestKind::HcCont, stats::TestKind::Max};
  c.fresh_design_per_trial = true;
  return c;
}

}  // namespace

std::vector<std::string> names() { return {"fig1-desk", "fig2-desk"}; }

std::vector<bench::ExperimentConfig> preset(const std::string& name) {
  using designs::GaussianNormalized;
  using designs::Identity;
  if (name == "fig1-desk")
    return {panel(Identity{2000}), panel(GaussianNormalized{400, 2000}), panel(GaussianNormalized{100, 2000})};
  if (name == "fig2-desk")
    return {panel(Identity{5000}), panel(GaussianNormalized{250, 5000}), panel(GaussianNormalized{50, 5000})};
  fail(ErrorCode::Parameter, "unknown preset '" + name + "' (available: fig1-desk, fig2-desk)");
}

std::string description(const std::string& name) {
  if (name == "fig1-desk")
    return "p = 2000; identity, Gaussian n = 400, Gaussian n = 100; SFEM; alpha {0.5, 0.65, 0.8}; "
           "r {0.025 .. 1.6}; ANOVA, HC_CONT, MAX; 200 trials";
  if (name == "fig2-desk")
    return "p = 5000; identity, Gaussian n = 250, Gaussian n = 50; SFEM; alpha {0.5, 0.65, 0.8}; "
           "r {0.025 .. 1.6}; ANOVA, HC_CONT, MAX; 200 trials";
  fail(ErrorCode::Parameter, "unknown preset '" + name + "' (available: fig1-desk, fig2-desk)");
}

std::size_t cell_count(const std::string& name) {
  std::size_t total = 0;
  for (const auto& c : preset(name)) total += c.alpha_grid.size() * c.signal_grid.size() * c.tests.size();
  return total;
}

}  // namespace sparsedetect::presets
