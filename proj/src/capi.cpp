#include "sparsedetect/sparsedetect.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sparsedetect/alternatives.hpp"
#include "sparsedetect/bench.hpp"
#include "sparsedetect/boundaries.hpp"
#include "sparsedetect/config.hpp"
#include "sparsedetect/designs.hpp"
#include "sparsedetect/error.hpp"
#include "sparsedetect/presets.hpp"
#include "sparsedetect/report.hpp"
#include "sparsedetect/stats.hpp"

namespace sd = sparsedetect;

struct sd_design {
  sd::designs::DesignMatrix matrix;
};

struct sd_signal {
  sd::alternatives::AlternativeSpec spec;
  sd::alternatives::SignalInstance instance;
};

struct sd_experiment {
  sd::config::RunConfig config;
};

struct sd_results {
  sd::bench::ExperimentConfig config;
  std::vector<sd::bench::RiskEstimate> estimates;
  std::vector<sd::report::Plot> plots;
};

namespace {

thread_local std::string last_error;

sd_status map_code(sd::ErrorCode code) {
  switch (code) {
    case sd::ErrorCode::Parameter: return SD_ERR_PARAMETER;
    case sd::ErrorCode::Domain: return SD_ERR_DOMAIN;
    case sd::ErrorCode::Dimension: return SD_ERR_DIMENSION;
    case sd::ErrorCode::EmptyGrid: return SD_ERR_EMPTY_GRID;
    case sd::ErrorCode::Parse: return SD_ERR_PARSE;
    case sd::ErrorCode::Io: return SD_ERR_IO;
    case sd::ErrorCode::Runtime: return SD_ERR_RUNTIME;
  }
  return SD_ERR_RUNTIME;
}

template <class F>
sd_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return SD_OK;
  } catch (const sd::Error& e) {
    last_error = e.what();
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return SD_ERR_RUNTIME;
  } catch (const std::exception& e) {
    last_error = e.what();
    return SD_ERR_RUNTIME;
  } catch (...) {
    last_error = "unknown error";
    return SD_ERR_RUNTIME;
  }
}

sd_status null_argument(const char* name) {
  last_error = std::string("null argument: ") + name;
  return SD_ERR_NULL_ARGUMENT;
}

#define SD_REQUIRE(ptr) \
  do {                  \
    if (!(ptr)) return null_argument(#ptr); \
  } while (0)

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

Eigen::VectorXd to_vector(const double* data, std::size_t len) {
  return Eigen::Map<const Eigen::VectorXd>(data, static_cast<Eigen::Index>(len));
}

void check_length(std::size_t got, std::size_t want, const char* what) {
  if (got != want)
    sd::fail(sd::ErrorCode::Dimension, std::string(what) + ": expected length " + std::to_string(want) +
                                           ", got " + std::to_string(got));
}

}  // namespace

extern "C" {

const char* sd_version(void) { return SPARSEDETECT_VERSION; }

const char* sd_status_string(sd_status status) {
  switch (status) {
    case SD_OK: return "ok";
    case SD_ERR_PARAMETER: return "invalid parameter";
    case SD_ERR_DOMAIN: return "outside domain";
    case SD_ERR_DIMENSION: return "dimension mismatch";
    case SD_ERR_EMPTY_GRID: return "empty grid";
    case SD_ERR_PARSE: return "parse error";
    case SD_ERR_IO: return "i/o error";
    case SD_ERR_RUNTIME: return "runtime error";
    case SD_ERR_NULL_ARGUMENT: return "null argument";
  }
  return "unknown status";
}

const char* sd_last_error(void) { return last_error.c_str(); }

void sd_string_free(char* s) { std::free(s); }

sd_status sd_rho_star(double alpha, double* out) {
  SD_REQUIRE(out);
  return guarded([&] { *out = sd::boundaries::rho_star(alpha); });
}

sd_status sd_rho_max(double alpha, double* out) {
  SD_REQUIRE(out);
  return guarded([&] { *out = sd::boundaries::rho_max(alpha); });
}

sd_status sd_rho_rand(double alpha, double* out, sd_boundary_flag* flag) {
  SD_REQUIRE(out);
  return guarded([&] {
    const auto b = sd::boundaries::rho_rand(alpha);
    *out = b.value;
    if (flag) *flag = static_cast<sd_boundary_flag>(b.flag);
  });
}

sd_status sd_boundary_table_csv(double alpha_min, double alpha_max, double step, int has_step, char** csv) {
  SD_REQUIRE(csv);
  return guarded([&] {
    std::optional<double> s;
    if (has_step) s = step;
    *csv = duplicate(sd::boundaries::boundary_table_csv(sd::boundaries::alpha_grid(alpha_min, alpha_max, s)));
  });
}

sd_status sd_anova_power_scaling(const sd_design* x, const double* beta, size_t p, double* out) {
  SD_REQUIRE(x);
  SD_REQUIRE(beta);
  SD_REQUIRE(out);
  return guarded([&] {
    check_length(p, x->matrix.p(), "beta");
    *out = sd::boundaries::anova_power_scaling(x->matrix, to_vector(beta, p));
  });
}

sd_status sd_design_build(const char* spec, uint64_t seed, sd_design** out) {
  SD_REQUIRE(spec);
  SD_REQUIRE(out);
  return guarded([&] {
    *out = new sd_design{sd::designs::build_design(sd::designs::parse_spec(spec), seed)};
  });
}

sd_status sd_design_read_csv(const char* path, sd_design** out) {
  SD_REQUIRE(path);
  SD_REQUIRE(out);
  return guarded([&] { *out = new sd_design{sd::designs::read_csv(path)}; });
}

sd_status sd_design_write_csv(const sd_design* x, const char* path) {
  SD_REQUIRE(x);
  SD_REQUIRE(path);
  return guarded([&] { sd::designs::write_csv(x->matrix, path); });
}

void sd_design_free(sd_design* x) { delete x; }

sd_status sd_design_dims(const sd_design* x, size_t* n, size_t* p) {
  SD_REQUIRE(x);
  if (n) *n = x->matrix.n();
  if (p) *p = x->matrix.p();
  return SD_OK;
}

sd_status sd_design_spec(const sd_design* x, char** spec) {
  SD_REQUIRE(x);
  SD_REQUIRE(spec);
  return guarded([&] { *spec = duplicate(sd::designs::to_string(x->matrix.spec())); });
}

sd_status sd_design_values(const sd_design* x, double* out, size_t len) {
  SD_REQUIRE(x);
  SD_REQUIRE(out);
  return guarded([&] {
    check_length(len, x->matrix.n() * x->matrix.p(), "design buffer");
    const Eigen::MatrixXd dense = x->matrix.dense();
    std::memcpy(out, dense.data(), len * sizeof(double));
  });
}

sd_status sd_design_gram(const sd_design* x, double* out, size_t len) {
  SD_REQUIRE(x);
  SD_REQUIRE(out);
  return guarded([&] {
    const std::size_t p = x->matrix.p();
    check_length(len, p * p, "gram buffer");
    const Eigen::MatrixXd c = sd::designs::gram(x->matrix);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j)
        out[i * p + j] = c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  });
}

sd_status sd_design_coherence(const sd_design* x, double gamma, double strong_delta, double* max_offdiag,
                              size_t* delta_observed, int* strong_ok) {
  SD_REQUIRE(x);
  return guarded([&] {
    std::optional<double> delta;
    if (strong_delta > 0) delta = strong_delta;
    const auto profile = sd::designs::coherence_profile(sd::designs::gram(x->matrix), gamma, delta);
    if (max_offdiag) *max_offdiag = profile.max_offdiag;
    if (delta_observed) *delta_observed = profile.delta_observed;
    if (strong_ok) *strong_ok = profile.strong_ok ? 1 : 0;
  });
}

sd_status sd_coherence_lower_bound(size_t n, size_t p, double* out) {
  SD_REQUIRE(out);
  return guarded([&] { *out = sd::designs::coherence_lower_bound(n, p); });
}

sd_status sd_sparsity_from_alpha(size_t p, double alpha, size_t* out) {
  SD_REQUIRE(out);
  return guarded([&] { *out = sd::alternatives::sparsity_from_alpha(p, alpha); });
}

sd_status sd_amplitude_from_r(size_t p, double r, double* out) {
  SD_REQUIRE(out);
  return guarded([&] { *out = sd::alternatives::amplitude_from_r(p, r); });
}

sd_status sd_signal_sample(const char* model, size_t p, double alpha, double signal, int signal_is_amplitude,
                           uint64_t seed, sd_signal** out) {
  SD_REQUIRE(model);
  SD_REQUIRE(out);
  return guarded([&] {
    using sd::alternatives::AlternativeSpec;
    const auto m = sd::alternatives::parse_model(model);
    AlternativeSpec spec = m == sd::alternatives::Model::Srem ? AlternativeSpec::srem(p, alpha, signal)
                           : signal_is_amplitude ? AlternativeSpec::sfem_amplitude(p, alpha, signal)
                                                 : AlternativeSpec::sfem_rate(p, alpha, signal);
    auto instance = sd::alternatives::sample(spec, seed);
    *out = new sd_signal{std::move(spec), std::move(instance)};
  });
}

void sd_signal_free(sd_signal* s) { delete s; }

sd_status sd_signal_values(const sd_signal* s, double* beta, size_t p) {
  SD_REQUIRE(s);
  SD_REQUIRE(beta);
  return guarded([&] {
    check_length(p, static_cast<std::size_t>(s->instance.beta.size()), "beta");
    std::memcpy(beta, s->instance.beta.data(), p * sizeof(double));
  });
}

sd_status sd_signal_support(const sd_signal* s, size_t* indices, size_t capacity, size_t* count) {
  SD_REQUIRE(s);
  const auto& support = s->instance.support;
  if (count) *count = support.size();
  if (indices) {
    const std::size_t m = std::min(capacity, support.size());
    for (std::size_t i = 0; i < m; ++i) indices[i] = support[i];
  }
  return SD_OK;
}

sd_status sd_signal_write_csv(const sd_signal* s, const char* path) {
  SD_REQUIRE(s);
  SD_REQUIRE(path);
  return guarded([&] { sd::alternatives::write_csv(s->spec, s->instance, path); });
}

sd_status sd_synthesize(const sd_design* x, const sd_signal* s, double sigma, uint64_t seed, double* y, size_t n) {
  SD_REQUIRE(x);
  SD_REQUIRE(s);
  SD_REQUIRE(y);
  return guarded([&] {
    check_length(n, x->matrix.n(), "y");
    const Eigen::VectorXd obs = sd::alternatives::synthesize_observation(x->matrix, s->instance, sigma, seed);
    std::memcpy(y, obs.data(), n * sizeof(double));
  });
}

double sd_gaussian_survival(double t) { return sd::stats::gaussian_survival(t); }

sd_status sd_stat_anova(const sd_design* x, const double* y, size_t n, double* value) {
  SD_REQUIRE(x);
  SD_REQUIRE(y);
  SD_REQUIRE(value);
  return guarded([&] {
    check_length(n, x->matrix.n(), "y");
    *value = sd::stats::anova_stat(x->matrix, to_vector(y, n)).value;
  });
}

sd_status sd_stat_max(const sd_design* x, const double* y, size_t n, double* value, size_t* index) {
  SD_REQUIRE(x);
  SD_REQUIRE(y);
  SD_REQUIRE(value);
  return guarded([&] {
    check_length(n, x->matrix.n(), "y");
    const auto outcome = sd::stats::max_stat(x->matrix, to_vector(y, n));
    *value = outcome.value;
    if (index) *index = static_cast<std::size_t>(outcome.location.value_or(0.0));
  });
}

sd_status sd_stat_hc_continuous(const double* v, size_t p, double* value, double* t_at_max) {
  SD_REQUIRE(v);
  SD_REQUIRE(value);
  return guarded([&] {
    const auto outcome = sd::stats::hc_continuous(std::span<const double>(v, p));
    *value = outcome.value;
    if (t_at_max) *t_at_max = outcome.location.value_or(0.0);
  });
}

sd_status sd_stat_hc_discretized(const double* v, size_t p, double s, double* value, double* t_at_max) {
  SD_REQUIRE(v);
  SD_REQUIRE(value);
  return guarded([&] {
    const auto outcome = sd::stats::hc_discretized(std::span<const double>(v, p), s);
    *value = outcome.value;
    if (t_at_max) *t_at_max = outcome.location.value_or(0.0);
  });
}

sd_status sd_hc_grid_start(double alpha, size_t p, double* s) {
  SD_REQUIRE(s);
  return guarded([&] { *s = sd::stats::hc_grid_start(alpha, p); });
}

sd_status sd_estimate_sigma(const double* y, size_t n, double* sigma_hat, int* degenerate) {
  SD_REQUIRE(y);
  SD_REQUIRE(sigma_hat);
  return guarded([&] {
    const auto est = sd::stats::estimate_sigma(to_vector(y, n));
    *sigma_hat = est.sigma_hat;
    if (degenerate) *degenerate = est.degenerate ? 1 : 0;
  });
}

sd_status sd_experiment_from_json(const char* json, sd_experiment** out) {
  SD_REQUIRE(json);
  SD_REQUIRE(out);
  return guarded([&] { *out = new sd_experiment{sd::config::parse(json)}; });
}

sd_status sd_preset_count(const char* name, size_t* count) {
  SD_REQUIRE(name);
  SD_REQUIRE(count);
  return guarded([&] { *count = sd::presets::preset(name).size(); });
}

sd_status sd_preset_experiment(const char* name, size_t index, sd_experiment** out) {
  SD_REQUIRE(name);
  SD_REQUIRE(out);
  return guarded([&] {
    auto configs = sd::presets::preset(name);
    if (index >= configs.size())
      sd::fail(sd::ErrorCode::Parameter, "preset index " + std::to_string(index) + " out of range");
    *out = new sd_experiment{sd::config::RunConfig{std::move(configs[index]), true}};
  });
}

sd_status sd_preset_description(const char* name, char** text) {
  SD_REQUIRE(name);
  SD_REQUIRE(text);
  return guarded([&] { *text = duplicate(sd::presets::description(name)); });
}

void sd_experiment_free(sd_experiment* e) { delete e; }

sd_status sd_experiment_set_seed(sd_experiment* e, uint64_t seed) {
  SD_REQUIRE(e);
  e->config.experiment.master_seed = seed;
  return SD_OK;
}

sd_status sd_experiment_set_trials(sd_experiment* e, size_t trials) {
  SD_REQUIRE(e);
  return guarded([&] {
    auto updated = e->config.experiment;
    updated.trials = trials;
    sd::bench::validate(updated);
    e->config.experiment = std::move(updated);
  });
}

sd_status sd_experiment_set_threads(sd_experiment* e, unsigned threads) {
  SD_REQUIRE(e);
  return guarded([&] {
    auto updated = e->config.experiment;
    updated.threads = threads;
    sd::bench::validate(updated);
    e->config.experiment = std::move(updated);
  });
}

sd_status sd_experiment_set_plot(sd_experiment* e, int plot) {
  SD_REQUIRE(e);
  e->config.plot = plot != 0;
  return SD_OK;
}

sd_status sd_experiment_plot(const sd_experiment* e, int* plot) {
  SD_REQUIRE(e);
  SD_REQUIRE(plot);
  *plot = e->config.plot ? 1 : 0;
  return SD_OK;
}

sd_status sd_experiment_cell_count(const sd_experiment* e, size_t* count) {
  SD_REQUIRE(e);
  SD_REQUIRE(count);
  const auto& x = e->config.experiment;
  *count = x.alpha_grid.size() * x.signal_grid.size() * x.tests.size();
  return SD_OK;
}

sd_status sd_experiment_to_json(const sd_experiment* e, char** json) {
  SD_REQUIRE(e);
  SD_REQUIRE(json);
  return guarded([&] { *json = duplicate(sd::config::to_json(e->config)); });
}

sd_status sd_experiment_run(const sd_experiment* e, sd_results** out) {
  SD_REQUIRE(e);
  SD_REQUIRE(out);
  return guarded([&] {
    auto results = std::make_unique<sd_results>();
    results->config = e->config.experiment;
    results->estimates = sd::bench::run_grid(results->config);
    if (e->config.plot) results->plots = sd::report::risk_plots(results->config, results->estimates);
    *out = results.release();
  });
}

void sd_results_free(sd_results* r) { delete r; }

sd_status sd_results_count(const sd_results* r, size_t* count) {
  SD_REQUIRE(r);
  SD_REQUIRE(count);
  *count = r->estimates.size();
  return SD_OK;
}

sd_status sd_results_risk(const sd_results* r, size_t index, double* best_risk, double* best_threshold,
                          double* std_err) {
  SD_REQUIRE(r);
  return guarded([&] {
    if (index >= r->estimates.size())
      sd::fail(sd::ErrorCode::Parameter, "result index " + std::to_string(index) + " out of range");
    const auto& est = r->estimates[index];
    if (best_risk) *best_risk = est.best_risk;
    if (best_threshold) *best_threshold = est.best_threshold;
    if (std_err) *std_err = est.standard_error;
  });
}

const char* sd_results_csv_header(void) {
  static const std::string header = sd::report::csv_header();
  return header.c_str();
}

sd_status sd_results_csv(const sd_results* r, char** csv) {
  SD_REQUIRE(r);
  SD_REQUIRE(csv);
  return guarded([&] { *csv = duplicate(sd::report::csv_rows(r->config, r->estimates)); });
}

sd_status sd_results_plot_count(const sd_results* r, size_t* count) {
  SD_REQUIRE(r);
  SD_REQUIRE(count);
  *count = r->plots.size();
  return SD_OK;
}

sd_status sd_results_plot(const sd_results* r, size_t index, char** file_name, char** svg) {
  SD_REQUIRE(r);
  return guarded([&] {
    if (index >= r->plots.size())
      sd::fail(sd::ErrorCode::Parameter, "plot index " + std::to_string(index) + " out of range");
    char* name = file_name ? duplicate(r->plots[index].file_name) : nullptr;
    try {
      if (svg) *svg = duplicate(r->plots[index].svg);
    } catch (...) {
      std::free(name);
      throw;
    }
    if (file_name) *file_name = name;
  });
}

sd_status sd_results_monotonicity_report(const sd_results* r, char** text) {
  SD_REQUIRE(r);
  SD_REQUIRE(text);
  return guarded([&] {
    std::string out;
    for (const auto& v : sd::bench::check_monotone_power(r->estimates)) {
      out += sd::stats::to_string(v.test) + " alpha=" + std::to_string(v.alpha) + ": risk " +
             std::to_string(v.risk_low) + " at signal " + std::to_string(v.signal_low) + " rises to " +
             std::to_string(v.risk_high) + " at signal " + std::to_string(v.signal_high) + "\n";
    }
    *text = duplicate(out);
  });
}

}  // extern "C"
