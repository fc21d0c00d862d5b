// sparsedetect command-line front end. Talks to the library only through the
// C interface in sparsedetect.h.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sparsedetect/sparsedetect.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct Failure : std::runtime_error {
  int exit_code;
  Failure(int code, const std::string& what) : std::runtime_error(what), exit_code(code) {}
};

int exit_code_for(sd_status status) {
  switch (status) {
    case SD_ERR_IO:
    case SD_ERR_RUNTIME: return kExitRuntime;
    default: return kExitUsage;
  }
}

void check(sd_status status) {
  if (status != SD_OK) throw Failure(exit_code_for(status), sd_last_error());
}

// Runtime-class failure regardless of the status category.
void check_runtime(sd_status status) {
  if (status == SD_OK) return;
  throw Failure(status == SD_ERR_PARAMETER || status == SD_ERR_PARSE ? kExitUsage : kExitRuntime,
                sd_last_error());
}

struct OwnedString {
  char* p = nullptr;
  ~OwnedString() { sd_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

struct ExperimentDeleter {
  void operator()(sd_experiment* e) const { sd_experiment_free(e); }
};
struct ResultsDeleter {
  void operator()(sd_results* r) const { sd_results_free(r); }
};
struct DesignDeleter {
  void operator()(sd_design* d) const { sd_design_free(d); }
};
struct SignalDeleter {
  void operator()(sd_signal* s) const { sd_signal_free(s); }
};
using Experiment = std::unique_ptr<sd_experiment, ExperimentDeleter>;
using Results = std::unique_ptr<sd_results, ResultsDeleter>;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure(kExitUsage, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Failure(kExitRuntime, "cannot write " + path.string());
  out << text;
  if (!out) throw Failure(kExitRuntime, "write failed: " + path.string());
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    write_text(out_path, text);
  }
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<unsigned> threads;
  bool plot = false;
};

void apply(sd_experiment* e, const RunOverrides& o) {
  if (o.seed) check(sd_experiment_set_seed(e, *o.seed));
  if (o.trials) check(sd_experiment_set_trials(e, *o.trials));
  if (o.threads) check(sd_experiment_set_threads(e, *o.threads));
  if (o.plot) check(sd_experiment_set_plot(e, 1));
}

// Runs every experiment, writing results.csv, manifest.json and plots/.
void run_all(std::vector<Experiment>& experiments, const fs::path& out_dir, const std::string& label) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Failure(kExitRuntime, "cannot create " + out_dir.string() + ": " + ec.message());

  const std::string started = utc_now();
  json configs = json::array();
  for (auto& e : experiments) {
    OwnedString text;
    check(sd_experiment_to_json(e.get(), &text.p));
    configs.push_back(json::parse(text.str()));
  }

  std::string csv = std::string(sd_results_csv_header()) + "\n";
  std::vector<std::string> plot_paths;
  for (auto& e : experiments) {
    sd_results* raw = nullptr;
    check_runtime(sd_experiment_run(e.get(), &raw));
    Results results(raw);

    OwnedString rows;
    check(sd_results_csv(results.get(), &rows.p));
    csv += rows.str();

    OwnedString warnings;
    check(sd_results_monotonicity_report(results.get(), &warnings.p));
    if (!warnings.str().empty()) std::cerr << "warning: non-monotone risk\n" << warnings.str();

    std::size_t plots = 0;
    check(sd_results_plot_count(results.get(), &plots));
    if (plots > 0) {
      fs::create_directories(out_dir / "plots", ec);
      if (ec) throw Failure(kExitRuntime, "cannot create plots directory: " + ec.message());
    }
    for (std::size_t i = 0; i < plots; ++i) {
      OwnedString name, svg;
      check(sd_results_plot(results.get(), i, &name.p, &svg.p));
      const fs::path path = out_dir / "plots" / name.str();
      write_text(path, svg.str());
      plot_paths.push_back(path.string());
    }
  }

  const fs::path csv_path = out_dir / "results.csv";
  write_text(csv_path, csv);

  json manifest;
  manifest["tool"] = "sparsedetect";
  manifest["version"] = sd_version();
  manifest["command"] = label;
  manifest["started_at"] = started;
  manifest["finished_at"] = utc_now();
  if (configs.size() == 1) {
    manifest["config"] = configs[0];
  } else {
    manifest["configs"] = configs;
  }
  manifest["outputs"] = {{"results", csv_path.string()}, {"plots", plot_paths}};
  write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
  std::cerr << "wrote " << csv_path.string() << "\n";
}

Experiment experiment_from_json(const std::string& text) {
  sd_experiment* raw = nullptr;
  check(sd_experiment_from_json(text.c_str(), &raw));
  return Experiment(raw);
}

// A config file, or a manifest written by an earlier run.
std::vector<Experiment> load_experiments(const std::string& path) {
  const std::string text = read_text(path);
  std::vector<Experiment> out;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception&) {
    // Let the library produce the positioned parse error.
    out.push_back(experiment_from_json(text));
    return out;
  }
  if (doc.is_object() && doc.contains("config")) {
    out.push_back(experiment_from_json(doc["config"].dump()));
  } else if (doc.is_object() && doc.contains("configs") && doc["configs"].is_array()) {
    for (const auto& c : doc["configs"]) out.push_back(experiment_from_json(c.dump()));
    if (out.empty()) throw Failure(kExitUsage, "manifest lists no configs");
  } else {
    out.push_back(experiment_from_json(text));
  }
  return out;
}

int cmd_boundary_table(double alpha_min, std::optional<double> alpha_max, std::optional<double> step,
                       const std::string& out) {
  OwnedString csv;
  check(sd_boundary_table_csv(alpha_min, alpha_max.value_or(alpha_min), step.value_or(0.0), step.has_value(),
                              &csv.p));
  emit(csv.str(), out);
  return kExitOk;
}

int cmd_design(const std::string& spec, std::uint64_t seed, const std::string& out,
               std::optional<double> gamma) {
  sd_design* raw = nullptr;
  check(sd_design_build(spec.c_str(), seed, &raw));
  std::unique_ptr<sd_design, DesignDeleter> design(raw);
  std::size_t n = 0, p = 0;
  check(sd_design_dims(design.get(), &n, &p));
  if (!out.empty()) {
    check(sd_design_write_csv(design.get(), out.c_str()));
  }
  std::cout << "n=" << n << " p=" << p << "\n";
  if (gamma) {
    double mu = 0;
    std::size_t delta = 0;
    int strong = 0;
    check(sd_design_coherence(design.get(), *gamma, 0.0, &mu, &delta, &strong));
    std::cout << "max_offdiag=" << mu << " delta_observed=" << delta
              << " strong_ok=" << (strong ? "true" : "false") << "\n";
  }
  return kExitOk;
}

int cmd_signal(const std::string& model, std::size_t p, double alpha, std::optional<double> r,
               std::optional<double> amplitude, std::optional<double> tau, std::uint64_t seed,
               const std::string& out) {
  const int given = int(r.has_value()) + int(amplitude.has_value()) + int(tau.has_value());
  if (given != 1) throw Failure(kExitUsage, "exactly one of --r, --amplitude, --tau is required");
  const bool srem = model == "SREM" || model == "srem";
  if (srem != tau.has_value()) throw Failure(kExitUsage, "--tau goes with SREM, --r/--amplitude with SFEM");
  const double value = r ? *r : amplitude ? *amplitude : *tau;
  sd_signal* raw = nullptr;
  check(sd_signal_sample(model.c_str(), p, alpha, value, amplitude.has_value(), seed, &raw));
  std::unique_ptr<sd_signal, SignalDeleter> signal(raw);
  if (out.empty() || out == "-") {
    const fs::path tmp = fs::temp_directory_path() / ("sparsedetect_signal_" + std::to_string(seed) + ".csv");
    check(sd_signal_write_csv(signal.get(), tmp.string().c_str()));
    std::cout << read_text(tmp.string());
    std::error_code ec;
    fs::remove(tmp, ec);
  } else {
    check(sd_signal_write_csv(signal.get(), out.c_str()));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Global testing under sparse alternatives in the linear model y = X beta + z."};
  app.set_version_flag("--version", std::string(sd_version()));
  app.require_subcommand(1);

  // boundary-table
  auto* bt = app.add_subcommand("boundary-table", "Print alpha, rho_star, rho_max, rho_rand as CSV.");
  double bt_min = 0;
  std::optional<double> bt_max, bt_step;
  std::string bt_out;
  bt->add_option("--alpha-min", bt_min, "First alpha")->required();
  bt->add_option("--alpha-max", bt_max, "Last alpha (defaults to --alpha-min)");
  bt->add_option("--step", bt_step, "Grid step; omit for a single row");
  bt->add_option("--out", bt_out, "Output file (default stdout)");

  // run
  auto* run = app.add_subcommand("run", "Run an experiment grid from a JSON config or a manifest.");
  std::string run_config, run_out = "out";
  RunOverrides run_over;
  run->add_option("--config", run_config, "Config JSON or manifest.json")->required();
  run->add_option("--out", run_out, "Output directory")->capture_default_str();
  run->add_option("--seed", run_over.seed, "Master seed (overrides the config)");
  run->add_option("--trials", run_over.trials, "Trials per cell (overrides the config)");
  run->add_option("--threads", run_over.threads, "Worker threads (results do not depend on it)");
  run->add_flag("--plot", run_over.plot, "Write risk-versus-signal SVG plots");

  // reproduce
  auto* rep = app.add_subcommand("reproduce", "Run a built-in desk-scale reproduction (fig1-desk, fig2-desk).");
  std::string rep_name, rep_out;
  RunOverrides rep_over;
  bool rep_describe = false;
  rep->add_option("preset", rep_name, "Preset name")->required();
  rep->add_option("--out", rep_out, "Output directory (default: the preset name)");
  rep->add_option("--seed", rep_over.seed, "Master seed");
  rep->add_option("--trials", rep_over.trials, "Trials per cell");
  rep->add_option("--threads", rep_over.threads, "Worker threads");
  rep->add_flag("--describe", rep_describe, "Print the preset definition and exit");

  // design
  auto* des = app.add_subcommand("design", "Build a design matrix, optionally writing it as CSV.");
  std::string des_spec, des_out;
  std::uint64_t des_seed = 0;
  std::optional<double> des_gamma;
  des->add_option("--spec", des_spec, "Design spec, e.g. gaussian;n=100;p=400")->required();
  des->add_option("--seed", des_seed, "Seed")->capture_default_str();
  des->add_option("--out", des_out, "CSV output file");
  des->add_option("--coherence", des_gamma, "Report coherence profile at this gamma");

  // signal
  auto* sig = app.add_subcommand("signal", "Sample a sparse coefficient vector as CSV.");
  std::string sig_model = "SFEM", sig_out;
  std::size_t sig_p = 0;
  double sig_alpha = 0;
  std::optional<double> sig_r, sig_a, sig_tau;
  std::uint64_t sig_seed = 0;
  sig->add_option("--model", sig_model, "SFEM or SREM")->capture_default_str();
  sig->add_option("--p", sig_p, "Dimension")->required();
  sig->add_option("--alpha", sig_alpha, "Sparsity index")->required();
  sig->add_option("--r", sig_r, "SFEM rate");
  sig->add_option("--amplitude", sig_a, "SFEM amplitude");
  sig->add_option("--tau", sig_tau, "SREM scale");
  sig->add_option("--seed", sig_seed, "Seed")->capture_default_str();
  sig->add_option("--out", sig_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*bt) return cmd_boundary_table(bt_min, bt_max, bt_step, bt_out);
    if (*run) {
      auto experiments = load_experiments(run_config);
      for (auto& e : experiments) apply(e.get(), run_over);
      run_all(experiments, run_out, "run");
      return kExitOk;
    }
    if (*rep) {
      std::size_t count = 0;
      check(sd_preset_count(rep_name.c_str(), &count));
      if (rep_describe) {
        OwnedString text;
        check(sd_preset_description(rep_name.c_str(), &text.p));
        std::cout << text.str() << "\n";
        return kExitOk;
      }
      std::vector<Experiment> experiments;
      for (std::size_t i = 0; i < count; ++i) {
        sd_experiment* raw = nullptr;
        check(sd_preset_experiment(rep_name.c_str(), i, &raw));
        experiments.emplace_back(raw);
        apply(raw, rep_over);
      }
      run_all(experiments, rep_out.empty() ? rep_name : rep_out, "reproduce " + rep_name);
      return kExitOk;
    }
    if (*des) return cmd_design(des_spec, des_seed, des_out, des_gamma);
    if (*sig) return cmd_signal(sig_model, sig_p, sig_alpha, sig_r, sig_a, sig_tau, sig_seed, sig_out);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.what() << "\n";
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
