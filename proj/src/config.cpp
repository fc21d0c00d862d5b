#include "sparsedetect/config.hpp"

#include <set>

#include "json.hpp"

#include "sparsedetect/error.hpp"

namespace sparsedetect::config {

using nlohmann::json;

namespace {

std::string position(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

designs::DesignSpec parse_design(const json& j) {
  if (j.is_string()) return designs::parse_spec(j.get<std::string>());
  if (!j.is_object() || !j.contains("variant")) fail(ErrorCode::Parameter, "design needs a 'variant'");
  std::string text = j.at("variant").get<std::string>();
  for (const auto& [key, value] : j.items()) {
    if (key == "variant") continue;
    text += ";" + key + "=" + (value.is_string() ? value.get<std::string>() : value.dump());
  }
  return designs::parse_spec(text);
}

json design_json(const designs::DesignSpec& spec) {
  json out = {{"variant", designs::variant_name(spec)}};
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, designs::Identity>) {
          out["p"] = s.p;
        } else if constexpr (std::is_same_v<T, designs::BalancedOneWay> ||
                             std::is_same_v<T, designs::BalancedOneWayConstrained>) {
          out["p"] = s.p;
          out["k"] = s.k;
        } else if constexpr (std::is_same_v<T, designs::ConstantCorrelation>) {
          out["p"] = s.p;
          out["gamma"] = s.gamma;
          out["n"] = s.n;
        } else if constexpr (std::is_same_v<T, designs::BasisConcatenation>) {
          out["n"] = s.n;
        } else {
          out["n"] = s.n;
          out["p"] = s.p;
        }
      },
      spec);
  return out;
}

}  // namespace

RunConfig parse(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::Parse, "config " + position(text, e.byte > 0 ? e.byte - 1 : 0) + ": " + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::Parse, "config must be a JSON object");

  static const std::set<std::string> known = {
      "design", "model", "signal_parameter", "alpha_grid", "signal_grid", "trials", "seed", "sigma",
      "sigma_known", "tests", "s_policy", "fresh_design_per_trial", "zeta_rescale", "threads", "plot"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) fail(ErrorCode::Parameter, "config: unknown field '" + key + "'");
  for (const char* key : {"design", "alpha_grid", "signal_grid", "tests"})
    if (!j.contains(key)) fail(ErrorCode::Parameter, std::string("config: missing field '") + key + "'");

  RunConfig out;
  bench::ExperimentConfig& e = out.experiment;
  std::string field;
  try {
    field = "design";
    e.design = parse_design(j.at("design"));
    field = "model";
    if (j.contains("model")) e.model = alternatives::parse_model(j.at("model").get<std::string>());
    field = "signal_parameter";
    if (j.contains("signal_parameter")) {
      const auto sp = j.at("signal_parameter").get<std::string>();
      if (sp == "r") e.signal_parameter = bench::SignalParameter::Rate;
      else if (sp == "amplitude") e.signal_parameter = bench::SignalParameter::Amplitude;
      else fail(ErrorCode::Parameter, "expected 'r' or 'amplitude'");
    }
    field = "alpha_grid";
    e.alpha_grid = j.at("alpha_grid").get<std::vector<double>>();
    field = "signal_grid";
    e.signal_grid = j.at("signal_grid").get<std::vector<double>>();
    field = "trials";
    if (j.contains("trials")) e.trials = j.at("trials").get<std::size_t>();
    field = "seed";
    if (j.contains("seed")) e.master_seed = j.at("seed").get<std::uint64_t>();
    field = "sigma";
    if (j.contains("sigma")) e.sigma = j.at("sigma").get<double>();
    field = "sigma_known";
    if (j.contains("sigma_known")) e.sigma_known = j.at("sigma_known").get<bool>();
    field = "tests";
    e.tests.clear();
    for (const auto& t : j.at("tests")) e.tests.push_back(stats::parse_test_kind(t.get<std::string>()));
    field = "s_policy";
    if (j.contains("s_policy")) e.s_policy = bench::parse_s_policy(j.at("s_policy").get<std::string>());
    field = "fresh_design_per_trial";
    if (j.contains("fresh_design_per_trial")) e.fresh_design_per_trial = j.at("fresh_design_per_trial").get<bool>();
    field = "zeta_rescale";
    if (j.contains("zeta_rescale")) e.zeta_rescale = j.at("zeta_rescale").get<bool>();
    field = "threads";
    if (j.contains("threads")) e.threads = j.at("threads").get<unsigned>();
    field = "plot";
    if (j.contains("plot")) out.plot = j.at("plot").get<bool>();
  } catch (const json::exception& ex) {
    fail(ErrorCode::Parameter, "config: field '" + field + "': " + ex.what());
  } catch (const Error& ex) {
    fail(ErrorCode::Parameter, "config: field '" + field + "': " + ex.what());
  }

  try {
    bench::validate(e);
  } catch (const Error& ex) {
    fail(ErrorCode::Parameter, std::string("config: ") + ex.what());
  }
  return out;
}

std::string to_json(const RunConfig& config) {
  const bench::ExperimentConfig& e = config.experiment;
  json tests = json::array();
  for (auto t : e.tests) tests.push_back(stats::to_string(t));
  const json j = {
      {"design", design_json(e.design)},
      {"model", alternatives::to_string(e.model)},
      {"signal_parameter", e.signal_parameter == bench::SignalParameter::Rate ? "r" : "amplitude"},
      {"alpha_grid", e.alpha_grid},
      {"signal_grid", e.signal_grid},
      {"trials", e.trials},
      {"seed", e.master_seed},
      {"sigma", e.sigma},
      {"sigma_known", e.sigma_known},
      {"tests", tests},
      {"s_policy", bench::to_string(e.s_policy)},
      {"fresh_design_per_trial", e.fresh_design_per_trial},
      {"zeta_rescale", e.zeta_rescale},
      {"threads", e.threads},
      {"plot", config.plot},
  };
  return j.dump(2);
}

}  // namespace sparsedetect::config
