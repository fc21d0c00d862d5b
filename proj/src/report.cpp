#include "sparsedetect/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "text_util.hpp"

namespace sparsedetect::report {

using detail::format_sig;

std::string csv_header() {
  return "design,variant-params,model,alpha,S,signal,test,s_policy,trials,best_risk,best_threshold,std_err,"
         "master_seed";
}

std::string csv_rows(const bench::ExperimentConfig& config, const std::vector<bench::RiskEstimate>& results) {
  const std::string design = designs::variant_name(config.design);
  const std::string params = designs::variant_params(config.design);
  const std::string model = alternatives::to_string(config.model);
  std::string out;
  for (const auto& r : results) {
    out += design + "," + params + "," + model + "," + format_sig(r.alpha, 10) + "," + std::to_string(r.sparsity) +
           "," + format_sig(r.signal, 10) + "," + stats::to_string(r.test) + "," +
           (r.test == stats::TestKind::HcDisc ? bench::to_string(r.s_policy) : std::string("-")) + "," +
           std::to_string(r.n_trials) + "," + format_sig(r.best_risk, 10) + "," +
           format_sig(r.best_threshold, 10) + "," + format_sig(r.standard_error, 10) + "," +
           std::to_string(config.master_seed) + "\n";
  }
  return out;
}

namespace {

const char* color_for(stats::TestKind t) {
  switch (t) {
    case stats::TestKind::Anova: return "#d62728";
    case stats::TestKind::Max: return "#2ca02c";
    case stats::TestKind::HcCont: return "#1f77b4";
    case stats::TestKind::HcDisc: return "#9467bd";
  }
  return "#000000";
}

std::string file_stem(const bench::ExperimentConfig& config) {
  std::string params = designs::variant_params(config.design);
  params.erase(std::remove(params.begin(), params.end(), '='), params.end());
  std::replace(params.begin(), params.end(), ';', '_');
  return designs::variant_name(config.design) + "_" + params;
}

}  // namespace

std::vector<Plot> risk_plots(const bench::ExperimentConfig& config, const std::vector<bench::RiskEstimate>& results) {
  constexpr double width = 640, height = 420;
  constexpr double left = 70, right = 170, top = 40, bottom = 60;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  std::map<double, std::map<int, std::vector<const bench::RiskEstimate*>>> panels;
  for (const auto& r : results) panels[r.alpha][static_cast<int>(r.test)].push_back(&r);

  std::vector<Plot> out;
  for (auto& [alpha, curves] : panels) {
    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -xmin;
    for (auto& [test, pts] : curves) {
      std::sort(pts.begin(), pts.end(), [](auto* a, auto* b) { return a->signal < b->signal; });
      xmin = std::min(xmin, pts.front()->signal);
      xmax = std::max(xmax, pts.back()->signal);
    }
    if (xmax <= xmin) {
      xmin -= 0.5;
      xmax += 0.5;
    }
    auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * plot_w; };
    auto sy = [&](double y) { return top + (1.0 - std::clamp(y, 0.0, 1.0)) * plot_h; };

    const std::string xlabel = config.model == alternatives::Model::Srem
                                   ? "tau"
                                   : (config.signal_parameter == bench::SignalParameter::Rate ? "r" : "A");
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_sig(width, 6) + "\" height=\"" +
           format_sig(height, 6) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + format_sig(left, 6) + "\" y=\"22\" font-size=\"14\">" + designs::to_string(config.design) +
           ", alpha=" + format_sig(alpha, 6) + ", S=" +
           std::to_string(alternatives::sparsity_from_alpha(designs::cols(config.design), alpha)) + "</text>\n";
    // axes
    svg += "<line x1=\"" + format_sig(left, 6) + "\" y1=\"" + format_sig(top + plot_h, 6) + "\" x2=\"" +
           format_sig(left + plot_w, 6) + "\" y2=\"" + format_sig(top + plot_h, 6) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + format_sig(left, 6) + "\" y1=\"" + format_sig(top, 6) + "\" x2=\"" + format_sig(left, 6) +
           "\" y2=\"" + format_sig(top + plot_h, 6) + "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
      const double yv = k / 4.0;
      svg += "<text x=\"" + format_sig(left - 8, 6) + "\" y=\"" + format_sig(sy(yv) + 4, 6) +
             "\" text-anchor=\"end\">" + format_sig(yv, 3) + "</text>\n";
      const double xv = xmin + (xmax - xmin) * k / 4.0;
      svg += "<text x=\"" + format_sig(sx(xv), 6) + "\" y=\"" + format_sig(top + plot_h + 18, 6) +
             "\" text-anchor=\"middle\">" + format_sig(xv, 3) + "</text>\n";
    }
    svg += "<text x=\"" + format_sig(left + plot_w / 2, 6) + "\" y=\"" + format_sig(height - 15, 6) +
           "\" text-anchor=\"middle\">" + xlabel + "</text>\n";
    svg += "<text x=\"18\" y=\"" + format_sig(top + plot_h / 2, 6) + "\" transform=\"rotate(-90 18 " +
           format_sig(top + plot_h / 2, 6) + ")\" text-anchor=\"middle\">best empirical risk</text>\n";

    int legend_row = 0;
    for (auto& [test, pts] : curves) {
      const auto kind = static_cast<stats::TestKind>(test);
      std::string points;
      for (const auto* r : pts) points += format_sig(sx(r->signal), 6) + "," + format_sig(sy(r->best_risk), 6) + " ";
      if (!points.empty()) points.pop_back();
      svg += "<polyline fill=\"none\" stroke=\"" + std::string(color_for(kind)) + "\" stroke-width=\"2\" points=\"" +
             points + "\"/>\n";
      const double ly = top + 10 + 20 * legend_row++;
      svg += "<line x1=\"" + format_sig(left + plot_w + 15, 6) + "\" y1=\"" + format_sig(ly, 6) + "\" x2=\"" +
             format_sig(left + plot_w + 40, 6) + "\" y2=\"" + format_sig(ly, 6) + "\" stroke=\"" + color_for(kind) +
             "\" stroke-width=\"2\"/>\n";
      svg += "<text x=\"" + format_sig(left + plot_w + 46, 6) + "\" y=\"" + format_sig(ly + 4, 6) + "\">" +
             stats::to_string(kind) + "</text>\n";
    }
    svg += "</svg>\n";
    out.push_back({file_stem(config) + "_alpha" + format_sig(alpha, 10) + ".svg", std::move(svg)});
  }
  return out;
}

}  // namespace sparsedetect::report
