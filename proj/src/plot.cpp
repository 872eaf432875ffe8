#include "gwlab/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gwlab/error.hpp"

namespace gwlab {

namespace fs = std::filesystem;

std::string_view to_string(PlotKind k) {
  switch (k) {
    case PlotKind::SuccessVsFlips: return "success_vs_flips";
    case PlotKind::EditDistance: return "ed";
    case PlotKind::Dk2: return "dk2";
    case PlotKind::Dcc: return "dcc";
  }
  return "unknown";
}

std::optional<PlotKind> parse_plot_kind(std::string_view name) {
  for (PlotKind k : kAllPlotKinds)
    if (to_string(k) == name) return k;
  return std::nullopt;
}

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 80, kRight = 200, kTop = 40, kBottom = 60;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::optional<double> metric(const SummaryRow& s, PlotKind kind) {
  switch (kind) {
    case PlotKind::SuccessVsFlips: return s.success_pct;
    case PlotKind::EditDistance: return s.mean_ed;
    case PlotKind::Dk2: return s.mean_dk2;
    case PlotKind::Dcc: return s.mean_dcc;
  }
  return std::nullopt;
}

const char* y_label(PlotKind kind) {
  switch (kind) {
    case PlotKind::SuccessVsFlips: return "Extraction success (%)";
    case PlotKind::EditDistance: return "Edit distance ED (%)";
    case PlotKind::Dk2: return "dK-2 deviation (relative L2, unitless)";
    case PlotKind::Dcc: return "Clustering coefficient change ΔCC (%)";
  }
  return "";
}

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

std::vector<Series> collect(const std::vector<SummaryRow>& summary, std::string_view dataset,
                            std::optional<PlotKind> kind) {
  std::vector<Series> series;
  for (const auto& s : summary) {
    if (s.dataset != dataset) continue;
    const std::string name =
        s.clustering == "none" ? s.attack : s.attack + " / " + s.clustering;
    auto it = std::find_if(series.begin(), series.end(),
                           [&](const Series& x) { return x.name == name; });
    if (it == series.end()) {
      series.push_back({name, {}});
      it = series.end() - 1;
    }
    if (!kind) continue;
    if (auto v = metric(s, *kind)) it->points.emplace_back(static_cast<double>(s.flips), *v);
  }
  for (auto& s : series) std::sort(s.points.begin(), s.points.end());
  return series;
}

// Round tick step: 1, 2 or 5 times a power of ten.
double tick_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0})
    if (m * mag >= raw) return m * mag;
  return 10.0 * mag;
}

}  // namespace

std::size_t curve_count(const std::vector<SummaryRow>& summary, std::string_view dataset) {
  return collect(summary, dataset, std::nullopt).size();
}

std::string render_svg(const std::vector<SummaryRow>& summary, std::string_view dataset,
                       PlotKind kind) {
  const auto series = collect(summary, dataset, kind);

  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool any = false;
  for (const auto& s : series)
    for (auto [x, y] : s.points) {
      if (!any) {
        x0 = x1 = x;
        y0 = y1 = y;
        any = true;
      }
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  if (kind == PlotKind::SuccessVsFlips) {
    y0 = 0;
    y1 = 100;
  } else {
    y0 = std::min(y0, 0.0);
    y1 = std::max(y1, 0.0);
  }
  if (x1 - x0 < 1e-12) {
    x0 -= 1;
    x1 += 1;
  }
  if (y1 - y0 < 1e-12) {
    y0 -= 1;
    y1 += 1;
  }
  const double ystep = tick_step(y1 - y0);
  y0 = std::floor(y0 / ystep) * ystep;
  y1 = std::ceil(y1 / ystep) * ystep;
  const double xstep = std::max(1.0, tick_step(x1 - x0));

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return kTop + ph - (y - y0) / (y1 - y0) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << px(kLeft + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
    << escape(dataset) << ": " << escape(y_label(kind)) << "</text>\n";

  o << "<g stroke=\"#dddddd\">\n";
  for (double y = y0; y <= y1 + ystep * 1e-9; y += ystep)
    o << "<line x1=\"" << px(kLeft) << "\" y1=\"" << px(sy(y)) << "\" x2=\"" << px(kLeft + pw)
      << "\" y2=\"" << px(sy(y)) << "\"/>\n";
  o << "</g>\n";
  for (double y = y0; y <= y1 + ystep * 1e-9; y += ystep)
    o << "<text x=\"" << px(kLeft - 6) << "\" y=\"" << px(sy(y) + 4)
      << "\" text-anchor=\"end\">" << num(std::abs(y) < ystep * 1e-9 ? 0.0 : y) << "</text>\n";
  for (double x = std::ceil(x0 / xstep) * xstep; x <= x1 + 1e-9; x += xstep)
    o << "<text x=\"" << px(sx(x)) << "\" y=\"" << px(kTop + ph + 18)
      << "\" text-anchor=\"middle\">" << num(x) << "</text>\n";
  o << "<rect x=\"" << px(kLeft) << "\" y=\"" << px(kTop) << "\" width=\"" << px(pw)
    << "\" height=\"" << px(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<text x=\"" << px(kLeft + pw / 2) << "\" y=\"" << px(kHeight - 16)
    << "\" text-anchor=\"middle\">Edge modifications (flips)</text>\n";
  o << "<text transform=\"translate(20 " << px(kTop + ph / 2)
    << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label(kind)) << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = kPalette[i % std::size(kPalette)];
    o << "<g class=\"curve\" data-series=\"" << escape(s.name) << "\" stroke=\"" << color
      << "\" fill=\"" << color << "\">\n";
    if (s.points.size() > 1) {
      o << "<polyline fill=\"none\" stroke-width=\"2\" points=\"";
      for (std::size_t j = 0; j < s.points.size(); ++j)
        o << (j ? " " : "") << px(sx(s.points[j].first)) << ',' << px(sy(s.points[j].second));
      o << "\"/>\n";
    }
    for (auto [x, y] : s.points)
      o << "<circle cx=\"" << px(sx(x)) << "\" cy=\"" << px(sy(y)) << "\" r=\"3\"/>\n";
    const double ly = kTop + 10 + 18 * static_cast<double>(i);
    o << "<line x1=\"" << px(kLeft + pw + 12) << "\" y1=\"" << px(ly) << "\" x2=\""
      << px(kLeft + pw + 32) << "\" y2=\"" << px(ly) << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << px(kLeft + pw + 38) << "\" y=\"" << px(ly + 4) << "\" stroke=\"none\" fill=\"black\">"
      << escape(s.name) << "</text>\n";
    o << "</g>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::vector<fs::path> write_plots(const std::vector<SummaryRow>& summary, const fs::path& dir,
                                  const std::vector<PlotKind>& kinds) {
  if (summary.empty()) {
    std::cerr << "warning: empty summary, no figures written\n";
    return {};
  }
  std::vector<PlotKind> wanted = kinds;
  if (wanted.empty()) wanted.assign(std::begin(kAllPlotKinds), std::end(kAllPlotKinds));
  std::vector<std::string> datasets;
  for (const auto& s : summary)
    if (std::find(datasets.begin(), datasets.end(), s.dataset) == datasets.end())
      datasets.push_back(s.dataset);

  fs::create_directories(dir);
  std::vector<fs::path> written;
  for (const auto& d : datasets)
    for (PlotKind k : wanted) {
      const fs::path path = dir / (d + "_" + std::string(to_string(k)) + ".svg");
      std::ofstream out(path, std::ios::binary);
      if (!out) throw Error("cannot write " + path.string());
      out << render_svg(summary, d, k);
      written.push_back(path);
    }
  return written;
}

}  // namespace gwlab
