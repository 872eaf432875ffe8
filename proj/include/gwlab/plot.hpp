#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gwlab/summary.hpp"

namespace gwlab {

enum class PlotKind { SuccessVsFlips, EditDistance, Dk2, Dcc };

std::string_view to_string(PlotKind k);
std::optional<PlotKind> parse_plot_kind(std::string_view name);
inline constexpr PlotKind kAllPlotKinds[] = {PlotKind::SuccessVsFlips, PlotKind::EditDistance,
                                             PlotKind::Dk2, PlotKind::Dcc};

/// Line chart of one dataset: x = flips, one curve per (attack, clustering)
/// series in first-seen order. Groups without a value for the metric are
/// skipped.
std::string render_svg(const std::vector<SummaryRow>& summary, std::string_view dataset,
                       PlotKind kind);

/// Number of curves render_svg draws for the dataset.
std::size_t curve_count(const std::vector<SummaryRow>& summary, std::string_view dataset);

/// Writes <dataset>_<kind>.svg for every dataset and the requested kinds
/// (all when empty). An empty summary writes nothing and warns on stderr.
std::vector<std::filesystem::path> write_plots(const std::vector<SummaryRow>& summary,
                                               const std::filesystem::path& dir,
                                               const std::vector<PlotKind>& kinds = {});

}  // namespace gwlab
