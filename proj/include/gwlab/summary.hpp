#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gwlab/experiment.hpp"

namespace gwlab {

/// Aggregate of one (dataset, attack, clustering, flips) group.
struct SummaryRow {
  std::string dataset;
  std::string attack;
  std::string clustering;
  std::size_t flips = 0;
  std::size_t trials = 0;
  std::size_t extracted = 0;
  double success_pct = 0.0;
  /// Means over non-fault rows; nullopt when there are none.
  std::optional<double> mean_ed;
  std::optional<double> mean_dk2;
  /// Mean over rows with a defined ΔCC.
  std::optional<double> mean_dcc;
  std::size_t dcc_undefined = 0;
  std::size_t faults = 0;
};

inline constexpr const char* kSummaryCsvHeader =
    "dataset,attack,clustering,flips,trials,extracted,success_pct,mean_ed_pct,mean_dk2,"
    "mean_dcc_pct,dcc_undefined,faults";

/// Groups in first-seen order. Fault rows count as failed extractions and are
/// left out of the distortion means.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

/// Parses a results CSV and summarizes it. Throws ParseError with the row
/// number on malformed input.
std::vector<SummaryRow> summarize_csv(std::istream& in);

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary_csv(std::istream& in);

}  // namespace gwlab
