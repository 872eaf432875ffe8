#include "gwlab/summary.hpp"

#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "gwlab/error.hpp"

namespace gwlab {

namespace {

struct Accumulator {
  SummaryRow row;
  double ed_sum = 0.0;
  double dk2_sum = 0.0;
  double dcc_sum = 0.0;
  std::size_t measured = 0;
  std::size_t dcc_count = 0;
};

void write_optional(std::ostream& out, const std::optional<double>& v) {
  if (v) out << format_double(*v);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T number(const std::string& s, std::size_t row, const char* column) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(std::string("bad ") + column + " value \"" + s + "\"", row);
  return value;
}

std::optional<double> optional_number(const std::string& s, std::size_t row, const char* column) {
  if (s.empty()) return std::nullopt;
  return number<double>(s, row, column);
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  using Key = std::tuple<std::string, std::string, std::string, std::size_t>;
  std::map<Key, std::size_t> index;
  std::vector<Accumulator> groups;
  for (const auto& r : rows) {
    const auto& t = r.record;
    Key key{t.dataset, std::string(to_string(t.attack)), t.clustering, t.flips};
    auto [it, fresh] = index.emplace(key, groups.size());
    if (fresh) {
      Accumulator acc;
      acc.row.dataset = t.dataset;
      acc.row.attack = std::get<1>(key);
      acc.row.clustering = t.clustering;
      acc.row.flips = t.flips;
      groups.push_back(std::move(acc));
    }
    auto& g = groups[it->second];
    ++g.row.trials;
    if (t.extracted) ++g.row.extracted;
    if (r.fault) {
      ++g.row.faults;
      continue;
    }
    ++g.measured;
    g.ed_sum += t.distortion.ed_pct;
    g.dk2_sum += t.distortion.dk2;
    if (t.distortion.dcc_pct) {
      ++g.dcc_count;
      g.dcc_sum += *t.distortion.dcc_pct;
    } else {
      ++g.row.dcc_undefined;
    }
  }

  std::vector<SummaryRow> out;
  out.reserve(groups.size());
  for (auto& g : groups) {
    auto& s = g.row;
    s.success_pct = 100.0 * static_cast<double>(s.extracted) / static_cast<double>(s.trials);
    if (g.measured > 0) {
      s.mean_ed = g.ed_sum / static_cast<double>(g.measured);
      s.mean_dk2 = g.dk2_sum / static_cast<double>(g.measured);
    }
    if (g.dcc_count > 0) s.mean_dcc = g.dcc_sum / static_cast<double>(g.dcc_count);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<SummaryRow> summarize_csv(std::istream& in) { return summarize(read_result_csv(in)); }

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << kSummaryCsvHeader << '\n';
  for (const auto& s : rows) {
    out << s.dataset << ',' << s.attack << ',' << s.clustering << ',' << s.flips << ',' << s.trials
        << ',' << s.extracted << ',' << format_double(s.success_pct) << ',';
    write_optional(out, s.mean_ed);
    out << ',';
    write_optional(out, s.mean_dk2);
    out << ',';
    write_optional(out, s.mean_dcc);
    out << ',' << s.dcc_undefined << ',' << s.faults << '\n';
  }
}

std::vector<SummaryRow> read_summary_csv(std::istream& in) {
  std::vector<SummaryRow> rows;
  std::string line;
  std::size_t row_no = 1;
  if (!std::getline(in, line)) throw ParseError("empty summary file", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kSummaryCsvHeader) throw ParseError("unexpected summary header", 1);
  while (std::getline(in, line)) {
    ++row_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 12)
      throw ParseError("expected 12 columns, found " + std::to_string(f.size()), row_no);
    SummaryRow s;
    s.dataset = f[0];
    s.attack = f[1];
    s.clustering = f[2];
    s.flips = number<std::size_t>(f[3], row_no, "flips");
    s.trials = number<std::size_t>(f[4], row_no, "trials");
    s.extracted = number<std::size_t>(f[5], row_no, "extracted");
    s.success_pct = number<double>(f[6], row_no, "success_pct");
    s.mean_ed = optional_number(f[7], row_no, "mean_ed_pct");
    s.mean_dk2 = optional_number(f[8], row_no, "mean_dk2");
    s.mean_dcc = optional_number(f[9], row_no, "mean_dcc_pct");
    s.dcc_undefined = number<std::size_t>(f[10], row_no, "dcc_undefined");
    s.faults = number<std::size_t>(f[11], row_no, "faults");
    rows.push_back(std::move(s));
  }
  return rows;
}

}  // namespace gwlab
