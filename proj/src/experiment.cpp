#include "gwlab/experiment.hpp"

#include <omp.h>

#include <charconv>
#include <chrono>
#include <map>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "gwlab/error.hpp"
#include "gwlab/plot.hpp"
#include "gwlab/rng.hpp"
#include "gwlab/summary.hpp"

namespace gwlab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint64_t parse_seed(const json& v) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    const auto s = v.get<std::int64_t>();
    if (s < 0) throw ParseError("seed must be non-negative");
    return static_cast<std::uint64_t>(s);
  }
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw ParseError("seed \"" + s + "\" is not a decimal integer");
    return out;
  }
  throw ParseError("seed must be an integer or a decimal string");
}

void check_name(const std::string& name, const char* what) {
  if (name.empty() || name.find_first_of(",\n\r\"") != std::string::npos)
    throw ParseError(std::string(what) + " name \"" + name + "\" must be non-empty without commas or quotes");
}

fs::path resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return {};
  fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

ExperimentConfig parse_config(const json& doc, const fs::path& base) {
  if (!doc.is_object()) throw ParseError("experiment config must be a JSON object");
  ExperimentConfig cfg;
  try {
    std::map<std::string, std::vector<std::size_t>> level_overrides;
    if (doc.contains("flip_levels"))
      level_overrides = doc.at("flip_levels").get<std::map<std::string, std::vector<std::size_t>>>();

    for (const auto& d : doc.at("datasets")) {
      DatasetConfig ds;
      if (d.is_string()) {
        ds.name = d.get<std::string>();
      } else {
        ds.name = d.at("name").get<std::string>();
        ds.path = resolve(base, d.value("path", std::string())).string();
        ds.url = d.value("url", std::string());
        if (!ds.path.empty() && !ds.url.empty())
          throw ParseError("dataset \"" + ds.name + "\" sets both path and url");
        ds.expected_nodes = d.value("expected_nodes", std::size_t{0});
        ds.expected_edges = d.value("expected_edges", std::size_t{0});
        ds.allow_extra_columns = d.value("allow_extra_columns", false);
        if (d.contains("flip_levels")) ds.flip_levels = d.at("flip_levels").get<std::vector<std::size_t>>();
      }
      check_name(ds.name, "dataset");
      if (const KnownDataset* known = find_known_dataset(ds.name)) {
        if (ds.expected_nodes == 0) ds.expected_nodes = known->expected_nodes;
        if (ds.expected_edges == 0) ds.expected_edges = known->expected_edges;
        ds.allow_extra_columns = ds.allow_extra_columns || known->allow_extra_columns;
        if (ds.flip_levels.empty() && !(d.is_object() && d.contains("flip_levels")))
          ds.flip_levels = known->default_flip_levels;
      } else if (ds.path.empty() && ds.url.empty()) {
        throw ParseError("dataset \"" + ds.name + "\" is not a known dataset and has no path or url");
      }
      if (auto it = level_overrides.find(ds.name); it != level_overrides.end())
        ds.flip_levels = it->second;
      cfg.datasets.push_back(std::move(ds));
    }

    if (doc.contains("attacks")) {
      for (const auto& a : doc.at("attacks")) {
        auto kind = parse_attack_kind(a.get<std::string>());
        if (!kind) throw ParseError("unknown attack \"" + a.get<std::string>() + "\"");
        cfg.attacks.push_back(*kind);
      }
    } else {
      cfg.attacks = {AttackKind::RandomBaseline, AttackKind::IntraAddInterRemove,
                     AttackKind::IntraRemoveInterAdd};
    }

    if (doc.contains("clusterings")) {
      for (const auto& c : doc.at("clusterings")) {
        ClusteringConfig cc;
        if (c.is_string()) {
          cc.name = c.get<std::string>();
          cc.detector = parse_detector(cc.name);
          if (!cc.detector) throw ParseError("unknown clustering algorithm \"" + cc.name + "\"");
          cc.name = std::string(to_string(*cc.detector));
        } else {
          cc.name = c.at("name").get<std::string>();
          cc.file = resolve(base, c.at("file").get<std::string>()).string();
        }
        check_name(cc.name, "clustering");
        cfg.clusterings.push_back(std::move(cc));
      }
    } else {
      for (Detector d : {Detector::GreedyModularity, Detector::LabelPropagation, Detector::Leiden})
        cfg.clusterings.push_back({std::string(to_string(d)), d, {}});
    }

    cfg.trials = doc.value("trials", std::size_t{10});
    if (doc.contains("master_seed")) cfg.master_seed = parse_seed(doc.at("master_seed"));
    if (doc.contains("params")) {
      const auto& p = doc.at("params");
      cfg.params.p = p.value("p", cfg.params.p);
      cfg.params.delta = p.value("delta", cfg.params.delta);
      cfg.params.k = p.value("k", std::size_t{0});
      cfg.params.search_cap = p.value("search_cap", cfg.params.search_cap);
    }
    cfg.output_dir = resolve(base, doc.value("output_dir", cfg.output_dir)).string();
    cfg.feasibility_samples = doc.value("feasibility_samples", cfg.feasibility_samples);
    cfg.require_density = doc.value("require_density", cfg.require_density);
    cfg.threads = doc.value("threads", 0);
    if (doc.contains("cache_dir")) cfg.cache_dir = resolve(base, doc.at("cache_dir").get<std::string>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid experiment config: ") + e.what());
  }
  if (cfg.trials < 1) throw ParseError("trials must be at least 1");
  return cfg;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

std::string fixed3(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 3);
  return std::string(buf, end);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T parse_number(const std::string& s, std::size_t row, const char* column) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(std::string("bad ") + column + " value \"" + s + "\"", row);
  return value;
}

}  // namespace

ExperimentConfig parse_experiment_config(const json& doc) { return parse_config(doc, {}); }

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc, fs::path(path).parent_path());
}

void check_flip_levels(const DatasetConfig& d, std::size_t edge_count) {
  for (std::size_t level : d.flip_levels) {
    // level <= 0.1% of |E|  <=>  1000·level <= |E|
    if (1000 * level > edge_count)
      throw InvalidArgument("flip level " + std::to_string(level) + " for dataset '" + d.name +
                            "' exceeds 0.1% of its " + std::to_string(edge_count) + " edges");
  }
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

void write_result_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultCsvHeader << '\n';
  for (const auto& r : rows) {
    const auto& t = r.record;
    out << t.dataset << ',' << to_string(t.attack) << ',' << t.clustering << ',' << t.flips << ','
        << t.trial << ',' << r.seed << ',' << (t.extracted ? "true" : "false") << ','
        << r.verdict_reason << ',';
    if (!r.fault) {
      out << format_double(t.distortion.ed_pct) << ',' << format_double(t.distortion.dk2) << ',';
      if (t.distortion.dcc_pct) out << format_double(*t.distortion.dcc_pct);
    } else {
      out << ",,";
    }
    out << ',' << fixed3(r.cluster_ms) << ',' << fixed3(t.attack_ms) << ',' << fixed3(t.extract_ms)
        << '\n';
  }
}

std::vector<ResultRow> read_result_csv(std::istream& in) {
  std::vector<ResultRow> rows;
  std::string line;
  std::size_t row_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty results file", 1);
  ++row_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kResultCsvHeader) throw ParseError("unexpected results header", row_no);
  while (std::getline(in, line)) {
    ++row_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 14)
      throw ParseError("expected 14 columns, found " + std::to_string(f.size()), row_no);
    ResultRow r;
    auto& t = r.record;
    t.dataset = f[0];
    auto kind = parse_attack_kind(f[1]);
    if (!kind) throw ParseError("unknown attack \"" + f[1] + "\"", row_no);
    t.attack = *kind;
    t.clustering = f[2];
    t.flips = parse_number<std::size_t>(f[3], row_no, "flips");
    t.trial = parse_number<std::size_t>(f[4], row_no, "trial");
    r.seed = parse_number<std::uint64_t>(f[5], row_no, "seed");
    if (f[6] != "true" && f[6] != "false") throw ParseError("extracted must be true/false", row_no);
    t.extracted = f[6] == "true";
    r.verdict_reason = f[7];
    r.fault = f[8].empty();
    if (!r.fault) {
      t.distortion.ed_pct = parse_number<double>(f[8], row_no, "ed_pct");
      t.distortion.dk2 = parse_number<double>(f[9], row_no, "dk2");
      if (!f[10].empty()) t.distortion.dcc_pct = parse_number<double>(f[10], row_no, "dcc_pct");
    }
    r.cluster_ms = parse_number<double>(f[11], row_no, "cluster_ms");
    t.attack_ms = parse_number<double>(f[12], row_no, "attack_ms");
    t.extract_ms = parse_number<double>(f[13], row_no, "extract_ms");
    rows.push_back(std::move(r));
  }
  return rows;
}

PreparedDataset prepare_dataset(const ExperimentConfig& config, const DatasetConfig& dataset) {
  PreparedDataset out;
  out.config = dataset;
  fs::path path = dataset.path;
  if (path.empty() && !dataset.url.empty()) {
    // Fetched like a known dataset whose base URL is the URL's directory.
    const auto slash = dataset.url.rfind('/');
    if (slash == std::string::npos || slash + 1 == dataset.url.size())
      throw DatasetError("dataset url must name a file: " + dataset.url);
    KnownDataset remote;
    remote.name = dataset.name;
    remote.remote_path = dataset.url.substr(slash + 1);
    remote.file_name = remote.remote_path;
    if (remote.file_name.ends_with(".gz")) remote.file_name.resize(remote.file_name.size() - 3);
    else remote.file_name += ".txt";
    remote.file_name = dataset.name + "-" + remote.file_name;
    FetchOptions opts;
    opts.cache_dir = config.cache_dir;
    opts.base_url = dataset.url.substr(0, slash);
    path = fetch_dataset(remote, opts);
  } else if (path.empty()) {
    const KnownDataset* known = find_known_dataset(dataset.name);
    if (!known) throw DatasetError("unknown dataset '" + dataset.name + "'");
    FetchOptions opts;
    opts.cache_dir = config.cache_dir;
    path = fetch_dataset(*known, opts);
  }
  out.loaded = load_verified(path, dataset.expected_nodes, dataset.expected_edges,
                             dataset.allow_extra_columns, dataset.name);
  check_flip_levels(dataset, out.loaded.graph.edge_count());

  out.feasibility = check_feasibility(out.loaded.graph, config.params, config.feasibility_samples,
                                      derive_seed(config.master_seed, {"feasibility", dataset.name}));
  const auto& f = out.feasibility;
  if (!f.degree_ok)
    throw InfeasibleError("dataset '" + dataset.name + "' fails the node-degree criterion: " +
                          std::to_string(f.expected_node_degree) + " not in [" +
                          std::to_string(f.n_min) + ", " + std::to_string(f.n_max) + "]");
  if (config.require_density && !f.density_ok)
    throw InfeasibleError("dataset '" + dataset.name + "' fails the subgraph-density criterion: " +
                          f.density_reason);

  for (const auto& c : config.clusterings) {
    if (c.detector) continue;
    out.imported.emplace_back(c.name, load_clustering_file(c.file, out.loaded.labels));
  }
  return out;
}

std::uint64_t trial_seed(std::uint64_t master_seed, const TrialKey& key) {
  return derive_seed(master_seed, {"trial", key.dataset, to_string(key.attack), key.clustering,
                                   std::to_string(key.flips), std::to_string(key.trial)});
}

std::uint64_t copy_seed(std::uint64_t master_seed, const std::string& dataset, std::size_t trial) {
  return derive_seed(master_seed, {"copy", dataset, std::to_string(trial)});
}

namespace {

std::string fault_reason(const std::exception& e) {
  std::string msg = e.what();
  for (char& c : msg)
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  return "TrialFault: " + msg;
}

// What every row of one (dataset, trial) shares.
struct TrialCopy {
  EmbedResult emb;
  AnonymizedGraph anon;
};

TrialCopy make_copy(const PreparedDataset& data, const ExperimentConfig& config,
                    std::size_t trial) {
  const std::uint64_t seed = copy_seed(config.master_seed, data.config.name, trial);
  TrialCopy copy{embed(data.loaded.graph, config.params, derive_seed(seed, {"wm"}),
                       "trial-" + std::to_string(trial)),
                 {}};
  copy.anon = anonymize(copy.emb.watermarked, derive_seed(seed, {"anonymize"}));
  return copy;
}

Clustering cluster_copy(const PreparedDataset& data, const ExperimentConfig& config,
                        const TrialCopy& copy, const std::string& name, std::size_t trial,
                        double& ms) {
  const ClusteringConfig* cc = nullptr;
  for (const auto& c : config.clusterings)
    if (c.name == name) cc = &c;
  if (!cc) throw InvalidArgument("unknown clustering '" + name + "'");
  if (cc->detector) {
    const auto t0 = std::chrono::steady_clock::now();
    auto c = run_detector(*cc->detector, copy.anon.graph,
                          derive_seed(copy_seed(config.master_seed, data.config.name, trial),
                                      {"cluster", name}));
    ms = elapsed_ms(t0);
    return c;
  }
  // Imported clusterings describe the original ids; carry them over to the
  // anonymized copy.
  const Clustering* original = nullptr;
  for (const auto& [n, c] : data.imported)
    if (n == name) original = &c;
  if (!original) throw InvalidArgument("clustering '" + name + "' not loaded");
  std::vector<std::uint64_t> labels(data.loaded.graph.node_count());
  for (NodeId v = 0; v < labels.size(); ++v)
    labels[copy.anon.permutation[v]] = original->assignment[v];
  ms = 0.0;
  return Clustering::from_labels(labels);
}

ResultRow start_row(const ExperimentConfig& config, const TrialKey& key) {
  ResultRow row;
  row.record.dataset = key.dataset;
  row.record.attack = key.attack;
  row.record.clustering = key.clustering;
  row.record.flips = key.flips;
  row.record.trial = key.trial;
  row.seed = trial_seed(config.master_seed, key);
  return row;
}

void attack_row(ResultRow& row, const TrialCopy& copy, const Clustering* clustering) {
  auto& rec = row.record;
  row.watermarked_edges = copy.anon.graph.edge_count();
  AttackSpec spec;
  spec.kind = rec.attack;
  spec.flips = rec.flips;
  spec.seed = derive_seed(row.seed, {"attack"});
  auto t0 = std::chrono::steady_clock::now();
  const auto outcome = run_attack(copy.anon.graph, clustering, spec);
  rec.attack_ms = elapsed_ms(t0);
  row.exhausted_early = outcome.exhausted_early;
  row.performed = outcome.performed.size();
  rec.distortion = measure_distortion(copy.anon.graph, outcome.graph);

  t0 = std::chrono::steady_clock::now();
  const auto result = extract(outcome.graph, copy.emb.record);
  rec.extract_ms = elapsed_ms(t0);
  rec.extracted = result.matched;
  row.verdict_reason = std::string(to_string(result.verdict_reason));
}

void mark_fault(ResultRow& row, const std::exception& e) {
  row.fault = true;
  row.record.extracted = false;
  row.record.distortion = {};
  row.verdict_reason = fault_reason(e);
}

}  // namespace

ResultRow run_trial(const PreparedDataset& data, const ExperimentConfig& config,
                    const TrialKey& key) {
  ResultRow row = start_row(config, key);
  try {
    const TrialCopy copy = make_copy(data, config, key.trial);
    Clustering clustering;
    if (key.attack != AttackKind::RandomBaseline)
      clustering = cluster_copy(data, config, copy, key.clustering, key.trial, row.cluster_ms);
    attack_row(row, copy, key.attack == AttackKind::RandomBaseline ? nullptr : &clustering);
  } catch (const std::exception& e) {
    mark_fault(row, e);
  }
  return row;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config,
                                      const std::function<void(const std::string&)>& log) {
  if (config.trials < 1) throw InvalidArgument("trials must be at least 1");
  std::vector<PreparedDataset> prepared;
  for (const auto& d : config.datasets) {
    if (log) log("preparing dataset " + d.name);
    prepared.push_back(prepare_dataset(config, d));
  }

  // Row slots in output order, grouped per (dataset, trial) so one worker
  // embeds and clusters once for all of that trial's rows.
  struct Slot {
    std::size_t index;
    TrialKey key;
  };
  struct Unit {
    std::size_t dataset;
    std::size_t trial;
    std::vector<Slot> slots;
  };
  std::vector<Unit> units;
  std::size_t total = 0;
  for (std::size_t di = 0; di < prepared.size(); ++di) {
    const std::size_t first = units.size();
    for (std::size_t t = 0; t < config.trials; ++t) units.push_back({di, t, {}});
    const auto& d = prepared[di].config;
    for (AttackKind attack : config.attacks) {
      std::vector<std::string> names;
      if (attack == AttackKind::RandomBaseline)
        names.push_back("none");
      else
        for (const auto& c : config.clusterings) names.push_back(c.name);
      for (const auto& name : names)
        for (std::size_t flips : d.flip_levels)
          for (std::size_t t = 0; t < config.trials; ++t)
            units[first + t].slots.push_back({total++, {d.name, attack, name, flips, t}});
    }
  }
  if (log) log("running " + std::to_string(total) + " trials");

  std::vector<ResultRow> rows(total);
  const auto count = static_cast<std::int64_t>(units.size());
  const int threads = config.threads > 0 ? config.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t u = 0; u < count; ++u) {
    const Unit& unit = units[static_cast<std::size_t>(u)];
    const PreparedDataset& data = prepared[unit.dataset];
    std::optional<TrialCopy> copy;
    try {
      copy = make_copy(data, config, unit.trial);
    } catch (const std::exception& e) {
      for (const Slot& s : unit.slots) {
        rows[s.index] = start_row(config, s.key);
        mark_fault(rows[s.index], e);
      }
      continue;
    }
    std::map<std::string, std::pair<Clustering, double>> clusterings;
    for (const Slot& s : unit.slots) {
      ResultRow& row = rows[s.index];
      row = start_row(config, s.key);
      try {
        const Clustering* clustering = nullptr;
        if (s.key.attack != AttackKind::RandomBaseline) {
          auto it = clusterings.find(s.key.clustering);
          if (it == clusterings.end()) {
            double ms = 0.0;
            Clustering c = cluster_copy(data, config, *copy, s.key.clustering, unit.trial, ms);
            it = clusterings.emplace(s.key.clustering, std::make_pair(std::move(c), ms)).first;
          }
          clustering = &it->second.first;
          row.cluster_ms = it->second.second;
        }
        attack_row(row, *copy, clustering);
      } catch (const std::exception& e) {
        mark_fault(row, e);
      }
    }
  }
  return rows;
}

std::vector<ResultRow> run_experiment_to_dir(const ExperimentConfig& config,
                                             const std::function<void(const std::string&)>& log) {
  auto rows = run_experiment(config, log);
  const fs::path dir = config.output_dir;
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "results.csv");
    if (!out) throw Error("cannot write " + (dir / "results.csv").string());
    write_result_csv(out, rows);
  }
  const auto summary = summarize(rows);
  {
    std::ofstream out(dir / "summary.csv");
    if (!out) throw Error("cannot write " + (dir / "summary.csv").string());
    write_summary_csv(out, summary);
  }
  const auto written = write_plots(summary, dir);
  if (log) log("wrote " + std::to_string(rows.size()) + " rows and " + std::to_string(written.size()) +
               " figures to " + dir.string());
  return rows;
}

}  // namespace gwlab
