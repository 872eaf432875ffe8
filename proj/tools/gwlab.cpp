// gwlab command-line front end.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gwlab/attacks.hpp"
#include "gwlab/community.hpp"
#include "gwlab/dataset.hpp"
#include "gwlab/error.hpp"
#include "gwlab/experiment.hpp"
#include "gwlab/plot.hpp"
#include "gwlab/record_io.hpp"
#include "gwlab/rng.hpp"
#include "gwlab/summary.hpp"
#include "gwlab/watermark.hpp"

namespace fs = std::filesystem;
using namespace gwlab;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string out;

  std::uint64_t seed_or(std::uint64_t fallback) const { return seed.value_or(fallback); }
};

// A graph argument is a known dataset name or an edge-list path.
LoadedGraph load_graph_arg(const std::string& arg, bool extra_columns) {
  if (const KnownDataset* known = find_known_dataset(arg); known && !fs::exists(arg)) {
    const fs::path path = fetch_dataset(*known);
    return load_verified(path, known->expected_nodes, known->expected_edges,
                         known->allow_extra_columns, known->name);
  }
  EdgeListOptions opts;
  opts.allow_extra_columns = extra_columns;
  return load_edge_list_file(arg, opts);
}

std::vector<RecipientRecord> read_ledger_if_exists(const std::string& path) {
  if (!fs::exists(path)) return {};
  return read_ledger_file(path);
}

void print_feasibility(std::ostream& o, const std::string& name, const LoadedGraph& g,
                       const FeasibilityReport& r) {
  o << "dataset            " << name << '\n'
    << "nodes              " << g.graph.node_count() << '\n'
    << "edges              " << g.graph.edge_count() << '\n'
    << "k                  " << r.k << '\n'
    << "node degree        " << r.expected_node_degree << '\n'
    << "N_min / N_max      " << r.n_min << " / " << r.n_max << '\n'
    << "wm density         " << format_double(r.wm_density) << '\n'
    << "D_min / D_max est  " << r.d_min_est << " / " << r.d_max_est << "  (" << r.density_samples
    << " samples over " << r.eligible_nodes << " eligible nodes)\n"
    << "degree criterion   " << (r.degree_ok ? "ok" : "FAILED") << '\n'
    << "density criterion  " << (r.density_ok ? "ok" : "FAILED");
  if (!r.density_reason.empty()) o << " (" << r.density_reason << ')';
  o << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph watermarking attack lab", "gwlab"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Master seed / owner secret");
  app.add_option("--config", g.config, "Experiment config (JSON)");
  app.add_option("--out", g.out, "Output file or directory");

  // fetch
  auto* fetch = app.add_subcommand("fetch", "Download and cache a SNAP dataset");
  std::string fetch_name;
  fetch->add_option("dataset", fetch_name, "facebook | caida | arxiv")->required();

  // feasibility
  auto* feas = app.add_subcommand("feasibility", "Node-degree and density criteria report");
  std::string feas_graph;
  std::size_t feas_samples = 1000;
  bool feas_extra = false;
  double feas_delta = 0.3;
  feas->add_option("graph", feas_graph, "Dataset name or edge-list path")->required();
  feas->add_option("--samples", feas_samples, "Connected subsets sampled for density");
  feas->add_option("--delta", feas_delta, "Pattern size slack");
  feas->add_flag("--extra-columns", feas_extra, "Ignore columns past the second");

  // embed
  auto* emb = app.add_subcommand("embed", "Embed a watermark for one recipient");
  std::string emb_graph, emb_recipient, emb_ledger = "ledger.json";
  EmbeddingParams emb_params;
  bool emb_extra = false;
  emb->add_option("graph", emb_graph, "Dataset name or edge-list path")->required();
  emb->add_option("--recipient", emb_recipient, "Recipient id")->required();
  emb->add_option("--ledger", emb_ledger, "Ledger file to append the record to");
  emb->add_option("--p", emb_params.p, "Pattern edge probability");
  emb->add_option("--delta", emb_params.delta, "Pattern size slack");
  emb->add_option("--k", emb_params.k, "Pattern size (0 derives it)");
  emb->add_flag("--extra-columns", emb_extra);

  // attack
  auto* atk = app.add_subcommand("attack", "Apply an edge-flip attack");
  std::string atk_graph, atk_kind = "random", atk_detector = "leiden", atk_clustering;
  std::size_t atk_flips = 0;
  atk->add_option("graph", atk_graph, "Edge-list path")->required();
  atk->add_option("--kind", atk_kind, "random | intra_add_inter_remove | intra_remove_inter_add");
  atk->add_option("--flips", atk_flips, "Edge flip budget")->required();
  atk->add_option("--detector", atk_detector, "Detector for cluster-aware attacks");
  atk->add_option("--clustering", atk_clustering, "Clustering file (overrides --detector)");

  // extract
  auto* ext = app.add_subcommand("extract", "Verify one recipient's watermark");
  std::string ext_graph, ext_ledger = "ledger.json", ext_recipient;
  ext->add_option("graph", ext_graph, "Edge-list path")->required();
  ext->add_option("--ledger", ext_ledger);
  ext->add_option("--recipient", ext_recipient)->required();

  // attribute
  auto* attr = app.add_subcommand("attribute", "Find the recipient a leaked copy came from");
  std::string attr_graph, attr_ledger = "ledger.json";
  attr->add_option("graph", attr_graph, "Edge-list path")->required();
  attr->add_option("--ledger", attr_ledger);

  // cluster
  auto* clu = app.add_subcommand("cluster", "Run a community detector");
  std::string clu_graph, clu_detector = "leiden";
  bool clu_extra = false;
  clu->add_option("graph", clu_graph, "Dataset name or edge-list path")->required();
  clu->add_option("--detector", clu_detector, "greedy_modularity | label_propagation | leiden");
  clu->add_flag("--extra-columns", clu_extra);

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a full attack sweep from --config");
  int exp_threads = 0;
  exp->add_option("--threads", exp_threads, "Worker threads (0 = OpenMP default)");

  // summarize
  auto* sum = app.add_subcommand("summarize", "Aggregate a results CSV");
  std::string sum_input;
  sum->add_option("results", sum_input, "results.csv")->required();

  // plot
  auto* plt = app.add_subcommand("plot", "Render SVG figures from a summary CSV");
  std::string plt_input;
  std::vector<std::string> plt_kinds;
  plt->add_option("summary", plt_input, "summary.csv")->required();
  plt->add_option("--kind", plt_kinds, "success_vs_flips | ed | dk2 | dcc (repeatable)");

  if (argc <= 1) {
    std::cerr << app.help();
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*fetch) {
      const KnownDataset* known = find_known_dataset(fetch_name);
      if (!known) throw InvalidArgument("unknown dataset '" + fetch_name + "'");
      FetchOptions opts;
      if (!g.out.empty()) opts.cache_dir = g.out;
      const fs::path path = fetch_dataset(*known, opts);
      const auto loaded = load_verified(path, known->expected_nodes, known->expected_edges,
                                        known->allow_extra_columns, known->name);
      std::cout << path.string() << '\t' << loaded.graph.node_count() << " nodes\t"
                << loaded.graph.edge_count() << " edges\n";
    } else if (*feas) {
      const auto loaded = load_graph_arg(feas_graph, feas_extra);
      EmbeddingParams params;
      params.delta = feas_delta;
      const auto report = check_feasibility(loaded.graph, params, feas_samples, g.seed_or(0));
      print_feasibility(std::cout, feas_graph, loaded, report);
      return report.degree_ok ? 0 : 1;
    } else if (*emb) {
      const auto loaded = load_graph_arg(emb_graph, emb_extra);
      auto records = read_ledger_if_exists(emb_ledger);
      for (const auto& r : records)
        if (r.recipient_id == emb_recipient)
          throw InvalidArgument("recipient '" + emb_recipient + "' already in " + emb_ledger);
      const std::uint64_t secret = g.seed_or(0);
      const auto result = embed(loaded.graph, emb_params, derive_wm_seed(secret, emb_recipient),
                                emb_recipient);
      const auto copy = anonymize(result.watermarked, derive_seed(secret, {"copy", emb_recipient}));
      const std::string out = g.out.empty() ? emb_recipient + ".txt" : g.out;
      write_edge_list_file(out, copy.graph);
      records.push_back(result.record);
      write_ledger_file(emb_ledger, records);
      std::cout << "k=" << result.record.k() << " copy=" << out << " ledger=" << emb_ledger << '\n';
    } else if (*atk) {
      const auto loaded = load_graph_arg(atk_graph, false);
      const auto kind = parse_attack_kind(atk_kind);
      if (!kind) throw InvalidArgument("unknown attack kind '" + atk_kind + "'");
      const std::uint64_t seed = g.seed_or(0);
      std::optional<Clustering> clustering;
      if (*kind != AttackKind::RandomBaseline) {
        if (!atk_clustering.empty()) {
          clustering = load_clustering_file(atk_clustering, loaded.labels);
        } else {
          const auto d = parse_detector(atk_detector);
          if (!d) throw InvalidArgument("unknown detector '" + atk_detector + "'");
          clustering = run_detector(*d, loaded.graph, derive_seed(seed, {"cluster"}));
        }
      }
      AttackSpec spec;
      spec.kind = *kind;
      spec.flips = atk_flips;
      spec.seed = derive_seed(seed, {"attack"});
      const auto outcome = run_attack(loaded.graph, clustering ? &*clustering : nullptr, spec);
      const auto d = measure_distortion(loaded.graph, outcome.graph);
      if (g.out.empty())
        write_edge_list(std::cout, outcome.graph, &loaded.labels);
      else
        write_edge_list_file(g.out, outcome.graph, &loaded.labels);
      std::cerr << "added=" << outcome.added_count << " removed=" << outcome.removed_count
                << " exhausted_early=" << (outcome.exhausted_early ? "true" : "false")
                << " ed_pct=" << format_double(d.ed_pct) << " dk2=" << format_double(d.dk2)
                << " dcc_pct=" << (d.dcc_pct ? format_double(*d.dcc_pct) : "undefined") << '\n';
    } else if (*ext) {
      const auto loaded = load_graph_arg(ext_graph, false);
      const auto records = read_ledger_file(ext_ledger);
      const RecipientRecord* record = nullptr;
      for (const auto& r : records)
        if (r.recipient_id == ext_recipient) record = &r;
      if (!record) throw InvalidArgument("recipient '" + ext_recipient + "' not in " + ext_ledger);
      const auto result = extract(loaded.graph, *record);
      std::cout << to_string(result.verdict_reason) << " expansions=" << result.expansions << '\n';
      return result.matched ? 0 : 3;
    } else if (*attr) {
      const auto loaded = load_graph_arg(attr_graph, false);
      const auto records = read_ledger_file(attr_ledger);
      const auto a = attribute(loaded.graph, records);
      switch (a.outcome) {
        case Attribution::Outcome::Unique: std::cout << "unique " << a.matches.front() << '\n'; return 0;
        case Attribution::Outcome::None: std::cout << "none\n"; return 3;
        case Attribution::Outcome::Ambiguous:
          std::cout << "ambiguous";
          for (const auto& m : a.matches) std::cout << ' ' << m;
          std::cout << '\n';
          return 3;
      }
    } else if (*clu) {
      const auto loaded = load_graph_arg(clu_graph, clu_extra);
      const auto d = parse_detector(clu_detector);
      if (!d) throw InvalidArgument("unknown detector '" + clu_detector + "'");
      const auto c = run_detector(*d, loaded.graph, g.seed_or(0));
      if (g.out.empty())
        write_clustering(std::cout, c, loaded.labels);
      else
        write_clustering_file(g.out, c, loaded.labels);
      std::cerr << c.num_clusters << " clusters, modularity "
                << format_double(loaded.graph.edge_count() ? modularity(loaded.graph, c) : 0.0)
                << '\n';
    } else if (*exp) {
      if (g.config.empty()) throw InvalidArgument("experiment needs --config <file>");
      auto config = load_experiment_config(g.config);
      if (g.seed) config.master_seed = *g.seed;
      if (!g.out.empty()) config.output_dir = g.out;
      if (exp_threads > 0) config.threads = exp_threads;
      run_experiment_to_dir(config, [](const std::string& msg) { std::cerr << msg << '\n'; });
    } else if (*sum) {
      std::ifstream in(sum_input);
      if (!in) throw Error("cannot open " + sum_input);
      const auto summary = summarize_csv(in);
      if (g.out.empty()) {
        write_summary_csv(std::cout, summary);
      } else {
        std::ofstream out(g.out);
        if (!out) throw Error("cannot write " + g.out);
        write_summary_csv(out, summary);
      }
    } else if (*plt) {
      std::ifstream in(plt_input);
      if (!in) throw Error("cannot open " + plt_input);
      const auto summary = read_summary_csv(in);
      std::vector<PlotKind> kinds;
      for (const auto& k : plt_kinds) {
        auto kind = parse_plot_kind(k);
        if (!kind) throw InvalidArgument("unknown plot kind '" + k + "'");
        kinds.push_back(*kind);
      }
      for (const auto& p : write_plots(summary, g.out.empty() ? "." : g.out, kinds))
        std::cout << p.string() << '\n';
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
