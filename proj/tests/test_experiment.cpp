#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "gwlab/error.hpp"
#include "gwlab/experiment.hpp"
#include "gwlab/plot.hpp"
#include "gwlab/summary.hpp"
#include "support.hpp"

using namespace gwlab;
using namespace gwlab::testing;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir =
      fs::temp_directory_path() / ("gwlab_exp_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// 2000-node ER host written as an edge list with non-numeric labels.
fs::path write_host(const fs::path& dir) {
  const Graph g = er_graph_nm(2000, 16000, 21);
  const auto map = [] {
    NodeLabelMap m;
    for (int i = 0; i < 2000; ++i) m.intern("n" + std::to_string(i));
    return m;
  }();
  const fs::path p = dir / "host.txt";
  write_edge_list_file(p.string(), g, &map);
  return p;
}

json base_config(const fs::path& host) {
  return json{{"datasets", json::array({json{{"name", "synth"},
                                              {"path", host.string()},
                                              {"expected_nodes", 2000},
                                              {"expected_edges", 16000},
                                              {"flip_levels", {1, 8}}}})},
              {"attacks", {"random", "intra_add_inter_remove", "intra_remove_inter_add"}},
              {"clusterings", {"leiden", "label_propagation"}},
              {"trials", 3},
              {"master_seed", 7},
              {"feasibility_samples", 50},
              {"require_density", false}};
}

// CSV body with the three timing columns cut off.
std::string strip_timing(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  write_result_csv(out, rows);
  std::istringstream in(out.str());
  std::string line, body;
  while (std::getline(in, line)) {
    for (int i = 0; i < 3; ++i) line.erase(line.rfind(','));
    body += line + '\n';
  }
  return body;
}

}  // namespace

TEST_SUITE("experiment") {
  TEST_CASE("config defaults for known datasets") {
    const auto cfg = parse_experiment_config(json{{"datasets", {"facebook", "caida"}}});
    REQUIRE(cfg.datasets.size() == 2);
    CHECK(cfg.datasets[0].expected_nodes == 4039);
    CHECK(cfg.datasets[0].flip_levels == std::vector<std::size_t>{1, 2, 3, 4, 5, 6, 7, 8, 9});
    CHECK(cfg.datasets[1].allow_extra_columns);
    CHECK(cfg.datasets[1].flip_levels.back() == 45);
    CHECK(cfg.trials == 10);
    CHECK(cfg.params.p == 0.5);
    CHECK(cfg.params.delta == 0.3);
    CHECK(cfg.attacks.size() == 3);
    CHECK(cfg.clusterings.size() == 3);
  }

  TEST_CASE("config options") {
    const auto cfg = parse_experiment_config(json{
        {"datasets", {"arxiv"}},
        {"flip_levels", {{"arxiv", {10, 20}}}},
        {"attacks", {"strategy2"}},
        {"clusterings", {"greedy", json{{"name", "infomap"}, {"file", "im.txt"}}}},
        {"trials", 2},
        {"master_seed", "18446744073709551615"},
        {"params", {{"p", 0.25}, {"search_cap", 5}}}});
    CHECK(cfg.datasets[0].flip_levels == std::vector<std::size_t>{10, 20});
    CHECK(cfg.attacks == std::vector<AttackKind>{AttackKind::IntraRemoveInterAdd});
    CHECK(cfg.clusterings[0].name == "greedy_modularity");
    CHECK(cfg.clusterings[1].file == "im.txt");
    CHECK_FALSE(cfg.clusterings[1].detector);
    CHECK(cfg.master_seed == 18446744073709551615ULL);
    CHECK(cfg.params.p == 0.25);
    CHECK(cfg.params.search_cap == 5);
  }

  TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse_experiment_config(json{{"datasets", {"facebook"}}, {"trials", 0}}), ParseError);
    CHECK_THROWS_AS(parse_experiment_config(json{{"datasets", {"facebook"}}, {"attacks", {"x"}}}),
                    ParseError);
    CHECK_THROWS_AS(parse_experiment_config(json{{"datasets", {"mystery"}}}), ParseError);
    CHECK_THROWS_AS(parse_experiment_config(json{{"attacks", {"random"}}}), ParseError);
    CHECK_THROWS_AS(parse_experiment_config(json{{"datasets", {"a,b"}}}), ParseError);
  }

  TEST_CASE("flip levels are capped at 0.1% of the edges") {
    DatasetConfig d;
    d.name = "d";
    d.flip_levels = {1, 5, 10};
    CHECK_NOTHROW(check_flip_levels(d, 10000));
    CHECK_THROWS_AS(check_flip_levels(d, 9999), InvalidArgument);
  }

  TEST_CASE("result CSV round trip") {
    ResultRow a;
    a.record.dataset = "d";
    a.record.attack = AttackKind::IntraAddInterRemove;
    a.record.clustering = "leiden";
    a.record.flips = 5;
    a.record.trial = 2;
    a.record.extracted = true;
    a.record.distortion = {0.1, 1.0 / 3.0, std::nullopt};
    a.seed = 18446744073709551615ULL;
    a.verdict_reason = "Verified";
    ResultRow b = a;
    b.record.attack = AttackKind::RandomBaseline;
    b.record.clustering = "none";
    b.record.distortion.dcc_pct = -12.5;
    b.record.extracted = false;
    b.verdict_reason = "NoAssignment";
    std::stringstream buf;
    write_result_csv(buf, {a, b});
    const auto back = read_result_csv(buf);
    REQUIRE(back.size() == 2);
    CHECK(back[0].record.distortion.dk2 == 1.0 / 3.0);
    CHECK_FALSE(back[0].record.distortion.dcc_pct);
    CHECK(back[1].record.distortion.dcc_pct == -12.5);
    CHECK(back[0].seed == a.seed);
    CHECK(back[1].record.attack == AttackKind::RandomBaseline);
    CHECK(strip_timing(back) == strip_timing({a, b}));
  }

  TEST_CASE("malformed CSV reports the row") {
    std::istringstream in(std::string(kResultCsvHeader) +
                          "\nd,random,none,1,0,5,true,Verified,1,0,,0,0,0\nd,random,none,x,0,5,true,V,1,0,,0,0,0\n");
    try {
      read_result_csv(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
    std::istringstream header("nope\n");
    CHECK_THROWS_AS(read_result_csv(header), ParseError);
    std::istringstream short_row(std::string(kResultCsvHeader) + "\na,b\n");
    CHECK_THROWS_AS(read_result_csv(short_row), ParseError);
  }

  TEST_CASE("no flip levels gives a header-only CSV") {
    const auto dir = scratch_dir("empty");
    auto doc = base_config(write_host(dir));
    doc["datasets"][0]["flip_levels"] = json::array();
    const auto rows = run_experiment(parse_experiment_config(doc));
    CHECK(rows.empty());
    std::ostringstream out;
    write_result_csv(out, rows);
    CHECK(out.str() == std::string(kResultCsvHeader) + "\n");
    fs::remove_all(dir);
  }

  TEST_CASE("sweep: row layout, replay determinism, budget fairness") {
    const auto dir = scratch_dir("sweep");
    const auto cfg = parse_experiment_config(base_config(write_host(dir)));
    const auto rows = run_experiment(cfg);
    // random: 2 levels x 3 trials; each strategy: 2 clusterings x 2 levels x 3
    REQUIRE(rows.size() == 6 + 2 * 12);
    CHECK(rows.front().record.attack == AttackKind::RandomBaseline);
    CHECK(rows.front().record.clustering == "none");
    CHECK(rows[6].record.clustering == "leiden");

    for (const auto& r : rows) {
      CHECK_FALSE(r.fault);
      CHECK_FALSE(r.exhausted_early);
      CHECK(r.record.distortion.ed_pct ==
            static_cast<double>(r.record.flips) / static_cast<double>(r.watermarked_edges) * 100.0);
      CHECK(r.seed == trial_seed(cfg.master_seed, {r.record.dataset, r.record.attack,
                                                   r.record.clustering, r.record.flips,
                                                   r.record.trial}));
    }
    // Trial t of every attack and clustering attacks the same copy, so the
    // per-(flips, attack) ED means coincide.
    std::map<std::pair<std::size_t, std::string>, double> ed_sum;
    for (const auto& r : rows)
      ed_sum[{r.record.flips, std::string(to_string(r.record.attack))}] +=
          r.record.distortion.ed_pct / (r.record.attack == AttackKind::RandomBaseline ? 3.0 : 6.0);
    for (const auto& [key, mean] : ed_sum) {
      const double ref = ed_sum.at({key.first, "random"});
      CHECK(std::abs(mean - ref) <= 1e-9 * ref);
    }
    for (const auto& r : rows)
      CHECK(r.watermarked_edges == rows[r.record.trial].watermarked_edges);

    int extracted_at_1 = 0;
    for (const auto& r : rows) extracted_at_1 += r.record.flips == 1 && r.record.extracted;
    CHECK(extracted_at_1 > 0);

    // A single trial replays to the same row.
    for (std::size_t i : {0, 7, 29}) {
      const auto& r = rows[i];
      const auto replay =
          run_trial(prepare_dataset(cfg, cfg.datasets[0]), cfg,
                    {r.record.dataset, r.record.attack, r.record.clustering, r.record.flips,
                     r.record.trial});
      CHECK(strip_timing({replay}) == strip_timing({r}));
    }

    const auto again = run_experiment(cfg);
    CHECK(strip_timing(again) == strip_timing(rows));

    auto other = cfg;
    other.master_seed = 8;
    CHECK(strip_timing(run_experiment(other)) != strip_timing(rows));

    auto serial = cfg;
    serial.threads = 1;
    CHECK(strip_timing(run_experiment(serial)) == strip_timing(rows));
    fs::remove_all(dir);
  }

  TEST_CASE("imported clustering follows the anonymization") {
    const auto dir = scratch_dir("import");
    const auto host = write_host(dir);
    // Write a clustering over the original labels: ten blocks by id.
    {
      std::ofstream out(dir / "blocks.txt");
      for (int i = 0; i < 2000; ++i) out << 'n' << i << ' ' << i % 10 << '\n';
    }
    auto doc = base_config(host);
    doc["attacks"] = {"intra_add_inter_remove"};
    doc["clusterings"] = {json{{"name", "blocks"}, {"file", (dir / "blocks.txt").string()}}};
    doc["trials"] = 2;
    const auto cfg = parse_experiment_config(doc);
    const auto prepared = prepare_dataset(cfg, cfg.datasets[0]);
    REQUIRE(prepared.imported.size() == 1);
    CHECK(prepared.imported[0].second.num_clusters == 10);
    const auto rows = run_experiment(cfg);
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) {
      CHECK_FALSE(r.fault);
      CHECK(r.record.clustering == "blocks");
    }
    fs::remove_all(dir);
  }

  TEST_CASE("infeasible dataset aborts before trials") {
    const auto dir = scratch_dir("infeasible");
    write_edge_list_file((dir / "path.txt").string(), path_graph(3000));
    json doc{{"datasets", {json{{"name", "p"}, {"path", (dir / "path.txt").string()}, {"flip_levels", {1}}}}},
             {"require_density", false}};
    CHECK_THROWS_AS(run_experiment(parse_experiment_config(doc)), InfeasibleError);
    fs::remove_all(dir);
  }

  TEST_CASE("trial faults become rows") {
    const auto dir = scratch_dir("fault");
    auto doc = base_config(write_host(dir));
    doc["params"] = {{"k", 1900}};  // more hosts than eligible nodes
    doc["attacks"] = {"random"};
    doc["trials"] = 1;
    const auto cfg = parse_experiment_config(doc);
    PreparedDataset prepared;
    prepared.config = cfg.datasets[0];
    prepared.loaded = load_edge_list_file(cfg.datasets[0].path);
    const auto row = run_trial(prepared, cfg, {"synth", AttackKind::RandomBaseline, "none", 1, 0});
    CHECK(row.fault);
    CHECK_FALSE(row.record.extracted);
    CHECK(row.verdict_reason.rfind("TrialFault: ", 0) == 0);
    CHECK(row.verdict_reason.find(',') == std::string::npos);
    std::stringstream buf;
    write_result_csv(buf, {row});
    const auto back = read_result_csv(buf);
    CHECK(back[0].fault);
    fs::remove_all(dir);
  }

  TEST_CASE("run_experiment_to_dir writes results, summary and figures") {
    const auto dir = scratch_dir("todir");
    auto doc = base_config(write_host(dir));
    doc["output_dir"] = (dir / "out").string();
    doc["trials"] = 1;
    run_experiment_to_dir(parse_experiment_config(doc));
    CHECK(fs::exists(dir / "out" / "results.csv"));
    CHECK(fs::exists(dir / "out" / "summary.csv"));
    for (const char* k : {"success_vs_flips", "ed", "dk2", "dcc"})
      CHECK(fs::exists(dir / "out" / ("synth_" + std::string(k) + ".svg")));
    fs::remove_all(dir);
  }
}

TEST_SUITE("summary") {
  TEST_CASE("grouped success and means against a recomputation") {
    std::vector<ResultRow> rows;
    for (int t = 0; t < 10; ++t) {
      ResultRow r;
      r.record.dataset = "d";
      r.record.attack = AttackKind::RandomBaseline;
      r.record.clustering = "none";
      r.record.flips = 3;
      r.record.trial = static_cast<std::size_t>(t);
      r.record.extracted = t < 4;
      r.record.distortion.ed_pct = 0.5 + t;
      r.record.distortion.dk2 = 0.01 * t;
      if (t % 3 != 0) r.record.distortion.dcc_pct = -1.0 * t;
      rows.push_back(r);
    }
    ResultRow other = rows[0];
    other.record.flips = 4;
    rows.push_back(other);

    const auto s = summarize(rows);
    REQUIRE(s.size() == 2);
    CHECK(s[0].trials == 10);
    CHECK(s[0].success_pct == 40.0);
    double ed = 0, dk2 = 0, dcc = 0;
    int dcc_n = 0;
    for (int t = 0; t < 10; ++t) {
      ed += rows[t].record.distortion.ed_pct;
      dk2 += rows[t].record.distortion.dk2;
      if (rows[t].record.distortion.dcc_pct) {
        dcc += *rows[t].record.distortion.dcc_pct;
        ++dcc_n;
      }
    }
    CHECK(*s[0].mean_ed == doctest::Approx(ed / 10).epsilon(1e-15));
    CHECK(*s[0].mean_dk2 == doctest::Approx(dk2 / 10).epsilon(1e-15));
    CHECK(*s[0].mean_dcc == doctest::Approx(dcc / dcc_n).epsilon(1e-15));
    CHECK(s[0].dcc_undefined == 4);
    CHECK(s[1].trials == 1);
    CHECK(s[1].success_pct == 100.0);
    CHECK(summarize({}).empty());

    std::stringstream buf;
    write_summary_csv(buf, s);
    const auto back = read_summary_csv(buf);
    REQUIRE(back.size() == 2);
    CHECK(back[0].mean_dcc == s[0].mean_dcc);
    CHECK(back[0].dcc_undefined == 4);
  }

  TEST_CASE("fault rows count as failures and stay out of the means") {
    ResultRow ok;
    ok.record.dataset = "d";
    ok.record.clustering = "none";
    ok.record.extracted = true;
    ok.record.distortion.ed_pct = 2.0;
    ResultRow bad = ok;
    bad.fault = true;
    bad.record.extracted = false;
    bad.record.distortion.ed_pct = 100.0;
    const auto s = summarize({ok, bad});
    CHECK(s[0].success_pct == 50.0);
    CHECK(s[0].mean_ed == 2.0);
    CHECK(s[0].faults == 1);
  }

  TEST_CASE("summarize_csv parse errors carry the row number") {
    std::istringstream in(std::string(kResultCsvHeader) + "\nd,random,none,1,0,5,maybe,V,1,0,,0,0,0\n");
    try {
      summarize_csv(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
}

TEST_SUITE("plot") {
  SummaryRow row(std::string attack, std::string clustering, std::size_t flips, double success) {
    SummaryRow s;
    s.dataset = "caida";
    s.attack = std::move(attack);
    s.clustering = std::move(clustering);
    s.flips = flips;
    s.trials = 10;
    s.success_pct = success;
    s.mean_ed = 0.01 * static_cast<double>(flips);
    s.mean_dk2 = 0.001 * static_cast<double>(flips);
    return s;
  }

  TEST_CASE("single point renders") {
    const std::vector<SummaryRow> s{row("random", "none", 5, 80)};
    const auto svg = render_svg(s, "caida", PlotKind::SuccessVsFlips);
    CHECK(svg.find("<circle") != std::string::npos);
    CHECK(svg.find("<polyline") == std::string::npos);
    CHECK(svg.find("Extraction success (%)") != std::string::npos);
    CHECK(svg.find("Edge modifications (flips)") != std::string::npos);
    // ΔCC undefined everywhere: axes only
    const auto dcc = render_svg(s, "caida", PlotKind::Dcc);
    CHECK(dcc.find("<circle") == std::string::npos);
  }

  TEST_CASE("identical summaries give identical SVG") {
    std::vector<SummaryRow> s;
    for (std::size_t f : {1u, 5u, 10u}) s.push_back(row("random", "none", f, 100.0 - f));
    CHECK(render_svg(s, "caida", PlotKind::EditDistance) == render_svg(s, "caida", PlotKind::EditDistance));
  }

  TEST_CASE("one curve per configured strategy") {
    std::vector<SummaryRow> s;
    for (std::size_t f : {1u, 5u, 10u}) {
      s.push_back(row("random", "none", f, 80));
      for (const char* c : {"greedy_modularity", "label_propagation", "leiden", "infomap"})
        s.push_back(row("intra_remove_inter_add", c, f, 20));
    }
    CHECK(curve_count(s, "caida") == 5);
    const auto svg = render_svg(s, "caida", PlotKind::SuccessVsFlips);
    std::size_t curves = 0;
    for (auto pos = svg.find("class=\"curve\""); pos != std::string::npos;
         pos = svg.find("class=\"curve\"", pos + 1))
      ++curves;
    CHECK(curves == 5);
  }

  TEST_CASE("empty summary writes nothing") {
    const auto dir = scratch_dir("plot_empty");
    CHECK(write_plots({}, dir / "figs").empty());
    CHECK_FALSE(fs::exists(dir / "figs"));
    fs::remove_all(dir);
  }

  TEST_CASE("plot kind names") {
    for (PlotKind k : kAllPlotKinds) CHECK(parse_plot_kind(to_string(k)) == k);
    CHECK_FALSE(parse_plot_kind("histogram"));
  }
}
