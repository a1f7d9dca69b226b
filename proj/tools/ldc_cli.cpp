// Copyright (c) LDC contributors.
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: build, centrality, sweep, stats, permtest.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ldc/ldc.hpp"
#include "run_manifest.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kInputError = 2, kEmptyResult = 3, kUndefined = 4 };

struct Failure {
    int code;
    std::string message;
};

struct Common {
    unsigned jobs = 1;
    std::optional<std::uint64_t> seed;
    std::string input_format = "csv";
    std::string format = "csv";
    std::string out;
};

unsigned resolve_jobs(unsigned jobs) {
    return jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : jobs;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("LDC_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw Failure{kUsage, std::string("LDC_SEED is not an integer: ") + env};
        }
    }
    return 1;
}

std::vector<ldc::FluencyRecord> load_corpus(const std::string& path, const std::string& format) {
    std::ifstream in(path);
    if (!in) throw Failure{kInputError, "cannot open corpus " + path};
    return format == "lists" ? ldc::parse_corpus_lists(in) : ldc::parse_corpus(in);
}

ldc::WeightedDigraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Failure{kInputError, "cannot open graph " + path};
    return ldc::read_graph_csv(in);
}

/// Writes `content` to `path` (or stdout for an empty path) and records it.
void emit(const std::string& path, const std::string& content, ldc::cli::RunManifest* manifest = nullptr) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    {
        std::ofstream out(p, std::ios::binary);
        if (!out) throw Failure{kInputError, "cannot write " + path};
        out << content;
    }
    if (manifest) manifest->add_output(p);
}

fs::path manifest_root(const std::string& out) {
    const fs::path p = fs::absolute(out);
    return p.parent_path();
}

void finish_manifest(const ldc::cli::RunManifest& m, const std::string& out) {
    if (!out.empty()) m.write(out + ".manifest.json");
}

// --------------------------------------------------------------------------

int cmd_build(const std::string& corpus, int ws, int ms, const Common& c) {
    ldc::cli::RunManifest manifest("build", manifest_root(c.out.empty() ? "." : c.out));
    const auto records = load_corpus(corpus, c.input_format);
    manifest.add_input(corpus);
    manifest.set_parameter("ws", ws);
    manifest.set_parameter("ms", ms);
    manifest.set_parameter("input_format", c.input_format);
    const auto g = ldc::build_graph(records, {ws, ms});
    if (g.arc_count() == 0) throw Failure{kEmptyResult, "empty graph"};
    std::ostringstream out;
    ldc::write_graph_csv(out, g);
    emit(c.out, out.str(), &manifest);
    finish_manifest(manifest, c.out);
    std::cerr << "graph: " << g.vertex_count() << " vertices, " << g.arc_count() << " arcs\n";
    return kOk;
}

int cmd_centrality(const std::string& graph_path, const std::vector<std::string>& measure_names, double alpha,
                   const std::string& layout, bool verbose, const Common& c) {
    ldc::cli::RunManifest manifest("centrality", manifest_root(c.out.empty() ? "." : c.out));
    const auto g = load_graph(graph_path);
    manifest.add_input(graph_path);

    std::vector<ldc::Measure> measures;
    for (const auto& name : measure_names) {
        if (name == "all") {
            measures.assign(ldc::kAllMeasures.begin(), ldc::kAllMeasures.end());
            break;
        }
        measures.push_back(*ldc::parse_measure(name));
    }
    manifest.set_parameter("measures", measure_names);
    manifest.set_parameter("alpha", alpha);
    manifest.set_parameter("layout", layout);
    manifest.set_parameter("format", c.format);

    if (g.vertex_count() < 2) throw Failure{kEmptyResult, "empty graph"};
    const ldc::PageRankParams pr{.damping = alpha};
    const auto table = ldc::compute_measures(g, measures, pr, resolve_jobs(c.jobs));
    if (verbose) {
        const auto detailed = ldc::pagerank_detailed(g, pr);
        std::cerr << "radius " << ldc::format_g12(table.radius) << "\npagerank iterations " << detailed.iterations
                  << "\n";
        for (std::size_t v = 0; v < g.vertex_count(); ++v) {
            std::cerr << "pagerank_raw " << g.label(static_cast<ldc::VertexId>(v)) << ' '
                      << ldc::format_g12(detailed.raw[v]) << '\n';
        }
    }

    std::ostringstream out;
    if (c.format == "json") {
        json j;
        j["radius"] = ldc::round_g12(table.radius);
        j["vertices"] = json::array();
        for (std::size_t v = 0; v < table.labels.size(); ++v) {
            json row;
            row["word"] = table.labels[v];
            for (ldc::Measure m : measures) row[std::string(ldc::measure_name(m))] = ldc::round_g12(table.column(m).scores[v]);
            j["vertices"].push_back(row);
        }
        out << j.dump(2) << '\n';
    } else if (layout == "long") {
        ldc::write_centrality_long(out, table, measures);
    } else {
        ldc::write_centrality_wide(out, table, measures);
    }
    emit(c.out, out.str(), &manifest);
    finish_manifest(manifest, c.out);
    return kOk;
}

std::string cell_dir_name(const ldc::DistanceFunctionParams& p) {
    return "ws" + std::to_string(p.ws) + "_ms" + std::to_string(p.ms);
}

/// A finished cell whose recorded files still hash to the recorded digests.
std::optional<std::string> resumable_row(const fs::path& dir) {
    const auto meta_path = dir / "cell.json";
    if (!fs::exists(meta_path)) return std::nullopt;
    try {
        const auto meta = json::parse(ldc::cli::read_file(meta_path));
        for (const auto& [name, sha] : meta.at("files").items()) {
            if (!fs::exists(dir / name) || ldc::cli::sha256_file(dir / name) != sha.get<std::string>()) {
                return std::nullopt;
            }
        }
        return meta.at("summary_row").get<std::string>();
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

/// Writes one cell directory and returns (relative file name, content) pairs written.
void write_cell(const fs::path& dir, const ldc::GridResult& cell) {
    fs::create_directories(dir);
    std::map<std::string, std::string> files;
    {
        std::ostringstream s;
        ldc::write_graph_csv(s, cell.graph);
        files["graph.csv"] = s.str();
    }
    if (cell.status == ldc::CellStatus::ok) {
        std::ostringstream cen, rho, dist, words;
        ldc::write_centrality_wide(cen, *cell.centrality, ldc::kAllMeasures);
        ldc::write_square_table(rho, cell.spearman);
        ldc::write_square_table(dist, ldc::correlation_distance(cell.spearman));
        words << "word\n";
        for (const auto& w : cell.included_words) words << ldc::csv_escape(w) << '\n';
        files["centrality.csv"] = cen.str();
        files["spearman.csv"] = rho.str();
        files["distance.csv"] = dist.str();
        files["included_words.csv"] = words.str();
    }
    json meta;
    meta["ws"] = cell.params.ws;
    meta["ms"] = cell.params.ms;
    meta["status"] = std::string(ldc::cell_status_name(cell.status));
    meta["message"] = cell.message;
    meta["summary_row"] = ldc::grid_summary_row(cell);
    meta["files"] = json::object();
    for (const auto& [name, content] : files) {
        std::ofstream(dir / name, std::ios::binary) << content;
        meta["files"][name] = ldc::cli::sha256_hex(content);
    }
    std::ofstream(dir / "cell.json") << meta.dump(2) << '\n';
}

int cmd_sweep(const std::string& corpus, const std::string& grid_text, bool resume, const Common& c) {
    if (c.out.empty()) throw Failure{kUsage, "sweep needs --out DIR"};
    ldc::GridSpec spec;
    try {
        spec = ldc::parse_grid_spec(grid_text);
    } catch (const ldc::Error& e) {
        throw Failure{kUsage, e.what()};
    }
    const fs::path root(c.out);
    fs::create_directories(root);
    ldc::cli::RunManifest manifest("sweep", root);
    const auto records = load_corpus(corpus, c.input_format);
    manifest.add_input(corpus);
    manifest.set_parameter("grid", grid_text);
    manifest.set_parameter("exclusion_sd", 2.5);
    manifest.set_parameter("sd_convention", "population");
    manifest.set_parameter("input_format", c.input_format);

    std::vector<ldc::DistanceFunctionParams> cells;
    for (int ws : spec.window_sizes) {
        for (int ms : spec.min_subjects) cells.push_back({ws, ms});
    }
    const auto stats = ldc::covariates(records);
    std::vector<std::string> rows(cells.size());
    std::vector<char> usable(cells.size(), 0);
    std::size_t reused = 0;
    ldc::parallel_for(cells.size(), resolve_jobs(c.jobs), [&](std::size_t i) {
        const auto dir = root / cell_dir_name(cells[i]);
        if (resume) {
            if (auto row = resumable_row(dir)) {
                rows[i] = *row;
                usable[i] = 1;
                return;
            }
        }
        const auto cell = ldc::evaluate_cell(records, stats, cells[i]);
        write_cell(dir, cell);
        rows[i] = ldc::grid_summary_row(cell);
        usable[i] = 2;
    });

    std::size_t ok_cells = 0;
    std::ostringstream summary;
    summary << ldc::grid_summary_header() << '\n';
    for (std::size_t i = 0; i < cells.size(); ++i) {
        summary << rows[i] << '\n';
        if (rows[i].find(",ok,") != std::string::npos) ++ok_cells;
        reused += usable[i] == 1;
        const auto dir = root / cell_dir_name(cells[i]);
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (entry.is_regular_file()) manifest.add_output(entry.path());
        }
    }
    emit((root / "grid_summary.csv").string(), summary.str(), &manifest);
    manifest.write(root / "manifest.json");
    std::cerr << cells.size() << " cells, " << ok_cells << " ok, " << reused << " resumed\n";
    return ok_cells == 0 ? kEmptyResult : kOk;
}

int cmd_stats(const std::string& corpus, const std::string& graph_path, const Common& c) {
    ldc::cli::RunManifest manifest("stats", manifest_root(c.out.empty() ? "." : c.out));
    const auto records = load_corpus(corpus, c.input_format);
    manifest.add_input(corpus);
    const auto stats = ldc::covariates(records);
    std::ostringstream out;
    if (!graph_path.empty()) {
        const auto g = load_graph(graph_path);
        manifest.add_input(graph_path);
        if (g.vertex_count() < 2) throw Failure{kEmptyResult, "empty graph"};
        ldc::write_regression_table(out, stats, g.labels(), ldc::ldc_all(g, resolve_jobs(c.jobs)));
    } else if (c.format == "json") {
        json j = json::array();
        auto opt = [](const std::optional<double>& x) { return x ? json(ldc::round_g12(*x)) : json(nullptr); };
        for (const auto& s : stats) {
            j.push_back({{"word", s.word},
                         {"frequency", s.frequency},
                         {"log_frequency", ldc::round_g12(s.log_frequency)},
                         {"avg_location", ldc::round_g12(s.avg_location)},
                         {"dt_to", opt(s.dt_to)},
                         {"dt_from", opt(s.dt_from)},
                         {"n_to", s.n_to},
                         {"n_from", s.n_from}});
        }
        out << j.dump(2) << '\n';
    } else {
        ldc::write_retrieval_csv(out, stats);
    }
    emit(c.out, out.str(), &manifest);
    finish_manifest(manifest, c.out);
    return kOk;
}

int cmd_permtest(const std::string& corpus, int ws, int ms, const std::string& target, int n, double alpha,
                 bool one_sided, bool no_exclusion, const Common& c) {
    ldc::cli::RunManifest manifest("permtest", manifest_root(c.out.empty() ? "." : c.out));
    const auto records = load_corpus(corpus, c.input_format);
    manifest.add_input(corpus);
    ldc::PermutationConfig cfg;
    cfg.repetitions = n;
    cfg.seed = resolve_seed(c.seed);
    cfg.params = {ws, ms};
    cfg.target = target == "dt_to" ? ldc::DtTarget::dt_to : ldc::DtTarget::dt_from;
    cfg.alpha = alpha;
    cfg.tail = one_sided ? ldc::Tail::one_sided : ldc::Tail::two_sided;
    if (no_exclusion) cfg.exclusion_sd.reset();
    cfg.jobs = resolve_jobs(c.jobs);

    json j;
    j["ws"] = ws;
    j["ms"] = ms;
    j["target"] = target;
    j["n"] = n;
    j["seed"] = cfg.seed;
    j["alpha"] = alpha;
    j["tail"] = one_sided ? "one_sided" : "two_sided";
    j["exclusion_sd"] = cfg.exclusion_sd ? json(*cfg.exclusion_sd) : json(nullptr);
    j["sd_convention"] = "population";
    for (const auto& [k, v] : j.items()) manifest.set_parameter(k, v);

    const auto res = ldc::permutation_test(records, cfg);
    j["actual_rho"] = ldc::round_g12(res.actual.rho);
    j["actual_n"] = res.actual.n;
    j["actual_p_parametric"] = ldc::round_g12(res.actual.p_value);
    j["p_value"] = ldc::round_g12(res.p_value);
    j["actual_significant"] = res.actual_significant;
    j["significant_nontrivial"] = res.significant_nontrivial;
    json null;
    null["count"] = res.null_rhos.size();
    null["failed"] = res.failed;
    null["redraws"] = res.redraws;
    if (!res.null_rhos.empty()) {
        double mean = 0.0;
        for (double r : res.null_rhos) mean += r;
        mean /= static_cast<double>(res.null_rhos.size());
        double var = 0.0;
        for (double r : res.null_rhos) var += (r - mean) * (r - mean);
        null["mean"] = ldc::round_g12(mean);
        null["sd"] = ldc::round_g12(std::sqrt(var / static_cast<double>(res.null_rhos.size())));
        json q;
        for (double p : {0.025, 0.05, 0.25, 0.5, 0.75, 0.95, 0.975}) {
            q[ldc::format_g12(p)] = ldc::round_g12(ldc::quantile(res.null_rhos, p));
        }
        null["quantiles"] = q;
    }
    j["null"] = null;

    std::ostringstream out;
    if (c.format == "csv") {
        out << "key,value\n";
        for (const auto& [k, v] : j.flatten().items()) out << ldc::csv_escape(k) << ',' << v.dump() << '\n';
    } else {
        out << j.dump(2) << '\n';
    }
    emit(c.out, out.str(), &manifest);
    finish_manifest(manifest, c.out);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local Detour Centrality toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", ldc::cli::kToolVersion);

    Common common;
    auto add_common = [&](CLI::App* sub, bool with_seed) {
        sub->add_option("--jobs", common.jobs, "Worker threads (0 = all cores)")->capture_default_str();
        if (with_seed) sub->add_option("--seed", common.seed, "Master seed (falls back to $LDC_SEED, then 1)");
        sub->add_option("-o,--out", common.out, "Output path (stdout when omitted)");
    };
    auto add_input_format = [&](CLI::App* sub) {
        sub->add_option("--input-format", common.input_format, "Corpus layout")
            ->check(CLI::IsMember({"csv", "lists"}))
            ->capture_default_str();
    };

    std::string corpus, graph_path, grid = "paper", target = "dt_from", layout = "wide";
    int ws = 1, ms = 3, n = 5000;
    double alpha = 0.85, sig_alpha = 0.05;
    bool resume = false, one_sided = false, no_exclusion = false, verbose = false;
    std::vector<std::string> measures{"all"};
    std::vector<std::string> measure_choices{"all"};
    for (auto m : ldc::kAllMeasures) measure_choices.emplace_back(ldc::measure_name(m));

    auto* build = app.add_subcommand("build", "Build the traversal-time graph from a corpus");
    build->add_option("corpus", corpus, "Transcript file")->required();
    build->add_option("--ws", ws, "Window size")->check(CLI::PositiveNumber)->capture_default_str();
    build->add_option("--ms", ms, "Minimum subjects (strict)")->check(CLI::PositiveNumber)->capture_default_str();
    add_input_format(build);
    add_common(build, false);

    auto* centrality = app.add_subcommand("centrality", "Centrality scores for a graph CSV");
    centrality->add_option("graph", graph_path, "Graph CSV")->required();
    centrality->add_option("--measure", measures, "Measures (comma separated or repeated)")
        ->delimiter(',')
        ->check(CLI::IsMember(measure_choices))
        ->capture_default_str();
    centrality->add_option("--alpha", alpha, "PageRank damping")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    centrality->add_option("--layout", layout, "CSV layout")->check(CLI::IsMember({"wide", "long"}))->capture_default_str();
    centrality->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    centrality->add_flag("--verbose", verbose, "Print radius and raw PageRank to stderr");
    add_common(centrality, false);

    auto* sweep = app.add_subcommand("sweep", "Evaluate every cell of a WS x MS grid");
    sweep->add_option("corpus", corpus, "Transcript file")->required();
    sweep->add_option("--grid", grid, "'paper' (ws 1..9 by ms 3..21 odd) or e.g. ws=1..3,ms=3..7:2")->capture_default_str();
    sweep->add_flag("--resume", resume, "Skip cells whose files match their recorded digests");
    add_input_format(sweep);
    add_common(sweep, false);

    auto* stats = app.add_subcommand("stats", "Per-word retrieval statistics");
    stats->add_option("corpus", corpus, "Transcript file")->required();
    stats->add_option("--graph", graph_path, "Join with LDC on this graph (regression table)");
    stats->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    add_input_format(stats);
    add_common(stats, false);

    auto* permtest = app.add_subcommand("permtest", "Shuffle-order significance of the LDC-dt correlation");
    permtest->add_option("corpus", corpus, "Transcript file")->required();
    permtest->add_option("--ws", ws, "Window size")->check(CLI::PositiveNumber)->capture_default_str();
    permtest->add_option("--ms", ms, "Minimum subjects")->check(CLI::PositiveNumber)->capture_default_str();
    permtest->add_option("--target", target, "dt_to or dt_from")->check(CLI::IsMember({"dt_to", "dt_from"}))->capture_default_str();
    permtest->add_option("--n", n, "Repetitions")->check(CLI::PositiveNumber)->capture_default_str();
    permtest->add_option("--alpha", sig_alpha, "Significance level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    permtest->add_flag("--one-sided", one_sided, "Test in the direction of the actual correlation");
    permtest->add_flag("--no-exclusion", no_exclusion, "Skip the 2.5 SD outlier exclusion");
    std::string perm_format = "json";
    permtest->add_option("--format", perm_format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    add_input_format(permtest);
    add_common(permtest, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return kUsage;
    }
    if (permtest->parsed()) common.format = perm_format;

    try {
        if (build->parsed()) return cmd_build(corpus, ws, ms, common);
        if (centrality->parsed()) return cmd_centrality(graph_path, measures, alpha, layout, verbose, common);
        if (sweep->parsed()) return cmd_sweep(corpus, grid, resume, common);
        if (stats->parsed()) return cmd_stats(corpus, graph_path, common);
        if (permtest->parsed()) return cmd_permtest(corpus, ws, ms, target, n, sig_alpha, one_sided, no_exclusion, common);
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << '\n';
        return f.code;
    } catch (const ldc::UndefinedActualCorrelation& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUndefined;
    } catch (const ldc::EmptyGraph& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kEmptyResult;
    } catch (const ldc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kUsage;
}
