#include "learndag/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "learndag/errors.hpp"
#include "learndag/io.hpp"
#include "learndag/pipeline.hpp"
#include "learndag/preprocess.hpp"
#include "learndag/rng.hpp"
#include "learndag/simulate.hpp"

namespace learndag::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct ConfigFlags {
    double alpha_pns = -1;
    double alpha_prune = -1;
    double alpha_exponent = -1;
    int max_parents = 0;
    int bootstrap_b = 50;
    double bootstrap_threshold = 0.20;
    std::string score = "loglik";
    bool no_pns = false;
    bool margin = false;
    double alpha_margin = 0.05;
    std::string prune = "wald";
    std::string pns_rule = "or";
    double min_gain = 0.0;
    std::uint64_t seed = 0;
    int threads = 0;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& flags) {
    cmd->add_option("--alpha-pns", flags.alpha_pns,
                    "PNS significance level (default: sample-size schedule)");
    cmd->add_option("--alpha-prune", flags.alpha_prune,
                    "pruning significance level (default: sample-size schedule)");
    cmd->add_option("--alpha-exponent", flags.alpha_exponent,
                    "exponent e of the schedule 2(1-Phi(n^e))");
    cmd->add_option("--max-parents", flags.max_parents, "parent cap m (default: p-2)");
    cmd->add_option("--bootstrap-b", flags.bootstrap_b, "bootstrap replicates (default 50)");
    cmd->add_option("--bootstrap-threshold", flags.bootstrap_threshold,
                    "bootstrap edge-frequency cutoff (default 0.20)");
    cmd->add_option("--score", flags.score, "orientation score: loglik or bic")
        ->check(CLI::IsMember({"loglik", "bic"}));
    cmd->add_flag("--no-pns", flags.no_pns, "skip Step 1, candidate parents are all other nodes");
    cmd->add_flag("--margin", flags.margin, "run the marginal-independence step 0");
    cmd->add_option("--alpha-margin", flags.alpha_margin, "step-0 significance level");
    cmd->add_option("--prune", flags.prune, "pruning mode: wald, deviance or none")
        ->check(CLI::IsMember({"wald", "deviance", "none"}));
    cmd->add_option("--pns-rule", flags.pns_rule, "PNS symmetrization: or / and")
        ->check(CLI::IsMember({"or", "and"}));
    cmd->add_option("--min-gain", flags.min_gain, "smallest admissible score gain");
    cmd->add_option("--seed", flags.seed, "RNG seed");
    cmd->add_option("--threads", flags.threads, "worker threads (0 = cores)");
}

Config to_config(const ConfigFlags& flags) {
    Config config;
    if (flags.alpha_pns >= 0) config.alpha_pns = flags.alpha_pns;
    if (flags.alpha_prune >= 0) config.alpha_prune = flags.alpha_prune;
    if (flags.alpha_exponent >= 0) config.alpha_exponent = flags.alpha_exponent;
    if (flags.max_parents > 0) config.max_parents = flags.max_parents;
    config.bootstrap_b = flags.bootstrap_b;
    config.bootstrap_threshold = flags.bootstrap_threshold;
    config.score_kind = flags.score == "bic" ? ScoreKind::Bic : ScoreKind::LogLik;
    config.use_pns = !flags.no_pns;
    config.use_margin_step = flags.margin;
    config.alpha_margin = flags.alpha_margin;
    if (flags.prune == "wald")
        config.prune_mode = PruneMode::WaldStep3;
    else if (flags.prune == "deviance")
        config.prune_mode = PruneMode::DevianceInStep2;
    else
        config.prune_mode = PruneMode::None;
    config.pns_rule = flags.pns_rule == "and" ? SymmetrizeRule::And : SymmetrizeRule::Or;
    config.min_gain = flags.min_gain;
    config.seed = flags.seed;
    config.threads = flags.threads;
    config.validate();
    return config;
}

json resolved_to_json(const ResolvedConfig& r) {
    return json{{"alpha_pns", r.alpha_pns},
                {"alpha_prune", r.alpha_prune},
                {"alpha_exponent", r.alpha_exponent},
                {"alpha_margin", r.alpha_margin},
                {"max_parents", r.max_parents},
                {"bootstrap_b", r.bootstrap_b},
                {"bootstrap_threshold", r.bootstrap_threshold},
                {"score", to_string(r.score_kind)},
                {"use_pns", r.use_pns},
                {"margin", r.use_margin_step},
                {"prune", to_string(r.prune_mode)},
                {"pns_rule", to_string(r.pns_rule)},
                {"min_gain", r.min_gain},
                {"seed", r.seed},
                {"threads", r.threads}};
}

void ensure_out_dir(const std::string& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw validation_error("cannot create output directory '" + out_dir + "'");
}

int cmd_learn(const std::string& input, const std::string& out_dir, const ConfigFlags& flags,
              bool dot) {
    auto config = to_config(flags);
    auto dataset = io::read_counts(input);
    ensure_out_dir(out_dir);

    auto result = pipeline::learn_dag(dataset.data, config);

    io::write_edge_list(out_dir + "/edges.csv", result.dag, dataset.names);
    io::write_edge_list(out_dir + "/oriented.csv", result.oriented, dataset.names);
    io::write_skeleton(out_dir + "/pns.csv", result.pns_sets, dataset.names);
    if (dot) io::write_dot(out_dir + "/edges.dot", result.dag, dataset.names);

    json report;
    report["input"] = input;
    report["n"] = dataset.data.n();
    report["p"] = dataset.data.p();
    report["config"] = resolved_to_json(result.resolved);
    report["edges"] = result.dag.edge_count();
    report["oriented_edges"] = result.oriented.edge_count();
    report["pns_pairs"] = result.pns_sets.pairs().size();
    json prune_rows = json::array();
    for (const auto& d : result.prune_report) {
        prune_rows.push_back(json{{"from", dataset.names[d.from]},
                                  {"to", dataset.names[d.to]},
                                  {"z", d.z},
                                  {"p_value", d.p_value},
                                  {"kept", d.kept},
                                  {"untested", d.untested}});
    }
    report["prune_tests"] = prune_rows;
    json admissions = json::array();
    for (const auto& a : result.trace)
        admissions.push_back(json{{"from", dataset.names[a.from]},
                                  {"to", dataset.names[a.to]},
                                  {"gain", a.gain}});
    report["orient_trace"] = admissions;
    report["timings"] = json{{"margin_seconds", result.timings.margin_seconds},
                             {"pns_seconds", result.timings.pns_seconds},
                             {"orient_seconds", result.timings.orient_seconds},
                             {"prune_seconds", result.timings.prune_seconds},
                             {"total_seconds", result.timings.total_seconds}};

    std::ofstream report_out(out_dir + "/report.json");
    report_out << report.dump(2) << "\n";

    std::cout << "learned " << result.dag.edge_count() << " edges (oriented "
              << result.oriented.edge_count() << ", pns pairs " << result.pns_sets.pairs().size()
              << ") -> " << out_dir << "\n";
    return kExitOk;
}

int cmd_simulate(const std::string& kind_name, int p, int n, int edges, std::uint64_t seed,
                 const std::string& out_dir) {
    auto kind = simulate::graph_kind_from_string(kind_name);
    ensure_out_dir(out_dir);

    Dag truth = simulate::gen_graph(p, kind, edges, mix_seed(seed, 1));
    auto model = simulate::gen_params(truth, mix_seed(seed, 2));
    auto sampled = simulate::sample(model, n, mix_seed(seed, 3));

    auto names = io::default_names(p);
    io::write_counts(out_dir + "/dataset.csv", sampled.data, names);
    io::write_edge_list(out_dir + "/truth_edges.csv", truth, names);

    json manifest;
    manifest["kind"] = simulate::to_string(kind);
    manifest["p"] = p;
    manifest["n"] = n;
    manifest["edges"] = truth.edge_count();
    manifest["seed"] = seed;
    manifest["clamp_events"] = sampled.clamp_events;
    std::ofstream out(out_dir + "/simulation.json");
    out << manifest.dump(2) << "\n";

    std::cout << "simulated " << n << " samples of " << p << " variables (" << truth.edge_count()
              << " edges) -> " << out_dir << "\n";
    return kExitOk;
}

int cmd_sweep(const std::string& kinds_csv, const std::string& p_csv, const std::string& n_csv,
              int replicates, const ConfigFlags& flags, const std::string& out_dir) {
    auto config = to_config(flags);
    ensure_out_dir(out_dir);

    auto split_csv = [](const std::string& csv) {
        std::vector<std::string> items;
        std::string item;
        std::istringstream stream(csv);
        while (std::getline(stream, item, ',')) items.push_back(item);
        return items;
    };

    std::vector<simulate::SweepCell> cells;
    for (const auto& kind_name : split_csv(kinds_csv)) {
        auto kind = simulate::graph_kind_from_string(kind_name);
        for (const auto& p_str : split_csv(p_csv)) {
            for (const auto& n_str : split_csv(n_csv)) {
                simulate::SweepCell cell;
                cell.kind = kind;
                cell.p = std::stoi(p_str);
                cell.n = std::stoi(n_str);
                cell.config = config;
                cells.push_back(std::move(cell));
            }
        }
    }

    auto table = simulate::run_sweep(cells, replicates, flags.seed, flags.threads);
    io::write_sweep_rows(out_dir + "/results.csv", table.rows);
    io::write_sweep_summary(out_dir + "/summary.csv", table.summarize());

    int failures = 0;
    for (const auto& row : table.rows)
        if (row.failed) ++failures;
    std::cout << "swept " << cells.size() << " cells x " << replicates << " replicates ("
              << failures << " failures) -> " << out_dir << "\n";
    return kExitOk;
}

int cmd_preprocess(const std::string& input, double quantile, const std::string& units_name,
                   int threads, const std::string& out_dir) {
    auto dataset = io::read_real_matrix(input);
    auto units = units_name == "columns" ? preprocess::Units::Columns : preprocess::Units::Rows;
    ensure_out_dir(out_dir);

    auto result = preprocess::preprocess_pipeline(dataset.data, quantile, units, threads);
    io::write_counts(out_dir + "/counts.csv", result.counts, dataset.names);

    json report;
    report["input"] = input;
    report["quantile"] = result.report.quantile;
    report["reference_quantile"] = result.report.reference_quantile;
    report["alpha"] = result.report.alpha;
    report["ks_at_alpha"] = result.report.ks_at_alpha;
    report["scales"] = result.report.scales;
    report["dropped_units"] = result.report.dropped_units;
    json skipped = json::array();
    for (int j : result.report.skipped_columns) skipped.push_back(dataset.names[j]);
    report["constant_columns"] = skipped;
    std::ofstream out(out_dir + "/preprocess.json");
    out << report.dump(2) << "\n";

    std::cout << "preprocessed " << result.counts.n() << " x " << result.counts.p()
              << " counts (alpha=" << result.report.alpha << ") -> " << out_dir << "\n";
    return kExitOk;
}

int cmd_metrics(const std::string& estimated_path, const std::string& truth_path,
                const std::string& nodes_csv, const std::string& nodes_from) {
    std::vector<std::string> names;
    if (!nodes_from.empty()) {
        names = io::read_counts(nodes_from).names;
    } else if (!nodes_csv.empty()) {
        std::string item;
        std::istringstream stream(nodes_csv);
        while (std::getline(stream, item, ',')) names.push_back(item);
    } else {
        throw validation_error("metrics needs a node universe: --nodes or --nodes-from");
    }

    Dag estimated = io::read_edge_list(estimated_path, names);
    Dag truth = io::read_edge_list(truth_path, names);
    auto m = simulate::structure_metrics(estimated, truth);

    std::cout << "tp=" << m.tp << " fp=" << m.fp << " fn=" << m.fn << " precision=" << m.precision
              << " recall=" << m.recall << " f1=" << m.f1 << "\n";
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"learnDAG: DAG structure learning for multivariate count data"};
    app.require_subcommand(1);

    // learn
    std::string learn_input, learn_out = "learndag_out";
    bool learn_dot = false;
    ConfigFlags learn_flags;
    auto* learn = app.add_subcommand("learn", "learn a DAG from a counts dataset");
    learn->add_option("--input", learn_input, "counts file (header + samples as rows)")
        ->required();
    learn->add_option("--out-dir", learn_out, "output directory");
    learn->add_flag("--dot", learn_dot, "also write a DOT rendering");
    add_config_flags(learn, learn_flags);

    // simulate
    std::string sim_kind = "scalefree", sim_out = "simulate_out";
    int sim_p = 10, sim_n = 200, sim_edges = 0;
    std::uint64_t sim_seed = 0;
    auto* sim = app.add_subcommand("simulate", "sample a synthetic Poisson DAG dataset");
    sim->add_option("--kind", sim_kind, "scalefree, hub or erdosrenyi");
    sim->add_option("--p", sim_p, "variable count")->required();
    sim->add_option("--n", sim_n, "sample count")->required();
    sim->add_option("--edges", sim_edges, "edge count (default: benchmark size)");
    sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_option("--out-dir", sim_out, "output directory");

    // sweep
    std::string sweep_kinds = "scalefree,hub,erdosrenyi", sweep_p = "10", sweep_n = "200,500";
    std::string sweep_out = "sweep_out";
    int sweep_replicates = 5;
    ConfigFlags sweep_flags;
    auto* sweep = app.add_subcommand("sweep", "replicate benchmark over a simulation grid");
    sweep->add_option("--kinds", sweep_kinds, "comma list of graph kinds");
    sweep->add_option("--p", sweep_p, "comma list of variable counts");
    sweep->add_option("--n", sweep_n, "comma list of sample sizes");
    sweep->add_option("--replicates", sweep_replicates, "replicates per cell");
    sweep->add_option("--out-dir", sweep_out, "output directory");
    add_config_flags(sweep, sweep_flags);

    // preprocess
    std::string prep_input, prep_units = "rows", prep_out = "preprocess_out";
    double prep_quantile = 0.95;
    int prep_threads = 0;
    auto* prep = app.add_subcommand("preprocess", "quantile-normalize, power-transform and floor");
    prep->add_option("--input", prep_input, "non-negative real matrix with header")->required();
    prep->add_option("--quantile", prep_quantile, "matching quantile (default 0.95)");
    prep->add_option("--units", prep_units, "statistical units: rows or columns")
        ->check(CLI::IsMember({"rows", "columns"}));
    prep->add_option("--threads", prep_threads, "worker threads (0 = cores)");
    prep->add_option("--out-dir", prep_out, "output directory");

    // metrics
    std::string met_est, met_truth, met_nodes, met_nodes_from;
    auto* met = app.add_subcommand("metrics", "compare two edge lists");
    met->add_option("--estimated", met_est, "estimated edge list")->required();
    met->add_option("--truth", met_truth, "ground-truth edge list")->required();
    met->add_option("--nodes", met_nodes, "comma list naming the node universe");
    met->add_option("--nodes-from", met_nodes_from, "counts file whose header names the universe");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitParse;
    }

    try {
        if (learn->parsed()) return cmd_learn(learn_input, learn_out, learn_flags, learn_dot);
        if (sim->parsed()) return cmd_simulate(sim_kind, sim_p, sim_n, sim_edges, sim_seed, sim_out);
        if (sweep->parsed())
            return cmd_sweep(sweep_kinds, sweep_p, sweep_n, sweep_replicates, sweep_flags,
                             sweep_out);
        if (prep->parsed())
            return cmd_preprocess(prep_input, prep_quantile, prep_units, prep_threads, prep_out);
        if (met->parsed()) return cmd_metrics(met_est, met_truth, met_nodes, met_nodes_from);
        std::cerr << app.help() << "\n";
        return kExitUsage;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    args.reserve(argc > 0 ? argc - 1 : 0);
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace learndag::cli
