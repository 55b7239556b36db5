#ifndef LEARNDAG_SIMULATE_HPP
#define LEARNDAG_SIMULATE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "learndag/config.hpp"
#include "learndag/count_matrix.hpp"
#include "learndag/dag.hpp"

namespace learndag::simulate {

enum class GraphKind { ScaleFree, Hub, ErdosRenyi };

GraphKind graph_kind_from_string(const std::string& name);
std::string to_string(GraphKind kind);

// Benchmark edge counts: the p = 10 / 100 cells use the published sizes,
// other p fall back to a per-kind formula.
int default_edges(GraphKind kind, int p);

// Random DAG with exactly target_edges edges (pass <= 0 for the default).
// ScaleFree: preferential attachment oriented old -> new; Hub: ceil(p/10)
// hubs pointing into disjoint blocks (overflow chained hub -> hub);
// ErdosRenyi: uniform pairs oriented low -> high index.
Dag gen_graph(int p, GraphKind kind, int target_edges, std::uint64_t seed);

// Poisson DAG with ground-truth coefficients; weights[j] aligns with
// dag.parents(j).
struct TrueModel {
    Dag dag;
    std::vector<double> intercepts;
    std::vector<std::vector<double>> weights;
};

// Intercepts U[0.5, 1.0], weights +-U[0.2, 0.5]; draws are re-sampled until a
// 1000-row pilot shows no linear-predictor clamping.
TrueModel gen_params(const Dag& dag, std::uint64_t seed);

struct SampleResult {
    CountMatrix data;
    long clamp_events = 0;
};

// Ancestral sampling in topological order, X_j ~ Poisson(exp(min(eta, 30))).
SampleResult sample(const TrueModel& model, int n, std::uint64_t seed);

struct Metrics {
    long tp = 0;
    long fp = 0;
    long fn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Directed-edge comparison; a reversed edge counts as one FP plus one FN.
Metrics structure_metrics(const Dag& estimated, const Dag& truth);

struct SweepCell {
    GraphKind kind = GraphKind::ScaleFree;
    int p = 10;
    int n = 200;
    int target_edges = 0;  // <= 0: default_edges(kind, p)
    std::string variant = "default";
    Config config;
};

struct SweepRow {
    std::string kind;
    int p = 0;
    int n = 0;
    std::string variant;
    int replicate = 0;
    bool failed = false;
    std::string error;
    Metrics metrics;
    double seconds = 0.0;
};

struct SweepSummary {
    std::string kind;
    int p = 0;
    int n = 0;
    std::string variant;
    int replicates = 0;
    int failures = 0;
    // means and standard deviations over successful replicates
    double tp_mean = 0, tp_sd = 0;
    double fp_mean = 0, fp_sd = 0;
    double fn_mean = 0, fn_sd = 0;
    double precision_mean = 0, precision_sd = 0;
    double recall_mean = 0, recall_sd = 0;
    double f1_mean = 0, f1_sd = 0;
    double seconds_mean = 0;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    std::vector<SweepSummary> summarize() const;
};

// Replicate loop over every cell: fresh graph, parameters and data per
// replicate, then learn_dag and structure_metrics. Per-replicate failures are
// recorded, never fatal. Deterministic given seed.
SweepTable run_sweep(const std::vector<SweepCell>& cells, int replicates, std::uint64_t seed,
                     int threads = 0);

}  // namespace learndag::simulate

#endif  // LEARNDAG_SIMULATE_HPP
