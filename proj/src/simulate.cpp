#include "learndag/simulate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "learndag/errors.hpp"
#include "learndag/parallel.hpp"
#include "learndag/pipeline.hpp"
#include "learndag/rng.hpp"

namespace learndag::simulate {

namespace {

constexpr double kEtaClamp = 30.0;

long sample_poisson(double lambda, Rng& rng) {
    std::poisson_distribution<long> dist(lambda);
    return dist(rng);
}

struct SampleInto {
    const TrueModel& model;
    std::vector<int> order;

    explicit SampleInto(const TrueModel& m) : model(m), order(topological_order(m.dag)) {}

    // One row of ancestral draws; returns the number of clamped predictors.
    int row(std::vector<std::int64_t>& x, Rng& rng) const {
        int clamps = 0;
        for (int j : order) {
            double eta = model.intercepts[j];
            const auto& parents = model.dag.parents(j);
            for (std::size_t idx = 0; idx < parents.size(); ++idx)
                eta += model.weights[j][idx] * static_cast<double>(x[parents[idx]]);
            if (eta > kEtaClamp) {
                eta = kEtaClamp;
                ++clamps;
            }
            x[j] = sample_poisson(std::exp(eta), rng);
        }
        return clamps;
    }
};

}  // namespace

GraphKind graph_kind_from_string(const std::string& name) {
    if (name == "scalefree" || name == "scale-free") return GraphKind::ScaleFree;
    if (name == "hub") return GraphKind::Hub;
    if (name == "erdosrenyi" || name == "erdos-renyi" || name == "random")
        return GraphKind::ErdosRenyi;
    throw validation_error("unknown graph kind '" + name + "'");
}

std::string to_string(GraphKind kind) {
    switch (kind) {
        case GraphKind::ScaleFree: return "scalefree";
        case GraphKind::Hub: return "hub";
        case GraphKind::ErdosRenyi: return "erdosrenyi";
    }
    return "unknown";
}

int default_edges(GraphKind kind, int p) {
    // Published benchmark sizes for the p = 10 / 100 grids.
    if (p == 10) {
        switch (kind) {
            case GraphKind::ScaleFree: return 9;
            case GraphKind::Hub: return 8;
            case GraphKind::ErdosRenyi: return 8;
        }
    }
    if (p == 100) {
        switch (kind) {
            case GraphKind::ScaleFree: return 99;
            case GraphKind::Hub: return 95;
            case GraphKind::ErdosRenyi: return 109;
        }
    }
    switch (kind) {
        case GraphKind::ScaleFree: return p - 1;
        case GraphKind::Hub: return p - (p + 9) / 10;
        case GraphKind::ErdosRenyi: return p - 1;
    }
    return p - 1;
}

Dag gen_graph(int p, GraphKind kind, int target_edges, std::uint64_t seed) {
    if (p < 2) throw validation_error("gen_graph needs p >= 2");
    if (target_edges <= 0) target_edges = default_edges(kind, p);
    const long max_edges = static_cast<long>(p) * (p - 1) / 2;
    if (target_edges > max_edges)
        throw validation_error("target_edges " + std::to_string(target_edges) +
                               " exceeds the acyclic maximum " + std::to_string(max_edges));
    auto rng = make_rng(seed);
    Dag dag(p);

    switch (kind) {
        case GraphKind::ScaleFree: {
            // Preferential attachment; node order doubles as attachment time,
            // edges point old -> new.
            std::vector<int> degree(p, 0);
            int placed = 0;
            for (int t = 1; t < p && placed < target_edges; ++t) {
                long total = 0;
                for (int v = 0; v < t; ++v) total += degree[v] + 1;
                std::uniform_int_distribution<long> pick(0, total - 1);
                long ticket = pick(rng);
                int chosen = 0;
                for (int v = 0; v < t; ++v) {
                    ticket -= degree[v] + 1;
                    if (ticket < 0) {
                        chosen = v;
                        break;
                    }
                }
                dag.add_edge(chosen, t);
                ++degree[chosen];
                ++degree[t];
                ++placed;
            }
            // Densify beyond the tree with degree-weighted extra pairs.
            while (placed < target_edges) {
                long total = 0;
                for (int v = 0; v < p; ++v) total += degree[v] + 1;
                std::uniform_int_distribution<long> pick(0, total - 1);
                auto draw = [&]() {
                    long ticket = pick(rng);
                    for (int v = 0; v < p; ++v) {
                        ticket -= degree[v] + 1;
                        if (ticket < 0) return v;
                    }
                    return p - 1;
                };
                int a = draw();
                int b = draw();
                if (a == b) continue;
                int from = std::min(a, b), to = std::max(a, b);
                if (dag.has_edge(from, to)) continue;
                dag.add_edge(from, to);
                ++degree[from];
                ++degree[to];
                ++placed;
            }
            break;
        }
        case GraphKind::Hub: {
            const int hubs = (p + 9) / 10;
            const int non_hubs = p - hubs;
            if (target_edges > non_hubs + hubs - 1)
                throw validation_error("hub graph on " + std::to_string(p) +
                                       " nodes supports at most " +
                                       std::to_string(non_hubs + hubs - 1) + " edges");
            // Nodes 0..hubs-1 are hubs; each owns a contiguous block of
            // non-hubs. Demand beyond the blocks chains hub -> hub.
            int block_edges = std::min(target_edges, non_hubs);
            int chain_edges = target_edges - block_edges;
            int next_leaf = hubs;
            for (int h = 0; h < hubs; ++h) {
                int size = block_edges / hubs + (h < block_edges % hubs ? 1 : 0);
                for (int s = 0; s < size; ++s) dag.add_edge(h, next_leaf++);
            }
            for (int h = 0; h < chain_edges; ++h) dag.add_edge(h, h + 1);
            break;
        }
        case GraphKind::ErdosRenyi: {
            std::vector<std::pair<int, int>> all;
            all.reserve(max_edges);
            for (int a = 0; a < p; ++a)
                for (int b = a + 1; b < p; ++b) all.emplace_back(a, b);
            std::shuffle(all.begin(), all.end(), rng);
            for (int e = 0; e < target_edges; ++e) dag.add_edge(all[e].first, all[e].second);
            break;
        }
    }
    return dag;
}

TrueModel gen_params(const Dag& dag, std::uint64_t seed) {
    const int p = dag.p();
    TrueModel model{dag, std::vector<double>(p), std::vector<std::vector<double>>(p)};
    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> intercept_dist(0.5, 1.0);
    std::uniform_real_distribution<double> weight_dist(0.2, 0.5);
    std::bernoulli_distribution sign_dist(0.5);

    // Re-draw until a pilot sample shows no clamping; positive-feedback draws
    // on deep graphs explode, mixed signs damp them.
    constexpr int kMaxAttempts = 200;
    constexpr int kPilotRows = 1000;
    long best_clamps = -1;
    TrueModel best = model;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        for (int j = 0; j < p; ++j) {
            model.intercepts[j] = intercept_dist(rng);
            model.weights[j].resize(dag.parents(j).size());
            for (auto& w : model.weights[j])
                w = (sign_dist(rng) ? 1.0 : -1.0) * weight_dist(rng);
        }
        SampleInto sampler(model);
        auto pilot_rng = make_rng(seed, 0x9107ULL);
        std::vector<std::int64_t> row(p, 0);
        long clamps = 0;
        for (int i = 0; i < kPilotRows; ++i) clamps += sampler.row(row, pilot_rng);
        if (clamps == 0) return model;
        if (best_clamps < 0 || clamps < best_clamps) {
            best_clamps = clamps;
            best = model;
        }
    }
    return best;
}

SampleResult sample(const TrueModel& model, int n, std::uint64_t seed) {
    if (n < 1) throw validation_error("sample needs n >= 1");
    const int p = model.dag.p();
    SampleInto sampler(model);
    auto rng = make_rng(seed);
    std::vector<std::int64_t> values(static_cast<std::size_t>(n) * p);
    std::vector<std::int64_t> row(p, 0);
    long clamps = 0;
    for (int i = 0; i < n; ++i) {
        clamps += sampler.row(row, rng);
        std::copy(row.begin(), row.end(), values.begin() + static_cast<std::size_t>(i) * p);
    }
    return SampleResult{CountMatrix(n, p, std::move(values)), clamps};
}

Metrics structure_metrics(const Dag& estimated, const Dag& truth) {
    if (estimated.p() != truth.p())
        throw validation_error("structure_metrics requires graphs on the same node set");
    Metrics m;
    for (auto [from, to] : estimated.edges()) {
        if (truth.has_edge(from, to))
            ++m.tp;
        else
            ++m.fp;
    }
    m.fn = truth.edge_count() - m.tp;
    m.precision = (m.tp + m.fp) > 0 ? static_cast<double>(m.tp) / (m.tp + m.fp) : 0.0;
    m.recall = (m.tp + m.fn) > 0 ? static_cast<double>(m.tp) / (m.tp + m.fn) : 0.0;
    m.f1 = (m.precision + m.recall) > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    return m;
}

SweepTable run_sweep(const std::vector<SweepCell>& cells, int replicates, std::uint64_t seed,
                     int threads) {
    if (cells.empty()) throw validation_error("run_sweep needs a non-empty grid");
    if (replicates < 1) throw validation_error("run_sweep needs at least one replicate");

    SweepTable table;
    table.rows.resize(cells.size() * replicates);

    const int total = static_cast<int>(cells.size()) * replicates;
    parallel_for(total, threads, [&](int t) {
        const int cell_index = t / replicates;
        const int rep = t % replicates;
        const SweepCell& cell = cells[cell_index];

        SweepRow row;
        row.kind = to_string(cell.kind);
        row.p = cell.p;
        row.n = cell.n;
        row.variant = cell.variant;
        row.replicate = rep;

        auto start = std::chrono::steady_clock::now();
        try {
            std::uint64_t base =
                mix_seed(seed, (static_cast<std::uint64_t>(cell_index) << 20) + rep);
            Dag truth = gen_graph(cell.p, cell.kind, cell.target_edges, mix_seed(base, 1));
            TrueModel model = gen_params(truth, mix_seed(base, 2));
            auto sampled = sample(model, cell.n, mix_seed(base, 3));

            Config config = cell.config;
            config.seed = mix_seed(base, 4);
            config.threads = 1;  // parallelism lives across replicates
            auto learned = pipeline::learn_dag(sampled.data, config);
            row.metrics = structure_metrics(learned.dag, truth);
        } catch (const std::exception& e) {
            row.failed = true;
            row.error = e.what();
        }
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        table.rows[t] = std::move(row);
    });

    return table;
}

std::vector<SweepSummary> SweepTable::summarize() const {
    std::vector<SweepSummary> out;
    // Preserve first-appearance order of (kind, p, n, variant) cells.
    auto key_of = [](const SweepRow& r) {
        return r.kind + "|" + std::to_string(r.p) + "|" + std::to_string(r.n) + "|" + r.variant;
    };
    std::vector<std::string> seen;
    for (const auto& row : rows) {
        auto key = key_of(row);
        if (std::find(seen.begin(), seen.end(), key) == seen.end()) seen.push_back(key);
    }
    for (const auto& key : seen) {
        SweepSummary s;
        std::vector<const SweepRow*> members;
        for (const auto& row : rows)
            if (key_of(row) == key) members.push_back(&row);
        const SweepRow& first = *members.front();
        s.kind = first.kind;
        s.p = first.p;
        s.n = first.n;
        s.variant = first.variant;
        s.replicates = static_cast<int>(members.size());

        auto accumulate = [&](auto getter, double& mean, double* sd) {
            std::vector<double> values;
            for (const auto* r : members)
                if (!r->failed) values.push_back(getter(*r));
            if (values.empty()) return;
            double sum = 0;
            for (double v : values) sum += v;
            mean = sum / values.size();
            if (sd) {
                double ss = 0;
                for (double v : values) ss += (v - mean) * (v - mean);
                *sd = values.size() > 1 ? std::sqrt(ss / (values.size() - 1)) : 0.0;
            }
        };
        for (const auto* r : members)
            if (r->failed) ++s.failures;
        accumulate([](const SweepRow& r) { return double(r.metrics.tp); }, s.tp_mean, &s.tp_sd);
        accumulate([](const SweepRow& r) { return double(r.metrics.fp); }, s.fp_mean, &s.fp_sd);
        accumulate([](const SweepRow& r) { return double(r.metrics.fn); }, s.fn_mean, &s.fn_sd);
        accumulate([](const SweepRow& r) { return r.metrics.precision; }, s.precision_mean,
                   &s.precision_sd);
        accumulate([](const SweepRow& r) { return r.metrics.recall; }, s.recall_mean, &s.recall_sd);
        accumulate([](const SweepRow& r) { return r.metrics.f1; }, s.f1_mean, &s.f1_sd);
        accumulate([](const SweepRow& r) { return r.seconds; }, s.seconds_mean, nullptr);
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace learndag::simulate
