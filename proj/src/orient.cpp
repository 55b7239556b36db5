#include "learndag/orient.hpp"

#include <algorithm>
#include <cmath>

#include "learndag/errors.hpp"
#include "learndag/parallel.hpp"
#include "learndag/stattests.hpp"

namespace learndag::orient {

namespace {

std::optional<double> gain_between(const glm::GlmFit& with, const glm::GlmFit& without,
                                   ScoreKind kind, int n) {
    double gain = with.loglik - without.loglik;
    if (!std::isfinite(gain)) return std::nullopt;
    if (kind == ScoreKind::Bic) gain -= 0.5 * std::log(static_cast<double>(n));
    return gain;
}

// Descendant bitsets for the current graph; closure[v] holds every node
// reachable from v by a directed path of length >= 1.
std::vector<std::vector<std::uint64_t>> descendant_closure(const Dag& dag) {
    const int p = dag.p();
    const int words = (p + 63) / 64;
    std::vector<std::vector<std::uint64_t>> closure(p, std::vector<std::uint64_t>(words, 0));
    auto order = topological_order(dag);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int v = *it;
        for (int c : dag.children(v)) {
            closure[v][c / 64] |= 1ULL << (c % 64);
            for (int w = 0; w < words; ++w) closure[v][w] |= closure[c][w];
        }
    }
    return closure;
}

}  // namespace

ScoreMatrix::ScoreMatrix(int p)
    : p_(p),
      gains_(static_cast<std::size_t>(p) * p, 0.0),
      blocked_(static_cast<std::size_t>(p) * p, 1) {
    if (p < 1) throw validation_error("ScoreMatrix needs at least one node");
}

void ScoreMatrix::set(int k, int j, double g) {
    auto i = idx(k, j);
    if (blocked_[i]) {
        blocked_[i] = 0;
        ++unblocked_;
    }
    gains_[i] = g;
}

void ScoreMatrix::block(int k, int j) {
    auto i = idx(k, j);
    if (!blocked_[i]) {
        blocked_[i] = 1;
        --unblocked_;
    }
}

void ScoreMatrix::block_column(int j) {
    for (int k = 0; k < p_; ++k) block(k, j);
}

std::optional<ScoreMatrix::Entry> ScoreMatrix::best() const {
    std::optional<Entry> top;
    // Column-major scan makes the tie-break smallest (to, from).
    for (int j = 0; j < p_; ++j) {
        for (int k = 0; k < p_; ++k) {
            if (blocked_[idx(k, j)]) continue;
            double g = gains_[idx(k, j)];
            if (!top || g > top->gain) top = Entry{k, j, g};
        }
    }
    return top;
}

std::optional<double> score_gain(const glm::ColumnTable& data, int j, int k,
                                 std::span<const int> pa_j, ScoreKind kind) {
    if (j == k) throw validation_error("score_gain requires k != j");
    for (int c : pa_j)
        if (c == k) throw validation_error("score_gain candidate already in the parent set");
    std::vector<int> with(pa_j.begin(), pa_j.end());
    with.push_back(k);
    std::sort(with.begin(), with.end());
    try {
        auto fit_without = glm::fit_poisson(data, j, pa_j);
        auto fit_with = glm::fit_poisson(data, j, with);
        return gain_between(fit_with, fit_without, kind, data.n());
    } catch (const singular_fit_error&) {
        return std::nullopt;
    }
}

std::optional<double> score_gain(const CountMatrix& data, int j, int k, std::span<const int> pa_j,
                                 ScoreKind kind) {
    glm::ColumnTable table(data);
    return score_gain(table, j, k, pa_j, kind);
}

OrientResult orient_edges(const glm::ColumnTable& data, const NeighborSets& neighbors,
                          const OrientOptions& options) {
    const int p = data.p();
    if (neighbors.p() != p)
        throw validation_error("neighbour sets do not match the data dimension");
    const int max_parents = options.max_parents > 0 ? options.max_parents : p - 1;
    const ScoreKind kind = options.score_kind;

    Dag dag(p);
    std::vector<Admission> trace;
    ScoreMatrix scores(p);

    // Per-node state: the fit on the current pa(j) and the candidate fits on
    // pa(j) u {k}; an admitted candidate becomes the next base fit, which
    // makes the telescoping of gains exact.
    std::vector<glm::GlmFit> base(p);
    std::vector<std::vector<glm::GlmFit>> candidates(p, std::vector<glm::GlmFit>(p));
    std::vector<std::uint8_t> base_ok(p, 0);

    parallel_for(p, options.threads, [&](int j) {
        try {
            base[j] = glm::fit_poisson(data, j, {});
            base_ok[j] = 1;
        } catch (const singular_fit_error&) {
            base_ok[j] = 0;
        }
    });

    // Candidate refresh for one column against the current base fit.
    auto refresh_candidate = [&](int j, int k) -> std::optional<double> {
        std::vector<int> with(dag.parents(j));
        with.insert(std::lower_bound(with.begin(), with.end(), k), k);
        try {
            candidates[j][k] = glm::fit_poisson(data, j, with, {}, &base[j].coef);
            return gain_between(candidates[j][k], base[j], kind, data.n());
        } catch (const singular_fit_error&) {
            return std::nullopt;
        }
    };

    struct Task {
        int j;
        int k;
    };
    auto refresh_column = [&](const std::vector<Task>& tasks) {
        std::vector<std::optional<double>> results(tasks.size());
        parallel_for(static_cast<int>(tasks.size()), options.threads,
                     [&](int t) { results[t] = refresh_candidate(tasks[t].j, tasks[t].k); });
        for (std::size_t t = 0; t < tasks.size(); ++t) {
            if (results[t])
                scores.set(tasks[t].k, tasks[t].j, *results[t]);
            else
                scores.block(tasks[t].k, tasks[t].j);
        }
    };

    {
        std::vector<Task> init_tasks;
        for (int j = 0; j < p; ++j) {
            if (!base_ok[j] || max_parents < 1) continue;
            for (int k : neighbors.at(j)) init_tasks.push_back({j, k});
        }
        refresh_column(init_tasks);
    }

    while (scores.unblocked_count() > 0) {
        auto entry = scores.best();
        if (!entry) break;
        const int i = entry->from;
        const int j = entry->to;
        const double gain = entry->gain;

        if (gain < options.min_gain) break;  // every remaining entry is smaller

        if (options.deviance_level) {
            auto test = stats::deviance_test(std::max(gain, 0.0), *options.deviance_level);
            if (!test.reject) {
                scores.block(i, j);
                continue;
            }
        }

        dag.add_edge(i, j);
        trace.push_back({i, j, gain});
        base[j] = candidates[j][i];
        scores.block(i, j);  // edge now present

        // Block everything that would now close a cycle (covers the reverse
        // entry), then refresh column j against the enlarged parent set.
        auto closure = descendant_closure(dag);
        for (int a = 0; a < p; ++a)
            for (int b = 0; b < p; ++b)
                if (a != b && (closure[b][a / 64] >> (a % 64)) & 1ULL) scores.block(a, b);

        if (static_cast<int>(dag.parents(j).size()) >= max_parents) {
            scores.block_column(j);
            continue;
        }
        std::vector<Task> tasks;
        for (int k : neighbors.at(j))
            if (!scores.blocked(k, j) && !dag.has_edge(k, j)) tasks.push_back({j, k});
        refresh_column(tasks);
    }

    return OrientResult{std::move(dag), std::move(trace)};
}

OrientResult orient_edges(const CountMatrix& data, const NeighborSets& neighbors,
                          const OrientOptions& options) {
    glm::ColumnTable table(data);
    return orient_edges(table, neighbors, options);
}

std::vector<std::vector<int>> potential_parents(const Dag& dag) {
    return dag.parent_sets();
}

}  // namespace learndag::orient
