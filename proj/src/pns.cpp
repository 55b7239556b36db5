#include "learndag/pns.hpp"

#include <cmath>
#include <string>

#include "learndag/errors.hpp"
#include "learndag/parallel.hpp"
#include "learndag/rng.hpp"
#include "learndag/stattests.hpp"

namespace learndag::pns {

namespace {

// Rejection half-matrix: reject[j*p+k] says the regression of j found k
// significant. One fit of X_j on V\{j} covers every k at once, because the
// pairwise conditioning set is exactly the remaining nodes.
std::vector<std::uint8_t> per_node_rejections(const glm::ColumnTable& data, double level,
                                              int threads,
                                              const std::vector<std::vector<double>>* warm) {
    const int p = data.p();
    std::vector<std::uint8_t> reject(static_cast<std::size_t>(p) * p, 0);
    parallel_for(p, threads, [&](int j) {
        std::vector<int> covariates;
        covariates.reserve(p - 1);
        for (int k = 0; k < p; ++k)
            if (k != j) covariates.push_back(k);
        try {
            const std::vector<double>* start =
                warm && !(*warm)[j].empty() ? &(*warm)[j] : nullptr;
            auto fit = glm::fit_poisson(data, j, covariates, {}, start);
            if (!fit.converged) return;  // all pairs untestable from j's side
            for (std::size_t c = 0; c < covariates.size(); ++c) {
                double se = fit.std_errors[c + 1];
                if (!std::isfinite(se) || se <= 0.0) continue;
                double z = std::abs(fit.coef[c + 1] / se);
                double p_value = 2.0 * (1.0 - stats::normal_cdf(z));
                if (p_value < level) reject[static_cast<std::size_t>(j) * p + covariates[c]] = 1;
            }
        } catch (const singular_fit_error&) {
            // leave row untestable
        }
    });
    return reject;
}

NeighborSets estimate_undirected_impl(const glm::ColumnTable& data, double level,
                                      SymmetrizeRule rule, int threads,
                                      const std::vector<std::vector<double>>* warm) {
    const int p = data.p();
    NeighborSets sets(p);

    if (p - 2 >= data.n()) {
        // Saturated regime: the shared full fit is unidentifiable; fall back to
        // per-pair tests with the reduced conditioning sets.
        for (int j = 0; j < p; ++j) {
            for (int k = j + 1; k < p; ++k) {
                std::vector<int> cond;
                cond.reserve(p - 2);
                for (int c = 0; c < p; ++c)
                    if (c != j && c != k) cond.push_back(c);
                auto jk = stats::ci_test(data, j, k, cond, level);
                auto kj = stats::ci_test(data, k, j, cond, level);
                bool keep = rule == SymmetrizeRule::Or ? (jk.reject || kj.reject)
                                                       : (jk.reject && kj.reject);
                if (keep) {
                    sets.insert(j, k);
                    sets.insert(k, j);
                }
            }
        }
        return sets;
    }

    auto reject = per_node_rejections(data, level, threads, warm);
    for (int j = 0; j < p; ++j) {
        for (int k = j + 1; k < p; ++k) {
            bool jk = reject[static_cast<std::size_t>(j) * p + k] != 0;
            bool kj = reject[static_cast<std::size_t>(k) * p + j] != 0;
            bool keep = rule == SymmetrizeRule::Or ? (jk || kj) : (jk && kj);
            if (keep) {
                sets.insert(j, k);
                sets.insert(k, j);
            }
        }
    }
    return sets;
}

}  // namespace

NeighborSets estimate_undirected(const glm::ColumnTable& data, double level, SymmetrizeRule rule,
                                 int threads) {
    return estimate_undirected_impl(data, level, rule, threads, nullptr);
}

NeighborSets estimate_undirected(const CountMatrix& data, double level, SymmetrizeRule rule,
                                 int threads) {
    glm::ColumnTable table(data);
    return estimate_undirected(table, level, rule, threads);
}

BootstrapResult pns_bootstrap_detail(const CountMatrix& data, double level, int b,
                                     double threshold, std::uint64_t seed, SymmetrizeRule rule,
                                     int threads) {
    if (b < 1) throw validation_error("bootstrap replicate count must be at least 1");
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw validation_error("bootstrap threshold must lie in (0,1]");

    const int p = data.p();
    const int n = data.n();
    EdgeFrequency freq(p);
    freq.b = b;

    // Full fits on the original data seed every replicate's Newton iterations.
    std::vector<std::vector<double>> warm(p);
    if (p - 2 < n) {
        glm::ColumnTable table(data);
        parallel_for(p, threads, [&](int j) {
            std::vector<int> covariates;
            covariates.reserve(p - 1);
            for (int k = 0; k < p; ++k)
                if (k != j) covariates.push_back(k);
            try {
                warm[j] = glm::fit_poisson(table, j, covariates).coef;
            } catch (const singular_fit_error&) {
            }
        });
    }

    std::vector<NeighborSets> replicate_sets(b, NeighborSets(p));
    parallel_for(b, threads, [&](int rep) {
        auto rng = make_rng(seed, static_cast<std::uint64_t>(rep));
        std::uniform_int_distribution<int> pick(0, n - 1);
        std::vector<int> rows(n);
        for (int i = 0; i < n; ++i) rows[i] = pick(rng);
        CountMatrix resampled = data.select_rows(rows);
        glm::ColumnTable table(resampled);
        // Replicate fits run single-threaded; parallelism lives across replicates.
        replicate_sets[rep] = estimate_undirected_impl(table, level, rule, 1, &warm);
    });

    for (const auto& sets : replicate_sets)
        for (auto [j, k] : sets.pairs()) freq.add(j, k);

    // "minimum of 20%" reads as >=; the epsilon guards ceil against FP noise
    // (0.2 * 50 must mean 10, not 11).
    int cutoff = static_cast<int>(std::ceil(threshold * b - 1e-9));
    cutoff = std::max(cutoff, 1);

    NeighborSets sets(p);
    for (int j = 0; j < p; ++j)
        for (int k = j + 1; k < p; ++k)
            if (freq.at(j, k) >= cutoff) {
                sets.insert(j, k);
                sets.insert(k, j);
            }
    return BootstrapResult{std::move(sets), std::move(freq)};
}

NeighborSets pns_bootstrap(const CountMatrix& data, double level, int b, double threshold,
                           std::uint64_t seed, SymmetrizeRule rule, int threads) {
    return pns_bootstrap_detail(data, level, b, threshold, seed, rule, threads).sets;
}

}  // namespace learndag::pns
