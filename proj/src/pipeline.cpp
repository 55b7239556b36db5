#include "learndag/pipeline.hpp"

#include <chrono>

#include "learndag/errors.hpp"
#include "learndag/pns.hpp"
#include "learndag/stattests.hpp"

namespace learndag::pipeline {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Step 0: skeleton of pairs whose marginal independence is rejected.
NeighborSets marginal_skeleton(const glm::ColumnTable& table, double level, SymmetrizeRule rule) {
    const int p = table.p();
    NeighborSets sets(p);
    for (int j = 0; j < p; ++j) {
        for (int k = j + 1; k < p; ++k) {
            auto jk = stats::marginal_test(table, j, k, level);
            auto kj = stats::marginal_test(table, k, j, level);
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

}  // namespace

LearnResult learn_dag(const CountMatrix& data, const Config& config) {
    auto resolved = resolve_config(config, data.n(), data.p());
    const auto t_total = Clock::now();

    glm::ColumnTable table(data);

    StepTimings timings;
    NeighborSets neighbors = NeighborSets::complete(data.p());

    if (resolved.use_pns) {
        auto t = Clock::now();
        neighbors = pns::pns_bootstrap(data, resolved.alpha_pns, resolved.bootstrap_b,
                                       resolved.bootstrap_threshold, resolved.seed,
                                       resolved.pns_rule, resolved.threads);
        timings.pns_seconds = seconds_since(t);
    }

    if (resolved.use_margin_step) {
        auto t = Clock::now();
        auto skeleton0 = marginal_skeleton(table, resolved.alpha_margin, resolved.pns_rule);
        neighbors.intersect(skeleton0);
        timings.margin_seconds = seconds_since(t);
    }

    orient::OrientOptions orient_options;
    orient_options.score_kind = resolved.score_kind;
    orient_options.max_parents = resolved.max_parents;
    orient_options.min_gain = resolved.min_gain;
    orient_options.threads = resolved.threads;
    if (resolved.prune_mode == PruneMode::DevianceInStep2)
        orient_options.deviance_level = resolved.alpha_prune;

    auto t_orient = Clock::now();
    auto oriented = orient::orient_edges(table, neighbors, orient_options);
    timings.orient_seconds = seconds_since(t_orient);

    LearnResult result{Dag(data.p()),      std::move(neighbors), std::move(oriented.dag),
                       std::move(oriented.trace), {},            timings,
                       resolved};

    if (resolved.prune_mode == PruneMode::WaldStep3) {
        auto t = Clock::now();
        auto pruned =
            prune::prune_wald_detail(table, result.oriented, resolved.alpha_prune, resolved.threads);
        result.dag = std::move(pruned.dag);
        result.prune_report = std::move(pruned.report);
        result.timings.prune_seconds = seconds_since(t);
    } else {
        result.dag = result.oriented;
    }

    result.timings.total_seconds = seconds_since(t_total);
    return result;
}

}  // namespace learndag::pipeline
