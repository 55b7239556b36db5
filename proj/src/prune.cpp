#include "learndag/prune.hpp"

#include <cmath>

#include "learndag/errors.hpp"
#include "learndag/parallel.hpp"
#include "learndag/stattests.hpp"

namespace learndag::prune {

PruneResult prune_wald_detail(const glm::ColumnTable& data, const Dag& dag, double level,
                              int threads) {
    if (!(level > 0.0 && level < 1.0))
        throw validation_error("prune level must lie strictly in (0,1)");
    if (dag.p() != data.p()) throw validation_error("dag does not match the data dimension");

    const int p = dag.p();
    std::vector<std::vector<EdgeDecision>> decisions(p);

    parallel_for(p, threads, [&](int j) {
        const auto& parents = dag.parents(j);
        if (parents.empty()) return;
        auto& out = decisions[j];
        out.reserve(parents.size());
        bool usable = false;
        glm::GlmFit fit;
        try {
            fit = glm::fit_poisson(data, j, parents);
            usable = fit.converged;
        } catch (const singular_fit_error&) {
            usable = false;
        }
        for (int k : parents) {
            EdgeDecision d;
            d.from = k;
            d.to = j;
            if (!usable) {
                d.untested = true;
                d.kept = true;  // conservative: keep what we cannot test
            } else {
                try {
                    d.z = glm::wald_z(fit, k);
                    d.p_value = 2.0 * (1.0 - stats::normal_cdf(std::abs(d.z)));
                    d.kept = d.p_value < level;
                } catch (const singular_fit_error&) {
                    d.untested = true;
                    d.kept = true;
                }
            }
            out.push_back(d);
        }
    });

    // Deletion cannot create cycles, so rebuilding from kept edges is safe.
    PruneResult result{Dag(p), {}};
    for (int j = 0; j < p; ++j) {
        for (const auto& d : decisions[j]) {
            if (d.kept) result.dag.add_edge(d.from, d.to);
            result.report.push_back(d);
        }
    }
    return result;
}

Dag prune_wald(const glm::ColumnTable& data, const Dag& dag, double level, int threads) {
    return prune_wald_detail(data, dag, level, threads).dag;
}

Dag prune_wald(const CountMatrix& data, const Dag& dag, double level, int threads) {
    glm::ColumnTable table(data);
    return prune_wald(table, dag, level, threads);
}

}  // namespace learndag::prune
