#ifndef LEARNDAG_PRUNE_HPP
#define LEARNDAG_PRUNE_HPP

#include <vector>

#include "learndag/count_matrix.hpp"
#include "learndag/dag.hpp"
#include "learndag/glm.hpp"

namespace learndag::prune {

struct EdgeDecision {
    int from;
    int to;
    double z = 0.0;
    double p_value = 1.0;
    bool kept = true;
    // True when the node fit failed and the edge was kept untested.
    bool untested = false;
};

struct PruneResult {
    Dag dag;
    std::vector<EdgeDecision> report;
};

// Wald pruning: one fit per node on its full parent set; an edge k -> j
// survives iff the two-sided p-value of theta_jk is below level. A failed
// node fit keeps all edges into that node, flagged untested.
PruneResult prune_wald_detail(const glm::ColumnTable& data, const Dag& dag, double level,
                              int threads = 0);

Dag prune_wald(const glm::ColumnTable& data, const Dag& dag, double level, int threads = 0);
Dag prune_wald(const CountMatrix& data, const Dag& dag, double level, int threads = 0);

}  // namespace learndag::prune

#endif  // LEARNDAG_PRUNE_HPP
