#ifndef LEARNDAG_PIPELINE_HPP
#define LEARNDAG_PIPELINE_HPP

#include <vector>

#include "learndag/config.hpp"
#include "learndag/count_matrix.hpp"
#include "learndag/dag.hpp"
#include "learndag/neighbor_sets.hpp"
#include "learndag/orient.hpp"
#include "learndag/prune.hpp"

namespace learndag::pipeline {

struct StepTimings {
    double margin_seconds = 0.0;
    double pns_seconds = 0.0;
    double orient_seconds = 0.0;
    double prune_seconds = 0.0;
    double total_seconds = 0.0;
};

struct LearnResult {
    Dag dag;
    NeighborSets pns_sets;
    Dag oriented;
    std::vector<orient::Admission> trace;
    std::vector<prune::EdgeDecision> prune_report;
    StepTimings timings;
    ResolvedConfig resolved;
};

// Full three-step run (plus the optional marginal step 0), variants toggled
// by config. Deterministic given config.seed.
LearnResult learn_dag(const CountMatrix& data, const Config& config);

}  // namespace learndag::pipeline

#endif  // LEARNDAG_PIPELINE_HPP
