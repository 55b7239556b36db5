#ifndef LEARNDAG_PNS_HPP
#define LEARNDAG_PNS_HPP

#include <cstdint>
#include <vector>

#include "learndag/config.hpp"
#include "learndag/count_matrix.hpp"
#include "learndag/glm.hpp"
#include "learndag/neighbor_sets.hpp"

namespace learndag::pns {

// Symmetric bootstrap selection counts; counts[j][k] in [0, b].
struct EdgeFrequency {
    explicit EdgeFrequency(int p) : p(p), counts(static_cast<std::size_t>(p) * p, 0) {}
    int p;
    int b = 0;
    std::vector<int> counts;

    int at(int j, int k) const { return counts[static_cast<std::size_t>(j) * p + k]; }
    void add(int j, int k) {
        ++counts[static_cast<std::size_t>(j) * p + k];
        ++counts[static_cast<std::size_t>(k) * p + j];
    }
};

// One pass of the PC-LPGM-variant skeleton estimate: for every pair {j, k},
// Wald-tests X_j indep X_k given all remaining nodes; edges kept per `rule`.
// Untestable pairs are left absent.
NeighborSets estimate_undirected(const glm::ColumnTable& data, double level,
                                 SymmetrizeRule rule = SymmetrizeRule::Or, int threads = 0);
NeighborSets estimate_undirected(const CountMatrix& data, double level,
                                 SymmetrizeRule rule = SymmetrizeRule::Or, int threads = 0);

struct BootstrapResult {
    NeighborSets sets;
    EdgeFrequency frequency;
};

// Bootstrap-stabilized PNS: b row resamples of size n, one skeleton estimate
// each, edge kept iff selected in at least ceil(threshold * b) replicates.
BootstrapResult pns_bootstrap_detail(const CountMatrix& data, double level, int b,
                                     double threshold, std::uint64_t seed,
                                     SymmetrizeRule rule = SymmetrizeRule::Or, int threads = 0);

NeighborSets pns_bootstrap(const CountMatrix& data, double level, int b, double threshold,
                           std::uint64_t seed, SymmetrizeRule rule = SymmetrizeRule::Or,
                           int threads = 0);

}  // namespace learndag::pns

#endif  // LEARNDAG_PNS_HPP
