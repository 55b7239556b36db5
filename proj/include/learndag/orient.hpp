#ifndef LEARNDAG_ORIENT_HPP
#define LEARNDAG_ORIENT_HPP

#include <optional>
#include <vector>

#include "learndag/config.hpp"
#include "learndag/count_matrix.hpp"
#include "learndag/dag.hpp"
#include "learndag/glm.hpp"
#include "learndag/neighbor_sets.hpp"

namespace learndag::orient {

// p x p gain matrix driving the greedy loop; entry (k, j) is the score gain of
// adding k -> j against the current pa(j). Blocked entries stand for -Inf and
// never re-enter consideration.
class ScoreMatrix {
public:
    explicit ScoreMatrix(int p);

    int p() const { return p_; }

    double gain(int k, int j) const { return gains_[idx(k, j)]; }
    bool blocked(int k, int j) const { return blocked_[idx(k, j)] != 0; }

    void set(int k, int j, double gain);
    void block(int k, int j);
    void block_column(int j);

    int unblocked_count() const { return unblocked_; }

    struct Entry {
        int from;
        int to;
        double gain;
    };

    // Maximum unblocked entry; ties broken by smallest (to, from).
    std::optional<Entry> best() const;

private:
    std::size_t idx(int k, int j) const { return static_cast<std::size_t>(k) * p_ + j; }

    int p_;
    int unblocked_ = 0;
    std::vector<double> gains_;
    std::vector<std::uint8_t> blocked_;
};

// Log-likelihood gain of adding k -> j on top of pa_j; Bic subtracts
// (1/2) log n for the extra coefficient. nullopt when either fit fails.
std::optional<double> score_gain(const glm::ColumnTable& data, int j, int k,
                                 std::span<const int> pa_j, ScoreKind kind);
std::optional<double> score_gain(const CountMatrix& data, int j, int k,
                                 std::span<const int> pa_j, ScoreKind kind);

struct Admission {
    int from;
    int to;
    double gain;
};

struct OrientOptions {
    ScoreKind score_kind = ScoreKind::LogLik;
    int max_parents = 0;  // <= 0 means unbounded
    double min_gain = 0.0;
    // When set, an entry is admitted only if the chi-squared(1) deviance test
    // of 2 * gain rejects at this level; failures block the entry.
    std::optional<double> deviance_level;
    int threads = 0;
};

struct OrientResult {
    Dag dag;
    std::vector<Admission> trace;
};

// Greedy score-matrix orientation: start from the empty DAG, repeatedly admit
// the best unblocked entry, block reverse and cycle-closing entries, refresh
// the admitted column, stop when everything is blocked.
OrientResult orient_edges(const glm::ColumnTable& data, const NeighborSets& neighbors,
                          const OrientOptions& options);
OrientResult orient_edges(const CountMatrix& data, const NeighborSets& neighbors,
                          const OrientOptions& options);

// Parent sets of the oriented DAG (the potential parent sets fed to pruning).
std::vector<std::vector<int>> potential_parents(const Dag& dag);

}  // namespace learndag::orient

#endif  // LEARNDAG_ORIENT_HPP
