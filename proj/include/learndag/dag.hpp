#ifndef LEARNDAG_DAG_HPP
#define LEARNDAG_DAG_HPP

#include <utility>
#include <vector>

namespace learndag {

// Directed acyclic graph on p nodes. Parent and child adjacency lists are
// kept in lockstep; every mutation preserves acyclicity or throws.
class Dag {
public:
    explicit Dag(int p);
    Dag(int p, const std::vector<std::pair<int, int>>& edges);

    int p() const { return p_; }
    int edge_count() const { return edge_count_; }

    bool has_edge(int from, int to) const;

    // Throws cycle_error if the edge would close a directed cycle,
    // validation_error on self-loops or out-of-range nodes.
    void add_edge(int from, int to);
    void remove_edge(int from, int to);

    const std::vector<int>& parents(int j) const;
    const std::vector<int>& children(int k) const;
    const std::vector<std::vector<int>>& parent_sets() const { return parents_; }

    // Edges sorted by (from, to).
    std::vector<std::pair<int, int>> edges() const;

    bool operator==(const Dag& other) const;

private:
    void check_node(int v) const;

    int p_;
    int edge_count_ = 0;
    std::vector<std::vector<int>> parents_;
    std::vector<std::vector<int>> children_;
};

// True iff a directed path a ~> b of length >= 1 exists.
bool has_path(const Dag& dag, int a, int b);

// Deterministic topological order; ties broken by ascending node index.
std::vector<int> topological_order(const Dag& dag);

// Same ordering computed from a raw edge set; throws cycle_error naming one
// cycle when none exists. Used by the Dag constructor.
std::vector<int> topological_order(int p, const std::vector<std::pair<int, int>>& edges);

}  // namespace learndag

#endif  // LEARNDAG_DAG_HPP
