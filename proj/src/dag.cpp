#include "learndag/dag.hpp"

#include <algorithm>
#include <queue>
#include <string>

#include "learndag/errors.hpp"

namespace learndag {

namespace {

void insert_sorted(std::vector<int>& list, int v) {
    list.insert(std::lower_bound(list.begin(), list.end(), v), v);
}

bool erase_sorted(std::vector<int>& list, int v) {
    auto it = std::lower_bound(list.begin(), list.end(), v);
    if (it == list.end() || *it != v) return false;
    list.erase(it);
    return true;
}

// Walks parent pointers from a node known to sit on a cycle.
std::vector<int> extract_cycle(int p, const std::vector<std::vector<int>>& children,
                               const std::vector<int>& indegree) {
    std::vector<int> on_cycle;
    for (int v = 0; v < p; ++v)
        if (indegree[v] > 0) on_cycle.push_back(v);
    // Follow children restricted to the unresolved subgraph until a repeat.
    std::vector<int> path;
    std::vector<int> seen_at(p, -1);
    int v = on_cycle.front();
    while (seen_at[v] < 0) {
        seen_at[v] = static_cast<int>(path.size());
        path.push_back(v);
        for (int c : children[v]) {
            if (indegree[c] > 0) {
                v = c;
                break;
            }
        }
    }
    return {path.begin() + seen_at[v], path.end()};
}

}  // namespace

Dag::Dag(int p) : p_(p), parents_(p), children_(p) {
    if (p < 1) throw validation_error("Dag needs at least one node, got p=" + std::to_string(p));
}

Dag::Dag(int p, const std::vector<std::pair<int, int>>& edges) : Dag(p) {
    topological_order(p, edges);  // throws cycle_error on a bad edge set
    for (auto [from, to] : edges) {
        check_node(from);
        check_node(to);
        if (from == to) throw validation_error("self-loop at node " + std::to_string(from));
        if (!has_edge(from, to)) {
            insert_sorted(parents_[to], from);
            insert_sorted(children_[from], to);
            ++edge_count_;
        }
    }
}

void Dag::check_node(int v) const {
    if (v < 0 || v >= p_) throw validation_error("node index " + std::to_string(v) + " out of range");
}

bool Dag::has_edge(int from, int to) const {
    check_node(from);
    check_node(to);
    const auto& pa = parents_[to];
    return std::binary_search(pa.begin(), pa.end(), from);
}

void Dag::add_edge(int from, int to) {
    check_node(from);
    check_node(to);
    if (from == to) throw validation_error("self-loop at node " + std::to_string(from));
    if (has_edge(from, to)) return;
    if (has_path(*this, to, from))
        throw cycle_error("edge " + std::to_string(from) + "->" + std::to_string(to) +
                              " would close a directed cycle",
                          {to, from});
    insert_sorted(parents_[to], from);
    insert_sorted(children_[from], to);
    ++edge_count_;
}

void Dag::remove_edge(int from, int to) {
    check_node(from);
    check_node(to);
    if (erase_sorted(parents_[to], from)) {
        erase_sorted(children_[from], to);
        --edge_count_;
    }
}

const std::vector<int>& Dag::parents(int j) const {
    check_node(j);
    return parents_[j];
}

const std::vector<int>& Dag::children(int k) const {
    check_node(k);
    return children_[k];
}

std::vector<std::pair<int, int>> Dag::edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(edge_count_);
    for (int from = 0; from < p_; ++from)
        for (int to : children_[from]) out.emplace_back(from, to);
    return out;
}

bool Dag::operator==(const Dag& other) const {
    return p_ == other.p_ && parents_ == other.parents_;
}

bool has_path(const Dag& dag, int a, int b) {
    if (a < 0 || a >= dag.p() || b < 0 || b >= dag.p())
        throw validation_error("has_path: node index out of range");
    // BFS over children; length >= 1, so a == b only counts via a real cycle
    // (impossible here) or a self-query on a node with a path back to itself.
    std::vector<char> seen(dag.p(), 0);
    std::queue<int> frontier;
    frontier.push(a);
    while (!frontier.empty()) {
        int v = frontier.front();
        frontier.pop();
        for (int c : dag.children(v)) {
            if (c == b) return true;
            if (!seen[c]) {
                seen[c] = 1;
                frontier.push(c);
            }
        }
    }
    return false;
}

std::vector<int> topological_order(int p, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<int>> children(p);
    std::vector<int> indegree(p, 0);
    for (auto [from, to] : edges) {
        if (from < 0 || from >= p || to < 0 || to >= p)
            throw validation_error("edge node index out of range");
        if (from == to) throw validation_error("self-loop at node " + std::to_string(from));
        children[from].push_back(to);
        ++indegree[to];
    }
    std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
    for (int v = 0; v < p; ++v)
        if (indegree[v] == 0) ready.push(v);
    std::vector<int> order;
    order.reserve(p);
    while (!ready.empty()) {
        int v = ready.top();
        ready.pop();
        order.push_back(v);
        for (int c : children[v])
            if (--indegree[c] == 0) ready.push(c);
    }
    if (static_cast<int>(order.size()) != p) {
        auto cycle = extract_cycle(p, children, indegree);
        std::string msg = "cycle detected:";
        for (int v : cycle) msg += " " + std::to_string(v);
        throw cycle_error(msg, cycle);
    }
    return order;
}

std::vector<int> topological_order(const Dag& dag) {
    return topological_order(dag.p(), dag.edges());
}

}  // namespace learndag
