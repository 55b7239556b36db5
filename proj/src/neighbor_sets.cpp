#include "learndag/neighbor_sets.hpp"

#include <algorithm>
#include <string>

#include "learndag/errors.hpp"

namespace learndag {

NeighborSets::NeighborSets(int p) : sets_(p) {
    if (p < 1) throw validation_error("NeighborSets needs at least one node");
}

NeighborSets NeighborSets::complete(int p) {
    NeighborSets out(p);
    for (int j = 0; j < p; ++j) {
        out.sets_[j].reserve(p - 1);
        for (int k = 0; k < p; ++k)
            if (k != j) out.sets_[j].push_back(k);
    }
    return out;
}

NeighborSets NeighborSets::from_pairs(int p, const std::vector<std::pair<int, int>>& pairs) {
    NeighborSets out(p);
    for (auto [a, b] : pairs) {
        out.insert(a, b);
        out.insert(b, a);
    }
    return out;
}

bool NeighborSets::contains(int j, int k) const {
    const auto& s = sets_[j];
    return std::binary_search(s.begin(), s.end(), k);
}

void NeighborSets::insert(int j, int k) {
    if (j == k) throw validation_error("neighbour set cannot contain its own node " + std::to_string(j));
    if (j < 0 || j >= p() || k < 0 || k >= p())
        throw validation_error("neighbour index out of range");
    auto& s = sets_[j];
    auto it = std::lower_bound(s.begin(), s.end(), k);
    if (it == s.end() || *it != k) s.insert(it, k);
}

bool NeighborSets::symmetric() const {
    for (int j = 0; j < p(); ++j)
        for (int k : sets_[j])
            if (!contains(k, j)) return false;
    return true;
}

void NeighborSets::intersect(const NeighborSets& other) {
    if (other.p() != p()) throw validation_error("NeighborSets size mismatch in intersect");
    for (int j = 0; j < p(); ++j) {
        std::vector<int> merged;
        std::set_intersection(sets_[j].begin(), sets_[j].end(), other.sets_[j].begin(),
                              other.sets_[j].end(), std::back_inserter(merged));
        sets_[j] = std::move(merged);
    }
}

std::vector<std::pair<int, int>> NeighborSets::pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int j = 0; j < p(); ++j)
        for (int k : sets_[j])
            if (j < k) out.emplace_back(j, k);
    // Add pairs only present in the reverse direction (asymmetric input).
    for (int j = 0; j < p(); ++j)
        for (int k : sets_[j])
            if (k < j && !contains(k, j)) out.emplace_back(k, j);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::size_t NeighborSets::total_size() const {
    std::size_t total = 0;
    for (const auto& s : sets_) total += s.size();
    return total;
}

}  // namespace learndag
