#ifndef LEARNDAG_NEIGHBOR_SETS_HPP
#define LEARNDAG_NEIGHBOR_SETS_HPP

#include <utility>
#include <vector>

namespace learndag {

// Candidate parent sets N(j), one sorted index list per node, j never in N(j).
class NeighborSets {
public:
    explicit NeighborSets(int p);

    static NeighborSets complete(int p);

    // Builds symmetric sets from unordered pairs.
    static NeighborSets from_pairs(int p, const std::vector<std::pair<int, int>>& pairs);

    int p() const { return static_cast<int>(sets_.size()); }

    const std::vector<int>& at(int j) const { return sets_[j]; }
    const std::vector<std::vector<int>>& sets() const { return sets_; }

    bool contains(int j, int k) const;
    void insert(int j, int k);

    bool symmetric() const;

    // Keeps only neighbours present in both (set-wise intersection per node).
    void intersect(const NeighborSets& other);

    // Unordered pairs {j, k} with j < k present in either direction.
    std::vector<std::pair<int, int>> pairs() const;

    std::size_t total_size() const;

    bool operator==(const NeighborSets& other) const { return sets_ == other.sets_; }

private:
    std::vector<std::vector<int>> sets_;
};

}  // namespace learndag

#endif  // LEARNDAG_NEIGHBOR_SETS_HPP
