#ifndef LEARNDAG_COUNT_MATRIX_HPP
#define LEARNDAG_COUNT_MATRIX_HPP

#include <cstdint>
#include <vector>

namespace learndag {

// n x p matrix of non-negative integer counts, row-major.
// Rows are samples, columns are variables. Immutable after construction.
class CountMatrix {
public:
    CountMatrix(int n, int p, std::vector<std::int64_t> values);

    int n() const { return n_; }
    int p() const { return p_; }

    std::int64_t operator()(int i, int j) const { return values_[static_cast<std::size_t>(i) * p_ + j]; }

    const std::vector<std::int64_t>& values() const { return values_; }

    std::vector<std::int64_t> column(int j) const;

    // Row-resample (with replacement indices supplied by the caller).
    CountMatrix select_rows(const std::vector<int>& rows) const;

private:
    int n_;
    int p_;
    std::vector<std::int64_t> values_;
};

}  // namespace learndag

#endif  // LEARNDAG_COUNT_MATRIX_HPP
