#include "learndag/count_matrix.hpp"

#include <string>

#include "learndag/errors.hpp"

namespace learndag {

CountMatrix::CountMatrix(int n, int p, std::vector<std::int64_t> values)
    : n_(n), p_(p), values_(std::move(values)) {
    if (n_ < 1) throw validation_error("CountMatrix needs at least one sample, got n=" + std::to_string(n_));
    if (p_ < 2) throw validation_error("CountMatrix needs at least two variables, got p=" + std::to_string(p_));
    if (values_.size() != static_cast<std::size_t>(n_) * p_)
        throw validation_error("CountMatrix value buffer has " + std::to_string(values_.size()) +
                               " entries, expected " + std::to_string(static_cast<std::size_t>(n_) * p_));
    for (std::size_t idx = 0; idx < values_.size(); ++idx) {
        if (values_[idx] < 0) {
            auto i = static_cast<int>(idx) / p_;
            auto j = static_cast<int>(idx) % p_;
            throw validation_error("negative count " + std::to_string(values_[idx]) + " at row " +
                                   std::to_string(i) + ", column " + std::to_string(j));
        }
    }
}

std::vector<std::int64_t> CountMatrix::column(int j) const {
    if (j < 0 || j >= p_) throw validation_error("column index " + std::to_string(j) + " out of range");
    std::vector<std::int64_t> col(n_);
    for (int i = 0; i < n_; ++i) col[i] = (*this)(i, j);
    return col;
}

CountMatrix CountMatrix::select_rows(const std::vector<int>& rows) const {
    std::vector<std::int64_t> values;
    values.reserve(rows.size() * p_);
    for (int i : rows) {
        if (i < 0 || i >= n_) throw validation_error("row index " + std::to_string(i) + " out of range");
        auto begin = values_.begin() + static_cast<std::size_t>(i) * p_;
        values.insert(values.end(), begin, begin + p_);
    }
    return CountMatrix(static_cast<int>(rows.size()), p_, std::move(values));
}

}  // namespace learndag
