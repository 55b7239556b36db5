#include "learndag/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "learndag/errors.hpp"
#include "learndag/parallel.hpp"
#include "learndag/stattests.hpp"

namespace learndag::preprocess {

namespace {

// Linear-interpolation empirical quantile (R type 7); positively homogeneous,
// which makes the post-normalization quantiles match exactly.
double quantile(std::vector<double> values, double q) {
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size();
    if (m == 1) return values[0];
    double h = q * (m - 1);
    auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= m) return values[m - 1];
    double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size();
    if (m % 2 == 1) return values[m / 2];
    return 0.5 * (values[m / 2 - 1] + values[m / 2]);
}

RealMatrix transpose(const RealMatrix& a) {
    RealMatrix t;
    t.n = a.p;
    t.p = a.n;
    t.values.resize(a.values.size());
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.p; ++j) t.at(j, i) = a.at(i, j);
    return t;
}

void check_non_negative(const RealMatrix& data) {
    for (int i = 0; i < data.n; ++i)
        for (int j = 0; j < data.p; ++j)
            if (!(data.at(i, j) >= 0.0))
                throw validation_error("negative or non-finite value at row " + std::to_string(i) +
                                       ", column " + std::to_string(j));
}

}  // namespace

NormalizeResult quantile_normalize(const RealMatrix& data, double q, Units units) {
    if (!(q > 0.0 && q < 1.0))
        throw validation_error("quantile must lie strictly in (0,1)");
    if (units == Units::Columns) {
        auto result = quantile_normalize(transpose(data), q, Units::Rows);
        result.data = transpose(result.data);
        return result;
    }
    check_non_negative(data);

    const int n = data.n;
    const int p = data.p;
    std::vector<double> unit_quantile(n);
    std::vector<int> kept;
    std::vector<int> dropped;
    for (int i = 0; i < n; ++i) {
        std::vector<double> row(p);
        for (int j = 0; j < p; ++j) row[j] = data.at(i, j);
        unit_quantile[i] = quantile(std::move(row), q);
        if (unit_quantile[i] > 0.0)
            kept.push_back(i);
        else
            dropped.push_back(i);
    }
    if (kept.empty()) throw validation_error("every unit has a non-positive quantile");

    std::vector<double> kept_quantiles;
    kept_quantiles.reserve(kept.size());
    for (int i : kept) kept_quantiles.push_back(unit_quantile[i]);
    const double reference = median(kept_quantiles);

    NormalizeResult result;
    result.reference_quantile = reference;
    result.dropped_units = std::move(dropped);
    result.data.n = static_cast<int>(kept.size());
    result.data.p = p;
    result.data.values.resize(static_cast<std::size_t>(kept.size()) * p);
    result.scales.reserve(kept.size());
    for (std::size_t r = 0; r < kept.size(); ++r) {
        int i = kept[r];
        double scale = reference / unit_quantile[i];
        result.scales.push_back(scale);
        for (int j = 0; j < p; ++j) result.data.at(static_cast<int>(r), j) = data.at(i, j) * scale;
    }
    return result;
}

double poisson_ks_statistic(const std::vector<double>& floored) {
    const std::size_t n = floored.size();
    if (n == 0) throw validation_error("empty sample in KS statistic");
    double sum = 0.0;
    long max_value = 0;
    for (double v : floored) {
        sum += v;
        max_value = std::max(max_value, static_cast<long>(v));
    }
    const double lambda = sum / static_cast<double>(n);

    std::vector<long> counts(static_cast<std::size_t>(max_value) + 1, 0);
    for (double v : floored) ++counts[static_cast<std::size_t>(v)];

    // Both CDFs are step functions jumping only at integers, so the sup over
    // t = 0..max is exact. P(X <= t) for Poisson equals Q(t + 1, lambda).
    double d = 0.0;
    double cum = 0.0;
    for (long t = 0; t <= max_value; ++t) {
        cum += static_cast<double>(counts[static_cast<std::size_t>(t)]);
        double emp = cum / static_cast<double>(n);
        double pois = stats::gamma_q(static_cast<double>(t) + 1.0, lambda);
        d = std::max(d, std::abs(emp - pois));
    }
    return d;
}

PowerTransformResult power_transform_ks(const RealMatrix& data, int threads) {
    check_non_negative(data);
    const int n = data.n;
    const int p = data.p;

    std::vector<int> skipped;
    for (int j = 0; j < p; ++j) {
        bool constant = true;
        for (int i = 1; i < n && constant; ++i)
            if (data.at(i, j) != data.at(0, j)) constant = false;
        if (constant) skipped.push_back(j);
    }
    if (static_cast<int>(skipped.size()) == p)
        throw validation_error("every column is constant; KS objective undefined");

    constexpr int kGridSize = 100;
    std::vector<double> objective(kGridSize, 0.0);
    parallel_for(kGridSize, threads, [&](int g) {
        const double alpha = (g + 1) / 100.0;
        double total = 0.0;
        int used = 0;
        std::vector<double> floored(n);
        for (int j = 0; j < p; ++j) {
            if (std::binary_search(skipped.begin(), skipped.end(), j)) continue;
            for (int i = 0; i < n; ++i)
                floored[i] = std::floor(std::pow(data.at(i, j), alpha));
            total += poisson_ks_statistic(floored);
            ++used;
        }
        objective[g] = total / used;
    });

    // Ties prefer the larger alpha: scan ascending with >=.
    int best = 0;
    for (int g = 1; g < kGridSize; ++g)
        if (objective[g] <= objective[best]) best = g;

    PowerTransformResult result;
    result.alpha = (best + 1) / 100.0;
    result.ks = objective[best];
    result.skipped_columns = std::move(skipped);
    result.objective = std::move(objective);
    result.data.n = n;
    result.data.p = p;
    result.data.values.resize(static_cast<std::size_t>(n) * p);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j)
            result.data.at(i, j) = std::pow(data.at(i, j), result.alpha);
    return result;
}

CountMatrix floor_counts(const RealMatrix& data) {
    check_non_negative(data);
    std::vector<std::int64_t> values(data.values.size());
    for (std::size_t i = 0; i < data.values.size(); ++i)
        values[i] = static_cast<std::int64_t>(std::floor(data.values[i]));
    return CountMatrix(data.n, data.p, std::move(values));
}

PipelineResult preprocess_pipeline(const RealMatrix& data, double q, Units units, int threads) {
    auto normalized = quantile_normalize(data, q, units);
    auto transformed = power_transform_ks(normalized.data, threads);

    PreprocessReport report;
    report.scales = std::move(normalized.scales);
    report.dropped_units = std::move(normalized.dropped_units);
    report.reference_quantile = normalized.reference_quantile;
    report.quantile = q;
    report.alpha = transformed.alpha;
    report.ks_at_alpha = transformed.ks;
    report.skipped_columns = transformed.skipped_columns;

    return PipelineResult{floor_counts(transformed.data), std::move(report)};
}

}  // namespace learndag::preprocess
