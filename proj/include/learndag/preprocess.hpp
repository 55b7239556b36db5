#ifndef LEARNDAG_PREPROCESS_HPP
#define LEARNDAG_PREPROCESS_HPP

#include <vector>

#include "learndag/count_matrix.hpp"

namespace learndag::preprocess {

// Dense non-negative real matrix, row-major; the pre-count staging format.
struct RealMatrix {
    int n = 0;
    int p = 0;
    std::vector<double> values;

    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * p + j]; }
    double& at(int i, int j) { return values[static_cast<std::size_t>(i) * p + j]; }
};

enum class Units { Rows, Columns };

struct PreprocessReport {
    std::vector<double> scales;        // one per kept unit, in original order
    std::vector<int> dropped_units;    // units with no positive quantile
    double reference_quantile = 0.0;
    double quantile = 0.95;
    double alpha = 1.0;
    double ks_at_alpha = 0.0;
    std::vector<int> skipped_columns;  // constant columns excluded from the KS objective
};

struct NormalizeResult {
    RealMatrix data;
    std::vector<double> scales;
    std::vector<int> dropped_units;
    double reference_quantile = 0.0;
};

// Scales every unit (row by default) so its empirical q-quantile equals the
// median of all unit quantiles. Units with a non-positive quantile are
// dropped and reported.
NormalizeResult quantile_normalize(const RealMatrix& data, double q = 0.95,
                                   Units units = Units::Rows);

struct PowerTransformResult {
    RealMatrix data;  // x^alpha entrywise, not yet floored
    double alpha = 1.0;
    double ks = 0.0;
    std::vector<int> skipped_columns;
    std::vector<double> objective;  // mean KS per grid point, 0.01 .. 1.00
};

// Grid search over alpha in {0.01, ..., 1.00} minimizing the mean per-column
// KS distance between floor(x^alpha) and Poisson(its mean); ties prefer the
// larger alpha.
PowerTransformResult power_transform_ks(const RealMatrix& data, int threads = 0);

// Entrywise floor; throws validation_error on negative input.
CountMatrix floor_counts(const RealMatrix& data);

// KS distance between integer-valued samples and Poisson(mean of samples).
double poisson_ks_statistic(const std::vector<double>& floored);

struct PipelineResult {
    CountMatrix counts;
    PreprocessReport report;
};

// normalize -> power transform -> floor.
PipelineResult preprocess_pipeline(const RealMatrix& data, double q = 0.95,
                                   Units units = Units::Rows, int threads = 0);

}  // namespace learndag::preprocess

#endif  // LEARNDAG_PREPROCESS_HPP
