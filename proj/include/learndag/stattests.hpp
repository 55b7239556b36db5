#ifndef LEARNDAG_STATTESTS_HPP
#define LEARNDAG_STATTESTS_HPP

#include <span>

#include "learndag/count_matrix.hpp"
#include "learndag/glm.hpp"

namespace learndag::stats {

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    bool reject = false;
    bool untestable = false;
};

double normal_cdf(double z);

// Regularized upper incomplete gamma Q(s, x); series/continued-fraction split.
double gamma_q(double s, double x);

// Survival function of the chi-squared distribution.
double chisq_sf(double x, int df);

// Sample-size-driven significance level 2(1 - Phi(n^exponent)).
double alpha_schedule(std::int64_t n, double exponent);

// Wald test of X_j independent of X_k given X_cond: fits X_j ~ {k} u cond and
// refers theta_hat_jk / se to the standard normal. A singular or non-converged
// fit yields an untestable result (p = 1, reject = false).
TestResult ci_test(const glm::ColumnTable& data, int j, int k, std::span<const int> cond,
                   double level);
TestResult ci_test(const CountMatrix& data, int j, int k, std::span<const int> cond,
                   double level);

TestResult marginal_test(const glm::ColumnTable& data, int j, int k, double level);
TestResult marginal_test(const CountMatrix& data, int j, int k, double level);

// Chi-squared(1) test of a log-likelihood gain: statistic = 2 * gain.
// Small negative gains (numerical noise) are clamped to zero.
TestResult deviance_test(double gain, double level);

}  // namespace learndag::stats

#endif  // LEARNDAG_STATTESTS_HPP
