#include "learndag/stattests.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "learndag/errors.hpp"

namespace learndag::stats {

namespace {

constexpr double kGainNoiseTolerance = 1e-6;

// Lower regularized incomplete gamma P(s, x) by power series; x < s + 1.
double gamma_p_series(double s, double x) {
    double term = 1.0 / s;
    double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= x / (s + k);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// Upper regularized incomplete gamma Q(s, x) by modified Lentz continued
// fraction; x >= s + 1.
double gamma_q_cf(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int k = 1; k < 500; ++k) {
        double an = -k * (k - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// Pearson correlation on raw counts; ranking proxy for marginal association.
double marginal_association(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa <= 0.0 || sbb <= 0.0) return 0.0;
    return std::abs(sab / std::sqrt(saa * sbb));
}

}  // namespace

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z * M_SQRT1_2);
}

double gamma_q(double s, double x) {
    if (s <= 0.0) throw validation_error("gamma_q requires s > 0");
    if (x < 0.0) throw validation_error("gamma_q requires x >= 0");
    if (x == 0.0) return 1.0;
    if (x < s + 1.0) return 1.0 - gamma_p_series(s, x);
    return gamma_q_cf(s, x);
}

double chisq_sf(double x, int df) {
    if (df < 1) throw validation_error("chisq_sf requires df >= 1");
    if (x < 0.0) throw validation_error("chisq_sf requires x >= 0");
    return gamma_q(0.5 * df, 0.5 * x);
}

double alpha_schedule(std::int64_t n, double exponent) {
    if (n < 2) throw validation_error("alpha_schedule requires n >= 2");
    if (!(exponent > 0.0)) throw validation_error("alpha_schedule requires a positive exponent");
    double z = std::pow(static_cast<double>(n), exponent);
    double level = 2.0 * (1.0 - normal_cdf(z));
    // erfc underflows around z ~ 38; keep the level strictly positive.
    return std::max(level, std::numeric_limits<double>::min());
}

TestResult ci_test(const glm::ColumnTable& data, int j, int k, std::span<const int> cond,
                   double level) {
    const int p = data.p();
    if (j < 0 || j >= p || k < 0 || k >= p)
        throw validation_error("ci_test node index out of range");
    if (j == k) throw validation_error("ci_test requires j != k");
    std::vector<int> conditioning(cond.begin(), cond.end());
    std::sort(conditioning.begin(), conditioning.end());
    if (std::adjacent_find(conditioning.begin(), conditioning.end()) != conditioning.end())
        throw validation_error("ci_test conditioning set contains duplicates");
    for (int c : conditioning) {
        if (c < 0 || c >= p) throw validation_error("ci_test conditioning index out of range");
        if (c == j || c == k)
            throw validation_error("ci_test conditioning set must exclude j and k");
    }

    // Saturated regime: with p - 2 >= n the full-remainder conditioning set is
    // not identifiable; keep only the floor(n/5) nodes most associated with j.
    if (p - 2 >= data.n()) {
        int keep = std::min(static_cast<int>(conditioning.size()), data.n() / 5);
        std::vector<std::pair<double, int>> ranked;
        ranked.reserve(conditioning.size());
        for (int c : conditioning)
            ranked.emplace_back(-marginal_association(data.column(c), data.column(j)), c);
        std::sort(ranked.begin(), ranked.end());
        conditioning.clear();
        for (int i = 0; i < keep; ++i) conditioning.push_back(ranked[i].second);
        std::sort(conditioning.begin(), conditioning.end());
    }

    std::vector<int> covariates;
    covariates.reserve(conditioning.size() + 1);
    covariates.push_back(k);
    covariates.insert(covariates.end(), conditioning.begin(), conditioning.end());

    TestResult result;
    try {
        auto fit = glm::fit_poisson(data, j, covariates);
        if (!fit.converged) {
            result.untestable = true;
            return result;
        }
        double z = glm::wald_z(fit, k);
        result.statistic = z;
        result.p_value = 2.0 * (1.0 - normal_cdf(std::abs(z)));
        result.reject = result.p_value < level;
    } catch (const singular_fit_error&) {
        result = TestResult{};
        result.untestable = true;
    }
    return result;
}

TestResult ci_test(const CountMatrix& data, int j, int k, std::span<const int> cond,
                   double level) {
    glm::ColumnTable table(data);
    return ci_test(table, j, k, cond, level);
}

TestResult marginal_test(const glm::ColumnTable& data, int j, int k, double level) {
    return ci_test(data, j, k, {}, level);
}

TestResult marginal_test(const CountMatrix& data, int j, int k, double level) {
    glm::ColumnTable table(data);
    return marginal_test(table, j, k, level);
}

TestResult deviance_test(double gain, double level) {
    if (gain < -kGainNoiseTolerance)
        throw validation_error("deviance_test gain " + std::to_string(gain) +
                               " is negative beyond numerical noise");
    double statistic = 2.0 * std::max(gain, 0.0);
    TestResult result;
    result.statistic = statistic;
    result.p_value = chisq_sf(statistic, 1);
    result.reject = result.p_value < level;
    return result;
}

}  // namespace learndag::stats
