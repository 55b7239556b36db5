#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "learndag/errors.hpp"
#include "learndag/glm.hpp"
#include "test_helpers.hpp"

using namespace learndag;

namespace {

CountMatrix with_padding(std::vector<std::int64_t> col) {
    // Single interesting column plus a zero pad column (p >= 2 invariant).
    const int n = static_cast<int>(col.size());
    std::vector<std::int64_t> values(static_cast<std::size_t>(n) * 2, 0);
    for (int i = 0; i < n; ++i) values[2 * i] = col[i];
    return CountMatrix(n, 2, std::move(values));
}

// Term-by-term long double evaluation, independent of the library path.
long double loglik_oracle(const std::vector<double>& y,
                          const std::vector<const std::vector<double>*>& design,
                          const std::vector<double>& coef) {
    long double total = 0.0L;
    for (std::size_t i = 0; i < y.size(); ++i) {
        long double eta = coef[0];
        for (std::size_t c = 0; c < design.size(); ++c)
            eta += (long double)coef[c + 1] * (*design[c])[i];
        total += eta * (long double)y[i] - std::lgamma((long double)y[i] + 1.0L) - std::exp(eta);
    }
    return total;
}

// Joint log-likelihood of the full model evaluated directly from a p x p
// coefficient matrix (diagonal = intercepts), the decomposition oracle.
long double joint_loglik_oracle(const CountMatrix& data,
                                const std::vector<std::vector<double>>& theta) {
    const int n = data.n(), p = data.p();
    long double total = 0.0L;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) {
            long double eta = theta[j][j];
            for (int k = 0; k < p; ++k)
                if (k != j) eta += (long double)theta[j][k] * (long double)data(i, k);
            long double x = (long double)data(i, j);
            total += eta * x - std::lgamma(x + 1.0L) - std::exp(eta);
        }
    }
    return total;
}

}  // namespace

TEST_CASE("node_loglik matches hand-computed and degenerate examples") {
    auto data = with_padding({1, 2, 3});
    glm::ColumnTable table(data);

    std::vector<double> coef{std::log(2.0)};
    double ll = glm::node_loglik(table, 0, {}, coef);
    CHECK(ll == doctest::Approx(-4.32602356643).epsilon(1e-9));

    auto zeros = with_padding({0, 0, 0, 0, 0});
    glm::ColumnTable ztable(zeros);
    std::vector<double> zero_coef{0.0};
    CHECK(glm::node_loglik(ztable, 0, {}, zero_coef) == doctest::Approx(-5.0));
}

TEST_CASE("node_loglik equals the term-by-term oracle on random inputs") {
    std::mt19937_64 rng(21);
    std::poisson_distribution<std::int64_t> counts(3.0);
    std::normal_distribution<double> coefs(0.0, 0.3);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 5 + static_cast<int>(rng() % 40);
        int p = 2 + static_cast<int>(rng() % 4);
        std::vector<std::int64_t> values(static_cast<std::size_t>(n) * p);
        for (auto& v : values) v = counts(rng);
        CountMatrix data(n, p, std::move(values));
        glm::ColumnTable table(data);

        int j = static_cast<int>(rng() % p);
        std::vector<int> covariates;
        for (int k = 0; k < p; ++k)
            if (k != j && rng() % 2 == 0) covariates.push_back(k);
        std::vector<double> coef(covariates.size() + 1);
        for (auto& c : coef) c = coefs(rng);

        std::vector<const std::vector<double>*> design;
        for (int k : covariates) design.push_back(&table.column(k));
        long double expected = loglik_oracle(table.column(j), design, coef);
        double got = glm::node_loglik(table, j, covariates, coef);
        CHECK(got == doctest::Approx((double)expected).epsilon(1e-12));
    }
}

TEST_CASE("node_loglik validates inputs and flags overflow") {
    auto data = with_padding({1, 2, 3});
    glm::ColumnTable table(data);
    std::vector<double> too_many{0.0, 1.0};
    CHECK_THROWS_AS(glm::node_loglik(table, 0, {}, too_many), validation_error);
    std::vector<double> huge{1000.0};
    CHECK_THROWS_AS(glm::node_loglik(table, 0, {}, huge), numeric_error);
}

TEST_CASE("joint log-likelihood decomposes into node conditionals") {
    std::mt19937_64 rng(31);
    std::poisson_distribution<std::int64_t> counts(2.0);
    std::uniform_real_distribution<double> weight(-0.2, 0.2);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 10 + static_cast<int>(rng() % 60);
        int p = 2 + static_cast<int>(rng() % 5);
        std::vector<std::int64_t> values(static_cast<std::size_t>(n) * p);
        for (auto& v : values) v = counts(rng);
        CountMatrix data(n, p, std::move(values));
        glm::ColumnTable table(data);

        std::vector<std::vector<double>> theta(p, std::vector<double>(p));
        for (int j = 0; j < p; ++j)
            for (int k = 0; k < p; ++k) theta[j][k] = weight(rng);

        double sum_nodes = 0.0;
        for (int j = 0; j < p; ++j) {
            std::vector<int> covariates;
            std::vector<double> coef{theta[j][j]};
            for (int k = 0; k < p; ++k)
                if (k != j) {
                    covariates.push_back(k);
                    coef.push_back(theta[j][k]);
                }
            sum_nodes += glm::node_loglik(table, j, covariates, coef);
        }
        long double joint = joint_loglik_oracle(data, theta);
        CHECK(sum_nodes == doctest::Approx((double)joint).epsilon(1e-8));
    }
}

TEST_CASE("analytic gradient matches central finite differences") {
    std::mt19937_64 rng(41);
    std::normal_distribution<double> coefs(0.0, 0.2);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 20 + static_cast<int>(rng() % 30);
        auto data = testutil::iid_poisson(n, 3, 3.0, rng());
        glm::ColumnTable table(data);
        std::vector<int> covariates{1, 2};
        std::vector<double> coef{coefs(rng), coefs(rng), coefs(rng)};

        std::vector<const std::vector<double>*> design{&table.column(1), &table.column(2)};
        auto grad = glm::node_loglik_gradient(table.column(0), design, coef);

        const double h = 1e-5;
        for (std::size_t c = 0; c < coef.size(); ++c) {
            auto up = coef, down = coef;
            up[c] += h;
            down[c] -= h;
            double fd = (glm::node_loglik(table, 0, covariates, up) -
                         glm::node_loglik(table, 0, covariates, down)) /
                        (2 * h);
            CHECK(grad[c] == doctest::Approx(fd).epsilon(1e-4));
        }
    }
}

TEST_CASE("intercept-only fit is the log sample mean") {
    auto data = with_padding({1, 2, 3});
    glm::ColumnTable table(data);
    auto fit = glm::fit_poisson(table, 0, {});
    CHECK(fit.converged);
    CHECK(fit.intercept() == doctest::Approx(std::log(2.0)).epsilon(1e-10));
    CHECK(fit.loglik == doctest::Approx(-4.32602356643).epsilon(1e-9));
}

TEST_CASE("all-zero response pins the intercept at the pseudo-mean floor") {
    auto data = with_padding({0, 0, 0, 0});
    glm::ColumnTable table(data);
    auto fit = glm::fit_poisson(table, 0, {});
    CHECK_FALSE(fit.converged);
    CHECK(fit.intercept() == doctest::Approx(std::log(1.0 / 8.0)));
    CHECK(std::isfinite(fit.loglik));
}

TEST_CASE("fit recovers the generating slope on simulated data") {
    auto data = testutil::pair_with_edge(20000, 0.5, 0.3, 2.0, 99);
    glm::ColumnTable table(data);
    std::vector<int> covariates{0};
    auto fit = glm::fit_poisson(table, 1, covariates);
    REQUIRE(fit.converged);
    CHECK(std::abs(fit.slope(0) - 0.3) < 0.05);
    CHECK(std::abs(glm::wald_z(fit, 0)) > 5.0);

    // Gradient at the MLE is numerically zero.
    std::vector<const std::vector<double>*> design{&table.column(0)};
    auto grad = glm::node_loglik_gradient(table.column(1), design, fit.coef);
    for (double g : grad) CHECK(std::abs(g) <= 1e-8 * data.n());
}

TEST_CASE("wald_z is the coefficient over its standard error") {
    glm::GlmFit fit;
    fit.converged = true;
    fit.covariates = {3};
    fit.coef = {0.1, 0.3};
    fit.std_errors = {0.05, 0.1};
    CHECK(glm::wald_z(fit, 3) == doctest::Approx(3.0));

    fit.coef[1] = 0.0;
    CHECK(glm::wald_z(fit, 3) == doctest::Approx(0.0));

    fit.std_errors[1] = 0.0;
    CHECK_THROWS_AS(glm::wald_z(fit, 3), singular_fit_error);
    fit.converged = false;
    fit.std_errors[1] = 0.1;
    CHECK_THROWS_AS(glm::wald_z(fit, 3), validation_error);
}

TEST_CASE("duplicated covariate columns give a singular fit") {
    std::vector<std::int64_t> values;
    std::mt19937_64 rng(5);
    std::poisson_distribution<std::int64_t> counts(2.0);
    const int n = 50;
    for (int i = 0; i < n; ++i) {
        auto a = counts(rng);
        values.push_back(counts(rng));
        values.push_back(a);
        values.push_back(a);  // exact duplicate of column 1
    }
    CountMatrix data(n, 3, std::move(values));
    glm::ColumnTable table(data);
    std::vector<int> covariates{1, 2};
    CHECK_THROWS_AS(glm::fit_poisson(table, 0, covariates), singular_fit_error);
}

TEST_CASE("log-likelihood is monotone across Newton iterations") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 10; ++trial) {
        auto data = testutil::pair_with_edge(200, 0.3, 0.25, 2.0, rng());
        glm::ColumnTable table(data);
        std::vector<double> trace;
        glm::FitOptions options;
        options.loglik_trace = &trace;
        std::vector<int> covariates{0};
        glm::fit_poisson(table, 1, covariates, options);
        REQUIRE(trace.size() >= 1);
        for (std::size_t i = 1; i < trace.size(); ++i)
            CHECK(trace[i] >= trace[i - 1] - 1e-9 * (1.0 + std::abs(trace[i - 1])));
    }
}

TEST_CASE("nested models never lose log-likelihood") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 60 + static_cast<int>(rng() % 100);
        int p = 3 + static_cast<int>(rng() % 3);
        auto data = testutil::iid_poisson(n, p, 2.5, rng());
        glm::ColumnTable table(data);

        int j = static_cast<int>(rng() % p);
        std::vector<int> small;
        int extra = -1;
        for (int k = 0; k < p; ++k) {
            if (k == j) continue;
            if (extra < 0) {
                extra = k;
            } else if (rng() % 2 == 0) {
                small.push_back(k);
            }
        }
        auto large = small;
        large.push_back(extra);
        std::sort(large.begin(), large.end());

        auto fit_small = glm::fit_poisson(table, j, small);
        auto fit_large = glm::fit_poisson(table, j, large);
        CHECK(fit_large.loglik >= fit_small.loglik - 1e-8 * n);
    }
}

TEST_CASE("warm starts land on the same optimum") {
    auto data = testutil::pair_with_edge(500, 0.4, 0.2, 2.0, 123);
    glm::ColumnTable table(data);
    std::vector<int> covariates{0};
    auto cold = glm::fit_poisson(table, 1, covariates);
    std::vector<double> start{cold.coef[0] + 0.05, cold.coef[1] - 0.05};
    auto warm = glm::fit_poisson(table, 1, covariates, {}, &start);
    CHECK(warm.loglik == doctest::Approx(cold.loglik).epsilon(1e-10));
    CHECK(warm.coef[1] == doctest::Approx(cold.coef[1]).epsilon(1e-6));
}
