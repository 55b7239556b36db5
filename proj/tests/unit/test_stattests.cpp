#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "learndag/errors.hpp"
#include "learndag/stattests.hpp"
#include "test_helpers.hpp"

using namespace learndag;

TEST_CASE("normal_cdf against the erf-series oracle") {
    CHECK(stats::normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(stats::normal_cdf(1.959964) == doctest::Approx(0.975).epsilon(1e-6));
    for (double z = -8.0; z <= 8.0; z += 0.37) {
        double expected = testutil::normal_cdf_oracle(z);
        CHECK(std::abs(stats::normal_cdf(z) - expected) <= 1e-10);
    }
    // Saturation in the tails.
    CHECK(stats::normal_cdf(40.0) == doctest::Approx(1.0));
    CHECK(stats::normal_cdf(-40.0) == doctest::Approx(0.0));
}

TEST_CASE("chisq_sf pinned quantiles and reference values") {
    CHECK(stats::chisq_sf(3.841459, 1) == doctest::Approx(0.05).epsilon(1e-6));
    // Reference values from an independent high-precision evaluation.
    CHECK(stats::chisq_sf(1.0, 1) == doctest::Approx(0.31731050786291).epsilon(1e-10));
    CHECK(stats::chisq_sf(0.5, 1) == doctest::Approx(0.47950012218695).epsilon(1e-10));
    CHECK(stats::chisq_sf(2.5, 2) == doctest::Approx(0.28650479686019).epsilon(1e-10));
    CHECK(stats::chisq_sf(7.3, 3) == doctest::Approx(0.062926236459043).epsilon(1e-10));
    CHECK(stats::chisq_sf(12.0, 4) == doctest::Approx(0.017351265236665).epsilon(1e-10));
    CHECK(stats::chisq_sf(30.0, 5) == doctest::Approx(1.4748581038443e-5).epsilon(1e-9));
    CHECK(stats::chisq_sf(50.0, 5) == doctest::Approx(1.385797336701e-9).epsilon(1e-6));
    CHECK(stats::chisq_sf(0.0, 1) == doctest::Approx(1.0));

    // df = 1 relates back to the normal: sf(x) = 2(1 - Phi(sqrt(x))).
    for (double x = 0.1; x < 30.0; x += 0.7) {
        double via_normal = 2.0 * (1.0 - stats::normal_cdf(std::sqrt(x)));
        CHECK(stats::chisq_sf(x, 1) == doctest::Approx(via_normal).epsilon(1e-10));
    }

    CHECK_THROWS_AS(stats::chisq_sf(-1.0, 1), validation_error);
    CHECK_THROWS_AS(stats::chisq_sf(1.0, 0), validation_error);
}

TEST_CASE("alpha_schedule matches the erf oracle and is monotone") {
    CHECK(stats::alpha_schedule(2000, 0.15) == doctest::Approx(1.76484834e-3).epsilon(1e-6));
    CHECK(stats::alpha_schedule(500, 0.2) == doctest::Approx(5.28805397e-4).epsilon(1e-6));

    // Exponent -> 0 limit: alpha -> 2(1 - Phi(1)).
    CHECK(stats::alpha_schedule(1000, 1e-9) == doctest::Approx(0.317310507863).epsilon(1e-6));

    double prev = 1.0;
    for (std::int64_t n : {2, 5, 10, 50, 100, 500, 1000, 5000, 20000}) {
        for (double e : {0.1, 0.15, 0.2, 0.5, 1.0}) {
            double a = stats::alpha_schedule(n, e);
            CHECK(a > 0.0);
            CHECK(a < 1.0);
            double oracle = 2.0 * (1.0 - testutil::normal_cdf_oracle(
                                             std::pow(static_cast<double>(n), e)));
            if (oracle > 1e-12) CHECK(a == doctest::Approx(oracle).epsilon(1e-6));
        }
        double a15 = stats::alpha_schedule(n, 0.15);
        CHECK(a15 < prev);
        prev = a15;
    }
    CHECK_THROWS_AS(stats::alpha_schedule(1, 0.15), validation_error);
}

TEST_CASE("ci_test rejects under dependence and not under independence") {
    int null_rejections = 0;
    int alt_rejections = 0;
    const int replicates = 30;
    for (int rep = 0; rep < replicates; ++rep) {
        auto null_data = testutil::iid_poisson(5000, 2, 2.0, 1000 + rep);
        auto r0 = stats::ci_test(null_data, 0, 1, {}, 0.05);
        if (r0.reject) ++null_rejections;

        auto alt_data = testutil::pair_with_edge(5000, 0.5, 0.4, 2.0, 2000 + rep);
        auto r1 = stats::ci_test(alt_data, 1, 0, {}, 0.05);
        if (r1.reject) ++alt_rejections;
    }
    CHECK(null_rejections <= replicates / 10 + 1);  // type-I control at 5%
    CHECK(alt_rejections >= (replicates * 95) / 100);
}

TEST_CASE("ci_test conditions away an indirect association") {
    // Chain 0 -> 1 -> 2: marginally 0 and 2 associate, conditionally they don't.
    std::mt19937_64 rng(77);
    const int n = 4000;
    std::vector<std::int64_t> values(static_cast<std::size_t>(n) * 3);
    std::poisson_distribution<std::int64_t> root(2.0);
    for (int i = 0; i < n; ++i) {
        auto x0 = root(rng);
        std::poisson_distribution<std::int64_t> mid(std::exp(0.4 + 0.3 * x0));
        auto x1 = mid(rng);
        std::poisson_distribution<std::int64_t> leaf(std::exp(0.4 + 0.25 * x1));
        values[3 * i] = x0;
        values[3 * i + 1] = x1;
        values[3 * i + 2] = leaf(rng);
    }
    CountMatrix data(n, 3, std::move(values));

    auto marginal = stats::marginal_test(data, 2, 0, 0.01);
    CHECK(marginal.reject);
    std::vector<int> cond{1};
    auto conditional = stats::ci_test(data, 2, 0, cond, 0.01);
    CHECK_FALSE(conditional.reject);
}

TEST_CASE("ci_test precondition checks") {
    auto data = testutil::iid_poisson(100, 4, 2.0, 3);
    std::vector<int> cond_with_k{1};
    CHECK_THROWS_AS(stats::ci_test(data, 0, 1, cond_with_k, 0.05), validation_error);
    std::vector<int> duplicated{2, 2};
    CHECK_THROWS_AS(stats::ci_test(data, 0, 1, duplicated, 0.05), validation_error);
    CHECK_THROWS_AS(stats::ci_test(data, 1, 1, {}, 0.05), validation_error);
    CHECK_THROWS_AS(stats::marginal_test(data, 1, 1, 0.05), validation_error);
}

TEST_CASE("ci_test is invariant to conditioning-set order") {
    auto data = testutil::iid_poisson(400, 5, 2.0, 900);
    std::vector<int> forward{2, 3, 4};
    std::vector<int> backward{4, 3, 2};
    auto a = stats::ci_test(data, 0, 1, forward, 0.05);
    auto b = stats::ci_test(data, 0, 1, backward, 0.05);
    CHECK(a.statistic == doctest::Approx(b.statistic).epsilon(1e-12));
    CHECK(a.p_value == doctest::Approx(b.p_value).epsilon(1e-12));
}

TEST_CASE("untestable pairs come back flagged, never rejected") {
    // Constant zero column: the covariate carries no information.
    const int n = 50;
    std::vector<std::int64_t> values(static_cast<std::size_t>(n) * 2, 0);
    std::mt19937_64 rng(8);
    std::poisson_distribution<std::int64_t> counts(2.0);
    for (int i = 0; i < n; ++i) values[2 * i] = counts(rng);
    CountMatrix data(n, 2, std::move(values));

    auto result = stats::ci_test(data, 0, 1, {}, 0.05);
    CHECK(result.untestable);
    CHECK_FALSE(result.reject);
    CHECK(result.p_value == doctest::Approx(1.0));
}

TEST_CASE("marginal_test flags perfect dependence and clean independence") {
    const int n = 2000;
    std::mt19937_64 rng(12);
    std::poisson_distribution<std::int64_t> counts(3.0);
    std::vector<std::int64_t> values(static_cast<std::size_t>(n) * 2);
    for (int i = 0; i < n; ++i) {
        auto x = counts(rng);
        values[2 * i] = x;
        values[2 * i + 1] = x;  // X_j = X_k exactly
    }
    CountMatrix identical(n, 2, std::move(values));
    CHECK(stats::marginal_test(identical, 0, 1, 0.05).reject);

    auto independent = testutil::iid_poisson(5000, 2, 3.0, 13);
    CHECK_FALSE(stats::marginal_test(independent, 0, 1, 0.05).reject);
}

TEST_CASE("deviance_test doubles the gain and uses chi-squared(1)") {
    auto zero = stats::deviance_test(0.0, 0.05);
    CHECK(zero.statistic == doctest::Approx(0.0));
    CHECK(zero.p_value == doctest::Approx(1.0));
    CHECK_FALSE(zero.reject);

    // Boundary: gain 1.9207 sits just under the 5% quantile (3.84146).
    auto boundary = stats::deviance_test(1.9207, 0.05);
    CHECK(boundary.statistic == doctest::Approx(3.8414));
    CHECK(boundary.p_value == doctest::Approx(0.05).epsilon(1e-3));
    CHECK_FALSE(boundary.reject);

    auto fig2 = stats::deviance_test(0.80, 0.05);
    CHECK(fig2.statistic == doctest::Approx(1.6));
    CHECK(fig2.p_value == doctest::Approx(stats::chisq_sf(1.6, 1)));

    // Tiny negative gains clamp; real negatives are a precondition breach.
    CHECK(stats::deviance_test(-1e-9, 0.05).statistic == doctest::Approx(0.0));
    CHECK_THROWS_AS(stats::deviance_test(-0.5, 0.05), validation_error);
}

TEST_CASE("null p-values are close to uniform") {
    // Kolmogorov distance between 500 null replicate p-values and U(0,1).
    const int replicates = 500;
    std::vector<double> pvals;
    pvals.reserve(replicates);
    for (int rep = 0; rep < replicates; ++rep) {
        auto data = testutil::iid_poisson(2000, 2, 2.0, 40000 + rep);
        auto result = stats::ci_test(data, 0, 1, {}, 0.05);
        REQUIRE_FALSE(result.untestable);
        pvals.push_back(result.p_value);
    }
    std::sort(pvals.begin(), pvals.end());
    double ks = 0.0;
    for (int i = 0; i < replicates; ++i) {
        double ecdf_hi = static_cast<double>(i + 1) / replicates;
        double ecdf_lo = static_cast<double>(i) / replicates;
        ks = std::max(ks, std::max(std::abs(ecdf_hi - pvals[i]), std::abs(pvals[i] - ecdf_lo)));
    }
    CHECK(ks <= 0.1);
}
