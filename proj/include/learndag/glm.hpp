#ifndef LEARNDAG_GLM_HPP
#define LEARNDAG_GLM_HPP

#include <span>
#include <vector>

#include "learndag/count_matrix.hpp"

namespace learndag::glm {

// Column view of a CountMatrix with per-column log-factorial sums cached;
// every fit against the same dataset shares one instance.
class ColumnTable {
public:
    explicit ColumnTable(const CountMatrix& data);

    int n() const { return n_; }
    int p() const { return p_; }

    const std::vector<double>& column(int j) const { return cols_[j]; }
    double log_factorial_sum(int j) const { return logfact_[j]; }
    double mean(int j) const { return means_[j]; }

private:
    int n_;
    int p_;
    std::vector<std::vector<double>> cols_;
    std::vector<double> logfact_;
    std::vector<double> means_;
};

struct FitOptions {
    int max_iterations = 100;
    double eta_max = 30.0;           // linear-predictor clamp during iteration
    double loglik_rel_tol = 1e-10;
    double grad_tol_per_n = 1e-8;    // converged when max|grad| <= tol * n
    std::vector<double>* loglik_trace = nullptr;  // accepted values per iteration
};

// Fitted Poisson node-conditional model. coef[0] is the intercept; coef[1 + i]
// is the slope for covariates[i].
struct GlmFit {
    int response = -1;
    std::vector<int> covariates;
    std::vector<double> coef;
    std::vector<double> std_errors;
    double loglik = 0.0;
    bool converged = false;
    int iterations = 0;

    double intercept() const { return coef[0]; }
    double slope(int covariate) const;
    double std_error(int covariate) const;
};

// Poisson log-likelihood of `response` under the given coefficients:
// sum_i [eta_i * y_i - log y_i! - exp(eta_i)], eta_i = coef[0] + sum coef[1+k] x_ik.
// log_factorial_sum = sum_i lgamma(y_i + 1), a constant in the coefficients.
// Throws numeric_error when any eta_i is non-finite or exp would overflow.
double node_loglik(std::span<const double> response,
                   std::span<const std::vector<double>* const> design,
                   std::span<const double> coef,
                   double log_factorial_sum);

double node_loglik(const ColumnTable& data, int response, std::span<const int> covariates,
                   std::span<const double> coef);

// Analytic gradient of node_loglik in the coefficients.
std::vector<double> node_loglik_gradient(std::span<const double> response,
                                         std::span<const std::vector<double>* const> design,
                                         std::span<const double> coef);

// Maximum-likelihood fit of response ~ covariates by Newton iteration with
// step-halving. Throws singular_fit_error when the information matrix is
// rank-deficient. An all-zero response yields the pseudo-mean floor intercept
// log(1/(2n)) with converged=false.
GlmFit fit_poisson(const ColumnTable& data, int response, std::span<const int> covariates,
                   const FitOptions& options = {},
                   const std::vector<double>* warm_start = nullptr);

// Wald statistic theta_hat / se for one covariate of a fit.
// Throws validation_error if the fit did not converge or lacks the covariate,
// singular_fit_error when the standard error is unusable.
double wald_z(const GlmFit& fit, int covariate);

// Number of fit_poisson calls since process start (test instrumentation).
long fit_count();

}  // namespace learndag::glm

#endif  // LEARNDAG_GLM_HPP
