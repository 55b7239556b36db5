#include "learndag/glm.hpp"

#include <Eigen/Dense>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>

#include "learndag/errors.hpp"

namespace learndag::glm {

namespace {

std::atomic<long> g_fit_count{0};

// exp(eta) overflows double beyond ~709.
constexpr double kEtaHardLimit = 700.0;

double dot_row(std::span<const std::vector<double>* const> design, std::span<const double> coef,
               int i) {
    double eta = coef[0];
    for (std::size_t c = 0; c < design.size(); ++c) eta += coef[c + 1] * (*design[c])[i];
    return eta;
}

std::vector<const std::vector<double>*> gather(const ColumnTable& data,
                                               std::span<const int> covariates) {
    std::vector<const std::vector<double>*> cols;
    cols.reserve(covariates.size());
    for (int k : covariates) {
        if (k < 0 || k >= data.p())
            throw validation_error("covariate index " + std::to_string(k) + " out of range");
        cols.push_back(&data.column(k));
    }
    return cols;
}

}  // namespace

ColumnTable::ColumnTable(const CountMatrix& data) : n_(data.n()), p_(data.p()) {
    cols_.assign(p_, std::vector<double>(n_));
    logfact_.assign(p_, 0.0);
    means_.assign(p_, 0.0);
    for (int j = 0; j < p_; ++j) {
        double lf = 0.0, sum = 0.0;
        auto& col = cols_[j];
        for (int i = 0; i < n_; ++i) {
            double x = static_cast<double>(data(i, j));
            col[i] = x;
            lf += std::lgamma(x + 1.0);
            sum += x;
        }
        logfact_[j] = lf;
        means_[j] = sum / n_;
    }
}

double GlmFit::slope(int covariate) const {
    for (std::size_t i = 0; i < covariates.size(); ++i)
        if (covariates[i] == covariate) return coef[i + 1];
    throw validation_error("fit has no covariate " + std::to_string(covariate));
}

double GlmFit::std_error(int covariate) const {
    for (std::size_t i = 0; i < covariates.size(); ++i)
        if (covariates[i] == covariate) return std_errors[i + 1];
    throw validation_error("fit has no covariate " + std::to_string(covariate));
}

double node_loglik(std::span<const double> response,
                   std::span<const std::vector<double>* const> design, std::span<const double> coef,
                   double log_factorial_sum) {
    if (coef.size() != design.size() + 1)
        throw validation_error("coefficient count " + std::to_string(coef.size()) +
                               " does not match covariate count " + std::to_string(design.size()) +
                               " plus intercept");
    const std::size_t n = response.size();
    for (const auto* col : design)
        if (col->size() != n) throw validation_error("design columns must share the response length");

    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double eta = dot_row(design, coef, static_cast<int>(i));
        if (!std::isfinite(eta) || eta > kEtaHardLimit)
            throw numeric_error("linear predictor overflow at sample " + std::to_string(i));
        ll += eta * response[i] - std::exp(eta);
    }
    return ll - log_factorial_sum;
}

double node_loglik(const ColumnTable& data, int response, std::span<const int> covariates,
                   std::span<const double> coef) {
    auto cols = gather(data, covariates);
    return node_loglik(data.column(response), cols, coef, data.log_factorial_sum(response));
}

std::vector<double> node_loglik_gradient(std::span<const double> response,
                                         std::span<const std::vector<double>* const> design,
                                         std::span<const double> coef) {
    if (coef.size() != design.size() + 1)
        throw validation_error("coefficient count does not match covariate count plus intercept");
    std::vector<double> grad(coef.size(), 0.0);
    for (std::size_t i = 0; i < response.size(); ++i) {
        double eta = dot_row(design, coef, static_cast<int>(i));
        if (!std::isfinite(eta) || eta > kEtaHardLimit)
            throw numeric_error("linear predictor overflow at sample " + std::to_string(i));
        double resid = response[i] - std::exp(eta);
        grad[0] += resid;
        for (std::size_t c = 0; c < design.size(); ++c) grad[c + 1] += resid * (*design[c])[i];
    }
    return grad;
}

GlmFit fit_poisson(const ColumnTable& data, int response, std::span<const int> covariates,
                   const FitOptions& options, const std::vector<double>* warm_start) {
    g_fit_count.fetch_add(1, std::memory_order_relaxed);
    if (response < 0 || response >= data.p())
        throw validation_error("response index " + std::to_string(response) + " out of range");
    const int n = data.n();
    const int dim = static_cast<int>(covariates.size()) + 1;
    if (n <= dim)
        throw singular_fit_error("need more samples than coefficients: n=" + std::to_string(n) +
                                 ", coefficients=" + std::to_string(dim));

    GlmFit fit;
    fit.response = response;
    fit.covariates.assign(covariates.begin(), covariates.end());

    const auto& y = data.column(response);
    const double logfact = data.log_factorial_sum(response);
    auto cols = gather(data, covariates);

    // Degenerate all-zero response: the MLE drifts to -inf; pin the intercept
    // at the pseudo-mean floor 1/(2n) so downstream scores stay finite.
    if (data.mean(response) == 0.0) {
        fit.coef.assign(dim, 0.0);
        fit.coef[0] = std::log(1.0 / (2.0 * n));
        fit.std_errors.assign(dim, std::numeric_limits<double>::quiet_NaN());
        fit.std_errors[0] = std::sqrt(2.0);  // 1/sqrt(n * mu) at mu = 1/(2n)
        std::span<const double> cf(fit.coef);
        fit.loglik = node_loglik(y, cols, cf, logfact);
        fit.converged = false;
        return fit;
    }

    Eigen::MatrixXd X(n, dim);
    for (int i = 0; i < n; ++i) X(i, 0) = 1.0;
    for (int c = 1; c < dim; ++c)
        for (int i = 0; i < n; ++i) X(i, c) = (*cols[c - 1])[i];
    Eigen::Map<const Eigen::VectorXd> yv(y.data(), n);

    Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim);
    theta[0] = std::log(data.mean(response));
    if (warm_start && static_cast<int>(warm_start->size()) <= dim) {
        for (std::size_t c = 0; c < warm_start->size(); ++c) theta[c] = (*warm_start)[c];
    }

    auto clamped_loglik = [&](const Eigen::VectorXd& t, Eigen::VectorXd& mu, bool& clamped) {
        Eigen::VectorXd eta = X * t;
        clamped = false;
        double ll = 0.0;
        for (int i = 0; i < n; ++i) {
            double e = eta[i];
            if (!std::isfinite(e)) {
                clamped = true;
                e = options.eta_max;
            } else if (e > options.eta_max) {
                clamped = true;
                e = options.eta_max;
            }
            mu[i] = std::exp(e);
            ll += e * yv[i] - mu[i];
        }
        return ll - logfact;
    };

    Eigen::VectorXd mu(n);
    bool clamped = false;
    double ll = clamped_loglik(theta, mu, clamped);
    if (options.loglik_trace) options.loglik_trace->push_back(ll);
    const double grad_tol = options.grad_tol_per_n * n;
    bool converged = false;
    int iter = 0;

    for (; iter < options.max_iterations; ++iter) {
        Eigen::VectorXd grad = X.transpose() * (yv - mu);
        if (grad.lpNorm<Eigen::Infinity>() <= grad_tol) {
            converged = true;
            break;
        }
        Eigen::MatrixXd info = X.transpose() * mu.asDiagonal() * X;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(info);
        if (lu.rank() < dim)
            throw singular_fit_error("singular information matrix for response " +
                                     std::to_string(response));
        Eigen::VectorXd step = lu.solve(grad);

        // Step-halving keeps the concave objective monotone.
        double new_ll = ll;
        Eigen::VectorXd new_theta = theta;
        Eigen::VectorXd new_mu(n);
        bool new_clamped = clamped;
        double scale = 1.0;
        for (int h = 0; h < 40; ++h) {
            new_theta = theta + scale * step;
            new_ll = clamped_loglik(new_theta, new_mu, new_clamped);
            if (new_ll >= ll - 1e-12 * (1.0 + std::abs(ll))) break;
            scale *= 0.5;
        }
        double change = std::abs(new_ll - ll);
        theta = new_theta;
        mu = new_mu;
        clamped = new_clamped;
        ll = new_ll;
        if (options.loglik_trace) options.loglik_trace->push_back(ll);
        if (change <= options.loglik_rel_tol * (1.0 + std::abs(ll))) {
            converged = true;
            ++iter;
            break;
        }
    }

    Eigen::MatrixXd info = X.transpose() * mu.asDiagonal() * X;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(info);
    if (lu.rank() < dim)
        throw singular_fit_error("singular information matrix for response " +
                                 std::to_string(response));
    Eigen::MatrixXd cov = lu.inverse();

    fit.coef.assign(theta.data(), theta.data() + dim);
    fit.std_errors.resize(dim);
    for (int c = 0; c < dim; ++c) fit.std_errors[c] = std::sqrt(std::max(cov(c, c), 0.0));
    fit.loglik = ll;
    fit.iterations = iter;
    fit.converged = converged && !clamped;
    return fit;
}

double wald_z(const GlmFit& fit, int covariate) {
    if (!fit.converged) throw validation_error("wald_z requires a converged fit");
    double est = fit.slope(covariate);
    double se = fit.std_error(covariate);
    if (!std::isfinite(se) || se <= 0.0)
        throw singular_fit_error("untestable coefficient for covariate " +
                                 std::to_string(covariate));
    return est / se;
}

long fit_count() { return g_fit_count.load(std::memory_order_relaxed); }

}  // namespace learndag::glm
