#pragma once

#include "ndi/garch.hpp"
#include "ndi/rng.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace ndi {

// Bivariate normal inverse Gaussian law, normal mean-variance mixture
// with inverse-Gaussian mixing. The dispersion matrix is normalized to
// unit determinant for identifiability.
struct BivNigParams {
    double alpha = 1.0;
    Eigen::Vector2d beta = Eigen::Vector2d::Zero();
    double delta = 1.0;
    Eigen::Vector2d mu = Eigen::Vector2d::Zero();
    Eigen::Matrix2d gamma_matrix = Eigen::Matrix2d::Identity();

    // sqrt(alpha^2 - beta' Gamma beta), must be positive
    double gamma_tilde() const;
    bool valid() const;

    Eigen::Vector2d mean() const;
    Eigen::Matrix2d covariance() const;
};

double biv_nig_log_pdf(const Eigen::Vector2d& x, const BivNigParams& p);

struct BivNigFit {
    BivNigParams params;
    double loglik = 0.0;
    bool converged = false;
    int iterations = 0;
    std::vector<double> ll_trace;  // per-iteration log-likelihood of the kept start
};

struct BivNigFitOptions {
    int max_iterations = 500;
    double tolerance = 1e-8;  // relative log-likelihood change
    int restarts = 5;
    std::uint64_t seed = 7;
};

// MCECM fit: E-step posterior moments of the mixing variable in
// half-integer Bessel closed forms, M-step in the mixture coordinates.
BivNigFit fit_bivariate_nig(const Eigen::Ref<const Eigen::MatrixX2d>& data,
                            const BivNigFitOptions& options = {});

// n x 2 sample; deterministic per seed.
Eigen::MatrixX2d simulate_bivariate_nig(const BivNigParams& p, int n, std::uint64_t seed);

// Left-tail co-risk measures at level q on sample pairs (x = stressor,
// y = target).
double covar(const Eigen::Ref<const Eigen::VectorXd>& x,
             const Eigen::Ref<const Eigen::VectorXd>& y, double q,
             int min_conditional = 20);
double coes(const Eigen::Ref<const Eigen::VectorXd>& x,
            const Eigen::Ref<const Eigen::VectorXd>& y, double q,
            int min_conditional = 20);
double coetl(const Eigen::Ref<const Eigen::VectorXd>& x,
             const Eigen::Ref<const Eigen::VectorXd>& y, double q,
             int min_conditional = 20, int min_joint = 10);

struct StressLevelRow {
    double level = 0.0;
    double covar = 0.0, coes = 0.0, coetl = 0.0;
    double covar_se = 0.0, coes_se = 0.0, coetl_se = 0.0;
};

struct StressOptions {
    std::vector<double> levels{0.10, 0.05, 0.01};
    int n_sims = 10000;
    std::uint64_t seed = 1;
    int bootstrap_reps = 200;
    int lb_lags = 20;
    int min_conditional = 20;
    int min_joint = 10;
};

struct StressReport {
    std::string factor_name;
    LjungBoxResult factor_lb;  // on the differenced factor
    LjungBoxResult target_lb;  // on the index series
    double factor_t_nu = 0.0;  // Student-t dof of the factor filter
    double target_t_nu = 0.0;
    BivNigFit joint;
    double corr_raw = 0.0;       // on (differenced factor, index) pairs
    double corr_residual = 0.0;  // on standardized residual pairs
    Eigen::MatrixX2d simulated;  // (factor, target) draws behind the measures
    std::vector<StressLevelRow> rows;
};

// End to end: difference the factor, screen with Ljung-Box, filter both
// series through ARMA(1,1)-GARCH(1,1)-t, fit the joint residual law,
// simulate, and estimate CoVaR/CoES/CoETL per level. factor_levels must
// cover one more month than target_monthly (differencing aligns them).
StressReport stress_pipeline(const Eigen::Ref<const Eigen::VectorXd>& target_monthly,
                             const Eigen::Ref<const Eigen::VectorXd>& factor_levels,
                             const StressOptions& options = {});

}  // namespace ndi
