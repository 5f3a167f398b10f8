#pragma once

#include "ndi/nig.hpp"
#include "ndi/rng.hpp"

#include <Eigen/Core>

#include <optional>

namespace ndi {

// Variance recursion coefficients: h_t = m + a h_{t-1} + b h_{t-1} eps_{t-1}^2,
// where h_{t-1} eps_{t-1}^2 is the squared mean-equation shock.
struct GarchParams {
    double m = 0.0;
    double a = 0.0;
    double b = 0.0;

    bool stationary() const { return a + b < 1.0; }
};

double garch_variance_recursion(const GarchParams& p, double prev_variance,
                                double prev_innovation);

// Mean equation: r_t = riskfree + lambda0 sqrt(h_t) - h_t/2 + sqrt(h_t) eps_t.
struct GarchNigModel {
    GarchParams garch;
    double lambda0 = 0.0;
    GhParams innovation;  // NIG law of eps_t (zero mean, unit variance)
    double riskfree = 0.0;

    Eigen::VectorXd variance;   // filtered h_t, one per observed return
    Eigen::VectorXd residuals;  // standardized eps_t
    double h_forecast = 0.0;    // one-step-ahead variance
    double loglik = 0.0;
    bool converged = false;
    bool stationary = true;
};

struct GarchFilterResult {
    Eigen::VectorXd variance;
    Eigen::VectorXd residuals;
    double h_next = 0.0;
    double loglik = 0.0;
};

// Run the variance filter over a return series with fixed parameters.
// h1 defaults to the sample variance of the returns.
GarchFilterResult garch_nig_filter(const GarchParams& garch, double lambda0,
                                   const GhParams& innovation,
                                   const Eigen::Ref<const Eigen::VectorXd>& returns,
                                   double riskfree,
                                   std::optional<double> h1 = std::nullopt);

struct GarchNigSimulation {
    Eigen::VectorXd returns;
    Eigen::VectorXd variance;
    Eigen::VectorXd innovations;
};

GarchNigSimulation simulate_garch_nig(const GarchParams& garch, double lambda0,
                                      const GhParams& innovation, double riskfree, int n,
                                      double h1, RngStream& rng);

struct GarchFitOptions {
    std::optional<double> pinned_lambda0;  // estimate jointly when unset
    std::optional<double> h1;
    int max_iterations = 4000;
};

// Joint MLE of (m, a, b, lambda0) and the NIG innovation shape on a
// return series. The innovation law is the zero-mean unit-variance NIG
// family, which pins the scale split between delta and h_t.
GarchNigModel fit_garch_nig_returns(const Eigen::Ref<const Eigen::VectorXd>& returns,
                                    double riskfree, const GarchFitOptions& options = {});

// Convenience wrapper: fit on log-returns of a strictly positive series.
GarchNigModel fit_garch_nig(const Eigen::Ref<const Eigen::VectorXd>& series,
                            double riskfree, const GarchFitOptions& options = {});

struct LjungBoxResult {
    double q = 0.0;
    double p_value = 1.0;
    int lags = 0;
};

LjungBoxResult ljung_box(const Eigen::Ref<const Eigen::VectorXd>& series, int lags);

struct ArmaGarchTModel {
    double c = 0.0;    // mean constant
    double ar1 = 0.0;  // AR coefficient
    double ma1 = 0.0;  // MA coefficient
    double omega = 0.0;
    double alpha1 = 0.0;
    double beta1 = 0.0;
    StudentTParams t_params;

    Eigen::VectorXd residuals;  // standardized
    Eigen::VectorXd variance;
    double loglik = 0.0;
    bool converged = false;
    LjungBoxResult residual_lb;  // fit-quality gate, reported not enforced
};

ArmaGarchTModel fit_arma_garch_t(const Eigen::Ref<const Eigen::VectorXd>& series,
                                 int lb_lags = 20);

}  // namespace ndi
