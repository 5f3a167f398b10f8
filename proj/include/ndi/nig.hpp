#pragma once

#include "ndi/rng.hpp"

#include <Eigen/Core>

#include <optional>

namespace ndi {

// Generalized hyperbolic parameter set; the normal inverse Gaussian law
// is the lambda = -1/2 member, which is the only family fitted here.
struct GhParams {
    double lambda = -0.5;
    double alpha = 1.0;  // tail heaviness, > |beta|
    double beta = 0.0;   // asymmetry
    double delta = 1.0;  // scale, > 0
    double mu = 0.0;     // location

    double gamma() const;  // sqrt(alpha^2 - beta^2)
    bool valid() const;
};

GhParams nig_params(double alpha, double beta, double delta, double mu);

// NIG with zero mean and unit variance for the given shape pair:
// delta = gamma^3 / alpha^2, mu = -delta beta / gamma.
GhParams nig_standardized(double alpha, double beta);

double nig_mean(const GhParams& p);
double nig_variance(const GhParams& p);

double nig_pdf(double x, const GhParams& p);
double nig_log_pdf(double x, const GhParams& p);

// Read-only density for other lambda values whose Bessel orders reduce
// to half-integer closed forms or small integer orders (half-integer and
// small-integer lambda). Only the NIG member is fitted or sampled.
double gh_pdf(double x, const GhParams& p);
double gh_log_pdf(double x, const GhParams& p);

// Moment generating function of GH(lambda, alpha, beta, delta, mu) at u;
// closed form for lambda = -1/2, Bessel-ratio form otherwise.
// Requires |beta + u| < alpha.
double gh_mgf(double u, const GhParams& p);
double gh_log_mgf(double u, const GhParams& p);

double nig_sample(RngStream& rng, const GhParams& p);
Eigen::VectorXd nig_sample_n(RngStream& rng, const GhParams& p, int n);

struct NigFit {
    GhParams params;
    double loglik = 0.0;
    bool converged = false;
    int evaluations = 0;
    double grad_norm = 0.0;  // finite-difference gradient at the optimum
};

// Maximum likelihood fit of the four NIG parameters. Optimization runs in
// an unconstrained space (log gamma, beta, log delta, mu) so alpha > |beta|
// and delta > 0 hold by construction. Non-convergence is flagged on the
// result, the best iterate is still returned.
NigFit nig_fit_mle(const Eigen::Ref<const Eigen::VectorXd>& data,
                   std::optional<GhParams> init = std::nullopt);

double nig_loglik(const Eigen::Ref<const Eigen::VectorXd>& data, const GhParams& p);

struct StudentTParams {
    double nu = 6.0;  // degrees of freedom, > 2
};

// Density of the zero-mean, unit-variance Student-t.
double student_t_std_log_pdf(double x, double nu);

}  // namespace ndi
