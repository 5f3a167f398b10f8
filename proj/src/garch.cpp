#include "ndi/garch.hpp"

#include "ndi/errors.hpp"
#include "ndi/simplex.hpp"
#include "ndi/special.hpp"
#include "ndi/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ndi {

double garch_variance_recursion(const GarchParams& p, double prev_variance,
                                double prev_innovation) {
    return p.m + p.a * prev_variance + p.b * prev_variance * prev_innovation * prev_innovation;
}

GarchFilterResult garch_nig_filter(const GarchParams& garch, double lambda0,
                                   const GhParams& innovation,
                                   const Eigen::Ref<const Eigen::VectorXd>& returns,
                                   double riskfree, std::optional<double> h1) {
    const auto n = returns.size();
    if (n < 2) throw TooFewPoints("garch_nig_filter: need at least 2 returns");
    GarchFilterResult out;
    out.variance.resize(n);
    out.residuals.resize(n);
    double h = h1.value_or(variance(returns));
    if (!(h > 0.0)) throw InvalidParams("garch_nig_filter: initial variance must be positive");
    double ll = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) {
        // The squared shock (r + h/2 - ...)^2 feeds back quadratically in h,
        // so inadmissible parameter points can blow the recursion up.
        if (!std::isfinite(h)) {
            throw NumericError("garch_nig_filter: variance recursion diverged");
        }
        const double vol = std::sqrt(h);
        const double eps = (returns(t) - riskfree - lambda0 * vol + 0.5 * h) / vol;
        out.variance(t) = h;
        out.residuals(t) = eps;
        ll += nig_log_pdf(eps, innovation) - std::log(vol);
        h = garch_variance_recursion(garch, h, eps);
    }
    out.h_next = h;
    out.loglik = ll;
    return out;
}

GarchNigSimulation simulate_garch_nig(const GarchParams& garch, double lambda0,
                                      const GhParams& innovation, double riskfree, int n,
                                      double h1, RngStream& rng) {
    if (n < 1) throw InvalidParams("simulate_garch_nig: n must be >= 1");
    if (!(h1 > 0.0)) throw InvalidParams("simulate_garch_nig: h1 must be positive");
    GarchNigSimulation sim;
    sim.returns.resize(n);
    sim.variance.resize(n);
    sim.innovations.resize(n);
    double h = h1;
    for (int t = 0; t < n; ++t) {
        const double eps = nig_sample(rng, innovation);
        const double vol = std::sqrt(h);
        sim.variance(t) = h;
        sim.innovations(t) = eps;
        sim.returns(t) = riskfree + lambda0 * vol - 0.5 * h + vol * eps;
        h = garch_variance_recursion(garch, h, eps);
    }
    return sim;
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

// Fit coordinates: (log m, logit persistence, logit share, [lambda0],
// log gamma_eps, beta_eps). a = persistence * share, b = persistence * (1 - share).
struct GarchCoder {
    bool estimate_lambda0 = true;
    double pinned_lambda0 = 0.0;

    int dim() const { return estimate_lambda0 ? 6 : 5; }

    void decode(const Eigen::VectorXd& v, GarchParams& g, double& lambda0,
                GhParams& innovation) const {
        g.m = std::exp(std::clamp(v(0), -40.0, 20.0));
        const double persistence = sigmoid(v(1)) * 0.999999;
        const double share = sigmoid(v(2));
        g.a = persistence * share;
        g.b = persistence * (1.0 - share);
        int k = 3;
        lambda0 = estimate_lambda0 ? v(k++) : pinned_lambda0;
        const double gamma = std::exp(std::clamp(v(k), -8.0, 26.0));
        const double beta = v(k + 1);
        innovation = nig_standardized(std::hypot(gamma, beta), beta);
    }

    Eigen::VectorXd encode(const GarchParams& g, double lambda0,
                           double gamma_eps, double beta_eps) const {
        Eigen::VectorXd v(dim());
        v(0) = std::log(std::max(g.m, 1e-30));
        const double persistence = std::clamp(g.a + g.b, 1e-6, 0.999);
        v(1) = logit(persistence);
        v(2) = logit(std::clamp(g.a / persistence, 1e-6, 1.0 - 1e-6));
        int k = 3;
        if (estimate_lambda0) v(k++) = lambda0;
        v(k) = std::log(gamma_eps);
        v(k + 1) = beta_eps;
        return v;
    }
};

}  // namespace

GarchNigModel fit_garch_nig_returns(const Eigen::Ref<const Eigen::VectorXd>& returns,
                                    double riskfree, const GarchFitOptions& options) {
    if (returns.size() < 100) {
        throw TooFewPoints("fit_garch_nig: need at least 100 observations");
    }

    GarchCoder coder;
    coder.estimate_lambda0 = !options.pinned_lambda0.has_value();
    coder.pinned_lambda0 = options.pinned_lambda0.value_or(0.0);

    const double sample_var = variance(returns);
    const auto negll = [&](const Eigen::VectorXd& v) -> double {
        GarchParams g;
        double lambda0;
        GhParams innovation;
        try {
            coder.decode(v, g, lambda0, innovation);
            return -garch_nig_filter(g, lambda0, innovation, returns, riskfree, options.h1)
                        .loglik;
        } catch (const NumericError&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    // Heavy-tailed data can make aggressive starts inadmissible (diverging
    // variance recursion), so probe a ladder from persistent to nearly
    // constant-variance and start from the best admissible point.
    const GarchParams ladder[] = {{0.1 * sample_var, 0.8, 0.1},
                                  {0.4 * sample_var, 0.5, 0.1},
                                  {0.75 * sample_var, 0.2, 0.05},
                                  {0.94 * sample_var, 0.05, 0.01}};
    Eigen::VectorXd x0;
    double f0 = std::numeric_limits<double>::infinity();
    for (const GarchParams& start : ladder) {
        for (const double gamma_eps : {2.0, 6.0}) {
            const Eigen::VectorXd candidate = coder.encode(start, 0.0, gamma_eps, 0.0);
            const double f = negll(candidate);
            if (f < f0) {
                f0 = f;
                x0 = candidate;
            }
        }
    }
    if (!std::isfinite(f0)) {
        throw NumericError("fit_garch_nig: no admissible starting point for this series");
    }

    SimplexOptions simplex;
    simplex.max_iterations = options.max_iterations;
    simplex.f_tolerance = 1e-9;
    simplex.restarts = 2;
    const SimplexResult opt = minimize_simplex(negll, x0, simplex);

    GarchNigModel model;
    coder.decode(opt.x, model.garch, model.lambda0, model.innovation);
    model.riskfree = riskfree;
    const GarchFilterResult filt = garch_nig_filter(model.garch, model.lambda0,
                                                    model.innovation, returns, riskfree,
                                                    options.h1);
    model.variance = filt.variance;
    model.residuals = filt.residuals;
    model.h_forecast = filt.h_next;
    model.loglik = filt.loglik;
    model.converged = opt.converged;
    model.stationary = model.garch.stationary();
    return model;
}

GarchNigModel fit_garch_nig(const Eigen::Ref<const Eigen::VectorXd>& series,
                            double riskfree, const GarchFitOptions& options) {
    if (series.size() < 101) throw TooFewPoints("fit_garch_nig: need at least 101 points");
    if ((series.array() <= 0.0).any()) {
        throw InvalidParams("fit_garch_nig: series must be strictly positive (floor it first)");
    }
    const Eigen::VectorXd logs = series.array().log();
    const Eigen::VectorXd returns = logs.tail(logs.size() - 1) - logs.head(logs.size() - 1);
    return fit_garch_nig_returns(returns, riskfree, options);
}

LjungBoxResult ljung_box(const Eigen::Ref<const Eigen::VectorXd>& series, int lags) {
    const auto n = series.size();
    if (lags < 1) throw TooFewPoints("ljung_box: need at least one lag");
    if (n <= lags) throw TooFewPoints("ljung_box: series shorter than lag count");
    const double nd = static_cast<double>(n);
    double q = 0.0;
    for (int k = 1; k <= lags; ++k) {
        const double rho = autocorrelation(series, k);
        q += rho * rho / (nd - k);
    }
    q *= nd * (nd + 2.0);
    LjungBoxResult result;
    result.q = q;
    result.lags = lags;
    result.p_value = chi_square_sf(q, static_cast<double>(lags));
    return result;
}

namespace {

struct ArmaGarchEval {
    Eigen::VectorXd residuals;
    Eigen::VectorXd variance;
    double loglik = 0.0;
};

ArmaGarchEval arma_garch_t_filter(double c, double ar1, double ma1, double omega,
                                  double alpha1, double beta1, double nu,
                                  const Eigen::Ref<const Eigen::VectorXd>& y) {
    const auto n = y.size();
    ArmaGarchEval out;
    out.residuals.resize(n);
    out.variance.resize(n);
    const double mean_y = y.mean();
    double h = variance(y);
    double prev_e = 0.0;
    double prev_y = mean_y;
    double ll = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) {
        const double mu_t = c + ar1 * prev_y + ma1 * prev_e;
        const double e = y(t) - mu_t;
        const double vol = std::sqrt(h);
        const double z = e / vol;
        out.variance(t) = h;
        out.residuals(t) = z;
        ll += student_t_std_log_pdf(z, nu) - std::log(vol);
        h = omega + alpha1 * e * e + beta1 * h;
        prev_e = e;
        prev_y = y(t);
    }
    out.loglik = ll;
    return out;
}

}  // namespace

ArmaGarchTModel fit_arma_garch_t(const Eigen::Ref<const Eigen::VectorXd>& series,
                                 int lb_lags) {
    if (series.size() < 100) {
        throw TooFewPoints("fit_arma_garch_t: need at least 100 observations");
    }
    const double sample_var = variance(series);
    if (!(sample_var > 0.0)) {
        throw TooFewPoints("fit_arma_garch_t: constant series");
    }

    // Coordinates: c, atanh-style ar1/ma1, log omega, logit persistence,
    // logit share, log(nu - 2). `with_arma` pins ar1 = ma1 = 0.
    const auto decode = [&](const Eigen::VectorXd& v, bool with_arma, double& c,
                            double& ar1, double& ma1, double& omega, double& alpha1,
                            double& beta1, double& nu) {
        int k = 0;
        c = v(k++);
        ar1 = with_arma ? std::tanh(v(k++)) : 0.0;
        ma1 = with_arma ? std::tanh(v(k++)) : 0.0;
        omega = std::exp(std::clamp(v(k++), -40.0, 20.0));
        const double persistence = sigmoid(v(k++)) * 0.999999;
        const double share = sigmoid(v(k++));
        alpha1 = persistence * share;
        beta1 = persistence * (1.0 - share);
        nu = 2.0 + std::exp(std::clamp(v(k), -6.0, 8.0));
    };

    const auto make_negll = [&](bool with_arma) {
        return [&, with_arma](const Eigen::VectorXd& v) -> double {
            double c, ar1, ma1, omega, alpha1, beta1, nu;
            decode(v, with_arma, c, ar1, ma1, omega, alpha1, beta1, nu);
            try {
                return -arma_garch_t_filter(c, ar1, ma1, omega, alpha1, beta1, nu, series)
                            .loglik;
            } catch (const NumericError&) {
                return std::numeric_limits<double>::infinity();
            }
        };
    };

    SimplexOptions simplex;
    simplex.max_iterations = 4000;
    simplex.f_tolerance = 1e-9;
    simplex.restarts = 2;

    Eigen::VectorXd x_full(7);
    x_full << series.mean(), 0.0, 0.0, std::log(0.2 * sample_var), logit(0.5), logit(0.2),
        std::log(6.0 - 2.0);
    const SimplexResult full = minimize_simplex(make_negll(true), x_full, simplex);

    Eigen::VectorXd x_rest(5);
    x_rest << series.mean(), std::log(0.2 * sample_var), logit(0.5), logit(0.2),
        std::log(6.0 - 2.0);
    const SimplexResult restricted = minimize_simplex(make_negll(false), x_rest, simplex);

    // A cancelling AR/MA pair makes white noise a likelihood ridge; keep
    // the ARMA terms only when they buy more than 3 log-likelihood units
    // over the restricted model.
    const bool use_full = full.f < restricted.f - 3.0;
    const SimplexResult& opt = use_full ? full : restricted;
    if (!std::isfinite(opt.f)) {
        throw NumericError("fit_arma_garch_t: no admissible parameter point");
    }

    ArmaGarchTModel model;
    double nu;
    decode(opt.x, use_full, model.c, model.ar1, model.ma1, model.omega, model.alpha1,
           model.beta1, nu);
    model.t_params.nu = nu;
    const ArmaGarchEval eval = arma_garch_t_filter(model.c, model.ar1, model.ma1,
                                                   model.omega, model.alpha1, model.beta1,
                                                   nu, series);
    model.residuals = eval.residuals;
    model.variance = eval.variance;
    model.loglik = eval.loglik;
    model.converged = opt.converged;
    model.residual_lb = ljung_box(model.residuals, lb_lags);
    return model;
}

}  // namespace ndi
