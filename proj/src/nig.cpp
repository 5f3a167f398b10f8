#include "ndi/nig.hpp"

#include "ndi/errors.hpp"
#include "ndi/simplex.hpp"
#include "ndi/special.hpp"
#include "ndi/stats.hpp"

#include <algorithm>
#include <cmath>

namespace ndi {

double GhParams::gamma() const { return std::sqrt(alpha * alpha - beta * beta); }

bool GhParams::valid() const {
    return std::isfinite(alpha) && std::isfinite(beta) && std::isfinite(delta) &&
           std::isfinite(mu) && alpha > 0.0 && delta > 0.0 && alpha > std::abs(beta);
}

GhParams nig_params(double alpha, double beta, double delta, double mu) {
    GhParams p{-0.5, alpha, beta, delta, mu};
    if (!p.valid()) throw InvalidParams("nig_params: require alpha > |beta|, delta > 0");
    return p;
}

GhParams nig_standardized(double alpha, double beta) {
    if (!(alpha > std::abs(beta))) {
        throw InvalidParams("nig_standardized: require alpha > |beta|");
    }
    const double gamma = std::sqrt(alpha * alpha - beta * beta);
    const double delta = gamma * gamma * gamma / (alpha * alpha);
    const double mu = -delta * beta / gamma;
    return GhParams{-0.5, alpha, beta, delta, mu};
}

double nig_mean(const GhParams& p) { return p.mu + p.delta * p.beta / p.gamma(); }

double nig_variance(const GhParams& p) {
    const double g = p.gamma();
    return p.delta * p.alpha * p.alpha / (g * g * g);
}

double nig_log_pdf(double x, const GhParams& p) {
    if (!p.valid()) throw InvalidParams("nig_log_pdf: invalid parameters");
    const double dx = x - p.mu;
    const double r = dx / p.delta;
    const double root = std::sqrt(1.0 + r * r);
    const double g = p.delta * root;
    // delta*gamma - alpha*g, written so the near-Gaussian limit (huge
    // alpha) does not cancel catastrophically.
    const double tilt = -p.delta * (p.beta * p.beta + p.alpha * p.alpha * r * r) /
                        (p.gamma() + p.alpha * root);
    return std::log(p.alpha * p.delta / M_PI) + tilt + p.beta * dx +
           std::log(bessel_k1_scaled(p.alpha * g)) - std::log(g);
}

double nig_pdf(double x, const GhParams& p) { return std::exp(nig_log_pdf(x, p)); }

double gh_log_pdf(double x, const GhParams& p) {
    if (p.lambda == -0.5) return nig_log_pdf(x, p);
    if (!p.valid()) throw InvalidParams("gh_log_pdf: invalid parameters");
    const double dx = x - p.mu;
    const double g = std::sqrt(p.delta * p.delta + dx * dx);
    const double norm = p.lambda * std::log(p.gamma() / p.delta) -
                        0.5 * std::log(2.0 * M_PI) +
                        (0.5 - p.lambda) * std::log(p.alpha) -
                        log_bessel_k(p.lambda, p.delta * p.gamma());
    return norm + (p.lambda - 0.5) * std::log(g) +
           log_bessel_k(p.lambda - 0.5, p.alpha * g) + p.beta * dx;
}

double gh_pdf(double x, const GhParams& p) { return std::exp(gh_log_pdf(x, p)); }

double gh_log_mgf(double u, const GhParams& p) {
    if (!p.valid()) throw InvalidParams("gh_log_mgf: invalid parameters");
    const double shifted = p.beta + u;
    if (!(std::abs(shifted) < p.alpha)) {
        throw OutsideDomain("gh_log_mgf: |beta + u| >= alpha");
    }
    const double g0 = p.gamma();
    const double g1 = std::sqrt(p.alpha * p.alpha - shifted * shifted);
    if (p.lambda == -0.5) {
        // delta*(gamma - g1) = delta*u*(2 beta + u)/(gamma + g1), stable
        // when gamma and g1 are both large and nearly equal.
        return p.mu * u + p.delta * u * (2.0 * p.beta + u) / (g0 + g1);
    }
    return p.mu * u + p.lambda * (std::log(g0) - std::log(g1)) +
           log_bessel_k(p.lambda, p.delta * g1) - log_bessel_k(p.lambda, p.delta * g0);
}

double gh_mgf(double u, const GhParams& p) { return std::exp(gh_log_mgf(u, p)); }

double nig_sample(RngStream& rng, const GhParams& p) {
    if (!p.valid()) throw InvalidParams("nig_sample: invalid parameters");
    const double w = rng.next_inverse_gaussian(p.delta / p.gamma(), p.delta * p.delta);
    return p.mu + p.beta * w + std::sqrt(w) * rng.next_normal();
}

Eigen::VectorXd nig_sample_n(RngStream& rng, const GhParams& p, int n) {
    if (n < 1) throw InvalidParams("nig_sample_n: n must be >= 1");
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i) out(i) = nig_sample(rng, p);
    return out;
}

double nig_loglik(const Eigen::Ref<const Eigen::VectorXd>& data, const GhParams& p) {
    double ll = 0.0;
    for (Eigen::Index i = 0; i < data.size(); ++i) ll += nig_log_pdf(data(i), p);
    return ll;
}

namespace {

// Unconstrained fit coordinates: (log gamma, beta, log delta, mu) with
// alpha = sqrt(gamma^2 + beta^2), smooth across beta = 0.
GhParams decode_nig(const Eigen::VectorXd& v) {
    const double gamma = std::exp(std::min(v(0), 26.0));
    const double beta = v(1);
    const double alpha = std::hypot(gamma, beta);
    const double delta = std::exp(std::min(v(2), 26.0));
    return GhParams{-0.5, alpha, beta, delta, v(3)};
}

Eigen::VectorXd encode_nig(const GhParams& p) {
    Eigen::VectorXd v(4);
    v(0) = std::log(p.gamma());
    v(1) = p.beta;
    v(2) = std::log(p.delta);
    v(3) = p.mu;
    return v;
}

GhParams moment_start(const Eigen::Ref<const Eigen::VectorXd>& data) {
    const double m = mean(data);
    const double v = variance(data);
    double kurt = excess_kurtosis(data);
    double skew = skewness(data);
    if (!(kurt > 0.05)) kurt = 0.05;
    // Symmetric-case inversion of var = delta/alpha, exkurt = 3/(delta alpha),
    // then a skew-driven beta nudge.
    const double delta = std::sqrt(3.0 * v / kurt);
    const double alpha = delta / v;
    double beta = skew * alpha * std::sqrt(delta * alpha) / 3.0;
    beta = std::clamp(beta, -0.8 * alpha, 0.8 * alpha);
    const double gamma = std::sqrt(alpha * alpha - beta * beta);
    return GhParams{-0.5, alpha, beta, delta, m - delta * beta / gamma};
}

}  // namespace

NigFit nig_fit_mle(const Eigen::Ref<const Eigen::VectorXd>& data,
                   std::optional<GhParams> init) {
    if (data.size() < 50) throw TooFewPoints("nig_fit_mle: need at least 50 observations");

    const GhParams start = init.value_or(moment_start(data));
    if (!start.valid()) throw InvalidParams("nig_fit_mle: invalid initial parameters");

    const auto negll = [&data](const Eigen::VectorXd& v) {
        return -nig_loglik(data, decode_nig(v));
    };

    SimplexOptions options;
    options.max_iterations = 2000;
    options.f_tolerance = 1e-9;
    options.restarts = 2;
    const SimplexResult opt = minimize_simplex(negll, encode_nig(start), options);

    NigFit fit;
    fit.params = decode_nig(opt.x);
    fit.loglik = -opt.f;
    fit.converged = opt.converged;
    fit.evaluations = opt.evaluations;

    // Central-difference gradient of the log-likelihood in fit coordinates.
    const double h = 1e-5;
    double sq = 0.0;
    for (int i = 0; i < 4; ++i) {
        Eigen::VectorXd hi = opt.x, lo = opt.x;
        hi(i) += h;
        lo(i) -= h;
        const double g = (negll(lo) - negll(hi)) / (2.0 * h);
        sq += g * g;
    }
    fit.grad_norm = std::sqrt(sq);
    return fit;
}

double student_t_std_log_pdf(double x, double nu) {
    if (!(nu > 2.0)) throw InvalidParams("student_t_std_log_pdf: nu must exceed 2");
    const double s = nu - 2.0;
    return std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
           0.5 * std::log(M_PI * s) - 0.5 * (nu + 1.0) * std::log1p(x * x / s);
}

}  // namespace ndi
