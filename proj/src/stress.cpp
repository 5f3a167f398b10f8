#include "ndi/stress.hpp"

#include "ndi/errors.hpp"
#include "ndi/index.hpp"
#include "ndi/special.hpp"
#include "ndi/stats.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace ndi {

double BivNigParams::gamma_tilde() const {
    const double q = alpha * alpha - beta.dot(gamma_matrix * beta);
    return q > 0.0 ? std::sqrt(q) : 0.0;
}

bool BivNigParams::valid() const {
    if (!(alpha > 0.0) || !(delta > 0.0)) return false;
    if (std::abs(gamma_matrix(0, 1) - gamma_matrix(1, 0)) > 1e-9) return false;
    const double det = gamma_matrix.determinant();
    if (!(det > 0.0) || !(gamma_matrix(0, 0) > 0.0)) return false;
    return alpha * alpha > beta.dot(gamma_matrix * beta);
}

Eigen::Vector2d BivNigParams::mean() const {
    return mu + (delta / gamma_tilde()) * (gamma_matrix * beta);
}

Eigen::Matrix2d BivNigParams::covariance() const {
    // E[W] Gamma + Var(W) (Gamma beta)(Gamma beta)', W the IG mixing law.
    const double gt = gamma_tilde();
    const double ew = delta / gt;
    const double vw = delta / (gt * gt * gt);
    const Eigen::Vector2d skew = gamma_matrix * beta;
    return ew * gamma_matrix + vw * skew * skew.transpose();
}

double biv_nig_log_pdf(const Eigen::Vector2d& x, const BivNigParams& p) {
    if (!p.valid()) throw InvalidParams("biv_nig_log_pdf: invalid parameters");
    const double gt = p.gamma_tilde();
    const Eigen::Vector2d dx = x - p.mu;
    const double q = dx.dot(p.gamma_matrix.inverse() * dx);
    const double ratio = q / (p.delta * p.delta);
    const double root = std::sqrt(1.0 + ratio);
    const double s = p.delta * root;
    // delta*gamma_tilde - alpha*s, stable in the near-Gaussian limit.
    const double tilt = -p.delta *
                        (p.beta.dot(p.gamma_matrix * p.beta) + p.alpha * p.alpha * ratio) /
                        (gt + p.alpha * root);
    // log K_{1/2}(z) = 0.5 log(pi/(2z)) - z; its -z part joins `tilt`.
    const double log_norm = -0.5 * std::log(gt / p.delta) + 1.5 * std::log(p.alpha) -
                            std::log(2.0 * M_PI) -
                            0.5 * std::log(M_PI / (2.0 * p.delta * gt));
    const double c = p.alpha * s;
    const double log_k32_scaled = 0.5 * std::log(M_PI / (2.0 * c)) + std::log1p(1.0 / c);
    return log_norm + tilt + p.beta.dot(dx) - 1.5 * std::log(s) + log_k32_scaled;
}

Eigen::MatrixX2d simulate_bivariate_nig(const BivNigParams& p, int n, std::uint64_t seed) {
    if (!p.valid()) throw InvalidParams("simulate_bivariate_nig: invalid parameters");
    if (n < 1) throw InvalidParams("simulate_bivariate_nig: n must be >= 1");
    const Eigen::LLT<Eigen::Matrix2d> llt(p.gamma_matrix);
    if (llt.info() != Eigen::Success) {
        throw DegenerateDispersion("simulate_bivariate_nig: dispersion not positive definite");
    }
    const Eigen::Matrix2d chol = llt.matrixL();
    const Eigen::Vector2d skew = p.gamma_matrix * p.beta;
    const double gt = p.gamma_tilde();

    RngStream rng = RngStream::child(seed, 0x62766e6967ULL);
    Eigen::MatrixX2d out(n, 2);
    for (int i = 0; i < n; ++i) {
        const double w = rng.next_inverse_gaussian(p.delta / gt, p.delta * p.delta);
        const Eigen::Vector2d z(rng.next_normal(), rng.next_normal());
        const Eigen::Vector2d x = p.mu + w * skew + std::sqrt(w) * (chol * z);
        out(i, 0) = x(0);
        out(i, 1) = x(1);
    }
    return out;
}

namespace {

struct MixtureState {
    Eigen::Vector2d mu;
    Eigen::Vector2d skew;  // Gamma * beta
    Eigen::Matrix2d sigma;
    double chi;  // delta^2
    double psi;  // gamma_tilde^2
};

BivNigParams to_params(const MixtureState& st) {
    BivNigParams p;
    p.mu = st.mu;
    p.gamma_matrix = st.sigma;
    p.beta = st.sigma.inverse() * st.skew;
    p.delta = std::sqrt(st.chi);
    p.alpha = std::sqrt(st.psi + p.beta.dot(st.sigma * p.beta));
    return p;
}

double state_loglik(const Eigen::Ref<const Eigen::MatrixX2d>& data, const MixtureState& st) {
    const BivNigParams p = to_params(st);
    double ll = 0.0;
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        ll += biv_nig_log_pdf(data.row(i).transpose(), p);
    }
    return ll;
}

}  // namespace

BivNigFit fit_bivariate_nig(const Eigen::Ref<const Eigen::MatrixX2d>& data,
                            const BivNigFitOptions& options) {
    const auto n = data.rows();
    if (n < 100) throw TooFewPoints("fit_bivariate_nig: need at least 100 pairs");

    const Eigen::Vector2d sample_mean = data.colwise().mean();
    const Eigen::Matrix2d sample_cov = covariance_matrix(data);
    const double cov_det = sample_cov.determinant();
    if (!(cov_det > 0.0)) {
        throw DegenerateDispersion("fit_bivariate_nig: sample covariance is singular");
    }

    RngStream restart_rng = RngStream::child(options.seed, 0x656dULL);
    BivNigFit best;
    best.loglik = -std::numeric_limits<double>::infinity();

    for (int restart = 0; restart < options.restarts; ++restart) {
        MixtureState st;
        const double scale = std::sqrt(cov_det);
        const double jitter = restart == 0 ? 1.0 : std::exp(0.3 * restart_rng.next_normal());
        st.mu = sample_mean;
        st.sigma = sample_cov / scale;
        st.skew = Eigen::Vector2d::Zero();
        if (restart > 0) {
            st.mu += 0.1 * std::sqrt(sample_cov(0, 0)) * restart_rng.next_normal() *
                     Eigen::Vector2d::Ones();
            st.skew = 0.2 * restart_rng.next_normal() * Eigen::Vector2d::Ones();
        }
        // E[W] = delta/gamma_tilde matches the mixture scale; delta*gamma_tilde
        // starts at `shape` and is re-estimated by EM.
        const double shape = jitter;
        st.chi = scale * shape;
        st.psi = shape / scale;

        double prev_ll = -std::numeric_limits<double>::infinity();
        bool converged = false;
        bool failed = false;
        std::vector<double> trace;
        int iter = 0;
        for (; iter < options.max_iterations; ++iter) {
            const BivNigParams p = to_params(st);
            if (!p.valid()) {
                failed = true;
                break;
            }
            // E-step: posterior GIG(-3/2, delta^2 + q_i, alpha^2) moments in
            // closed form, c = alpha * sqrt(delta^2 + q_i).
            const Eigen::Matrix2d sigma_inv = st.sigma.inverse();
            Eigen::VectorXd eta(n), zeta(n);
            for (Eigen::Index i = 0; i < n; ++i) {
                const Eigen::Vector2d dx = data.row(i).transpose() - st.mu;
                const double q = dx.dot(sigma_inv * dx);
                const double s = std::sqrt(st.chi + q);
                const double c = p.alpha * s;
                eta(i) = s * s / (c + 1.0);  // (s/alpha) K_{1/2}(c)/K_{3/2}(c)
                zeta(i) = (p.alpha / s) * (c * c + 3.0 * c + 3.0) / (c * c + c);
            }
            const double eta_bar = eta.mean();
            const double zeta_bar = zeta.mean();
            const double denom = zeta_bar * eta_bar - 1.0;
            if (!(denom > 1e-12)) {
                failed = true;
                break;
            }

            // M-step in mixture coordinates.
            Eigen::Vector2d x_zeta = Eigen::Vector2d::Zero();
            for (Eigen::Index i = 0; i < n; ++i) {
                x_zeta += zeta(i) * data.row(i).transpose();
            }
            x_zeta /= static_cast<double>(n);
            const Eigen::Vector2d x_bar = data.colwise().mean();
            const Eigen::Vector2d skew = (zeta_bar * x_bar - x_zeta) / denom;
            const Eigen::Vector2d mu = (x_zeta - skew) / zeta_bar;
            Eigen::Matrix2d sigma = Eigen::Matrix2d::Zero();
            for (Eigen::Index i = 0; i < n; ++i) {
                const Eigen::Vector2d dx = data.row(i).transpose() - mu;
                sigma += zeta(i) * dx * dx.transpose();
            }
            sigma /= static_cast<double>(n);
            sigma -= eta_bar * skew * skew.transpose();
            const double det = sigma.determinant();
            if (!(det > 0.0) || !(sigma(0, 0) > 0.0)) {
                failed = true;
                break;
            }
            // Mixing-law update, then the unit-determinant rescaling of the
            // dispersion (an exact reparameterization, likelihood unchanged).
            double chi = eta_bar / denom;
            double psi = chi / (eta_bar * eta_bar);
            const double c_scale = std::sqrt(det);
            st.mu = mu;
            st.sigma = sigma / c_scale;
            st.skew = skew / c_scale;
            st.chi = chi * c_scale;
            st.psi = psi / c_scale;

            const double ll = state_loglik(data, st);
            trace.push_back(ll);
            if (std::isfinite(prev_ll) &&
                std::abs(ll - prev_ll) <= options.tolerance * (std::abs(prev_ll) + 1e-30)) {
                prev_ll = ll;
                converged = true;
                break;
            }
            prev_ll = ll;
        }
        if (failed) continue;
        if (prev_ll > best.loglik) {
            best.params = to_params(st);
            best.loglik = prev_ll;
            best.converged = converged;
            best.iterations = iter;
            best.ll_trace = std::move(trace);
        }
    }

    if (!std::isfinite(best.loglik)) {
        throw DegenerateDispersion("fit_bivariate_nig: every EM start collapsed");
    }
    return best;
}

double covar(const Eigen::Ref<const Eigen::VectorXd>& x,
             const Eigen::Ref<const Eigen::VectorXd>& y, double q, int min_conditional) {
    if (x.size() != y.size()) throw InvalidParams("covar: length mismatch");
    if (!(q > 0.0 && q < 1.0)) throw InvalidParams("covar: q outside (0, 1)");
    const double var_x = quantile_type7(x, q);
    std::vector<double> cond;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (x(i) <= var_x) cond.push_back(y(i));
    }
    if (static_cast<int>(cond.size()) < min_conditional) {
        throw TooFewConditionalScenarios("covar: conditional subsample of " +
                                         std::to_string(cond.size()) + " < " +
                                         std::to_string(min_conditional));
    }
    const Eigen::Map<const Eigen::VectorXd> cond_v(cond.data(),
                                                   static_cast<Eigen::Index>(cond.size()));
    return quantile_type7(cond_v, q);
}

double coes(const Eigen::Ref<const Eigen::VectorXd>& x,
            const Eigen::Ref<const Eigen::VectorXd>& y, double q, int min_conditional) {
    const double xi = covar(x, y, q, min_conditional);
    const double var_x = quantile_type7(x, q);
    double sum = 0.0;
    int count = 0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (x(i) <= var_x && y(i) <= xi) {
            sum += y(i);
            ++count;
        }
    }
    if (count == 0) throw TooFewConditionalScenarios("coes: empty deeper tail");
    return sum / count;
}

double coetl(const Eigen::Ref<const Eigen::VectorXd>& x,
             const Eigen::Ref<const Eigen::VectorXd>& y, double q, int min_conditional,
             int min_joint) {
    if (x.size() != y.size()) throw InvalidParams("coetl: length mismatch");
    if (!(q > 0.0 && q < 1.0)) throw InvalidParams("coetl: q outside (0, 1)");
    const double var_x = quantile_type7(x, q);
    const double var_y = quantile_type7(y, q);
    int cond = 0;
    double sum = 0.0;
    int joint = 0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (x(i) <= var_x) {
            ++cond;
            if (y(i) <= var_y) {
                sum += y(i);
                ++joint;
            }
        }
    }
    if (cond < min_conditional) {
        throw TooFewConditionalScenarios("coetl: conditional subsample too small");
    }
    if (joint < min_joint) {
        throw EmptyJointTail("coetl: joint tail has " + std::to_string(joint) +
                             " scenarios (need " + std::to_string(min_joint) + ")");
    }
    return sum / joint;
}

namespace {

StressLevelRow bootstrap_row(const Eigen::MatrixX2d& sims, double level,
                             const StressOptions& options) {
    StressLevelRow row;
    row.level = level;
    const auto x = sims.col(0);
    const auto y = sims.col(1);
    row.covar = covar(x, y, level, options.min_conditional);
    row.coes = coes(x, y, level, options.min_conditional);
    row.coetl = coetl(x, y, level, options.min_conditional, options.min_joint);

    const auto n = sims.rows();
    std::vector<double> c1, c2, c3;
    for (int rep = 0; rep < options.bootstrap_reps; ++rep) {
        RngStream rng = RngStream::child(options.seed,
                                         0xb00757ULL + static_cast<std::uint64_t>(rep));
        Eigen::VectorXd bx(n), by(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto j = static_cast<Eigen::Index>(rng.next_u64() % static_cast<std::uint64_t>(n));
            bx(i) = sims(j, 0);
            by(i) = sims(j, 1);
        }
        try {
            c1.push_back(covar(bx, by, level, options.min_conditional));
            c2.push_back(coes(bx, by, level, options.min_conditional));
            c3.push_back(coetl(bx, by, level, options.min_conditional, options.min_joint));
        } catch (const DataError&) {
            // thin resample, skip
        }
    }
    const auto se = [](const std::vector<double>& v) {
        if (v.size() < 8) return std::numeric_limits<double>::quiet_NaN();
        const Eigen::Map<const Eigen::VectorXd> m(v.data(),
                                                  static_cast<Eigen::Index>(v.size()));
        return stddev(m);
    };
    row.covar_se = se(c1);
    row.coes_se = se(c2);
    row.coetl_se = se(c3);
    return row;
}

}  // namespace

StressReport stress_pipeline(const Eigen::Ref<const Eigen::VectorXd>& target_monthly,
                             const Eigen::Ref<const Eigen::VectorXd>& factor_levels,
                             const StressOptions& options) {
    const Eigen::VectorXd factor_diff = difference(factor_levels);
    if (factor_diff.size() != target_monthly.size()) {
        throw DataError("stress_pipeline: factor and target series are not aligned (" +
                        std::to_string(factor_diff.size()) + " vs " +
                        std::to_string(target_monthly.size()) + ")");
    }

    StressReport report;
    report.factor_lb = ljung_box(factor_diff, options.lb_lags);
    report.target_lb = ljung_box(target_monthly, options.lb_lags);
    report.corr_raw = correlation(factor_diff, target_monthly);

    const ArmaGarchTModel factor_model = fit_arma_garch_t(factor_diff, options.lb_lags);
    const ArmaGarchTModel target_model = fit_arma_garch_t(target_monthly, options.lb_lags);
    report.factor_t_nu = factor_model.t_params.nu;
    report.target_t_nu = target_model.t_params.nu;
    report.corr_residual = correlation(factor_model.residuals, target_model.residuals);

    Eigen::MatrixX2d pairs(factor_model.residuals.size(), 2);
    pairs.col(0) = factor_model.residuals;
    pairs.col(1) = target_model.residuals;
    BivNigFitOptions fit_options;
    fit_options.seed = options.seed;
    report.joint = fit_bivariate_nig(pairs, fit_options);

    report.simulated = simulate_bivariate_nig(report.joint.params, options.n_sims,
                                              options.seed);
    for (const double level : options.levels) {
        report.rows.push_back(bootstrap_row(report.simulated, level, options));
    }
    return report;
}

}  // namespace ndi
