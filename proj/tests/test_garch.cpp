#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ndi/errors.hpp"
#include "ndi/garch.hpp"
#include "ndi/nig.hpp"
#include "ndi/rng.hpp"
#include "ndi/stats.hpp"

#include <cmath>

using namespace ndi;

TEST_CASE("variance recursion basics") {
    CHECK(garch_variance_recursion({0.3, 0.0, 0.5}, 2.0, 0.0) == doctest::Approx(0.3));
    CHECK(garch_variance_recursion({0.1, 0.5, 0.3}, 1.0, 1.0) == doctest::Approx(0.9));

    // fixed point at unit mean-square innovation: h* = m / (1 - a - b)
    const GarchParams p{0.2, 0.6, 0.2};
    const double h_star = p.m / (1.0 - p.a - p.b);
    CHECK(garch_variance_recursion(p, h_star, 1.0) == doctest::Approx(h_star));
}

TEST_CASE("filter determinism and positivity") {
    const GarchParams p{0.05, 0.8, 0.1};
    const GhParams eps_law = nig_standardized(3.0, 0.2);
    RngStream rng(17);
    const GarchNigSimulation sim = simulate_garch_nig(p, 0.1, eps_law, 0.0, 3000, 1.0, rng);

    const GarchFilterResult f1 = garch_nig_filter(p, 0.1, eps_law, sim.returns, 0.0);
    const GarchFilterResult f2 = garch_nig_filter(p, 0.1, eps_law, sim.returns, 0.0);
    CHECK((f1.residuals - f2.residuals).cwiseAbs().maxCoeff() == 0.0);
    CHECK(f1.variance.minCoeff() > 0.0);
}

TEST_CASE("round trip and variance positivity across random parameter draws") {
    RngStream meta(1234);
    for (int trial = 0; trial < 50; ++trial) {
        const double persistence = 0.98 * meta.next_uniform();
        const double share = meta.next_uniform();
        const GarchParams p{0.01 + 0.5 * meta.next_uniform(), persistence * share,
                            persistence * (1.0 - share)};
        const double lambda0 = meta.next_normal() * 0.3;
        const double gamma_eps = std::exp(0.8 * meta.next_normal() + 0.5);
        const double beta_eps = meta.next_normal();
        const GhParams eps_law = nig_standardized(std::hypot(gamma_eps, beta_eps), beta_eps);
        const double h1 = p.m / (1.0 - p.a - p.b);

        RngStream rng = RngStream::child(777, static_cast<std::uint64_t>(trial));
        const GarchNigSimulation sim =
            simulate_garch_nig(p, lambda0, eps_law, 0.0, 300, h1, rng);
        const GarchFilterResult filt =
            garch_nig_filter(p, lambda0, eps_law, sim.returns, 0.0, h1);
        CHECK(filt.variance.minCoeff() > 0.0);
        CHECK((filt.residuals - sim.innovations).cwiseAbs().maxCoeff() <
              1e-10 * (1.0 + sim.innovations.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("filter-simulate round trip recovers the innovations") {
    const GarchParams p{0.05, 0.9, 0.05};
    const GhParams eps_law = nig_standardized(5.0, -0.4);
    const double h1 = p.m / (1.0 - p.a - p.b);
    RngStream rng(23);
    const GarchNigSimulation sim =
        simulate_garch_nig(p, 0.25, eps_law, 0.001, 5000, h1, rng);

    const GarchFilterResult filt =
        garch_nig_filter(p, 0.25, eps_law, sim.returns, 0.001, h1);
    CHECK((filt.residuals - sim.innovations).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((filt.variance - sim.variance).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("reported log-likelihood matches an independent recomputation") {
    const GarchParams p{0.1, 0.7, 0.2};
    const GhParams eps_law = nig_standardized(2.5, 0.3);
    RngStream rng(5);
    const GarchNigSimulation sim = simulate_garch_nig(p, 0.0, eps_law, 0.0, 800, 0.5, rng);
    const GarchFilterResult filt = garch_nig_filter(p, 0.0, eps_law, sim.returns, 0.0);

    // plain loop, no shared code with the filter
    double h = variance(sim.returns);
    double ll = 0.0;
    for (Eigen::Index t = 0; t < sim.returns.size(); ++t) {
        const double vol = std::sqrt(h);
        const double eps = (sim.returns(t) - 0.0 - 0.0 * vol + 0.5 * h) / vol;
        ll += nig_log_pdf(eps, eps_law) - 0.5 * std::log(h);
        h = p.m + p.a * h + p.b * h * eps * eps;
    }
    CHECK(filt.loglik == doctest::Approx(ll).epsilon(1e-8));
}

TEST_CASE("joint MLE recovers simulated GARCH coefficients within 10 percent") {
    const GarchParams truth{0.05, 0.9, 0.05};
    const double lambda0 = 0.3;
    const GhParams eps_law = nig_standardized(20.0, 0.0);  // near-Gaussian
    const double h1 = truth.m / (1.0 - truth.a - truth.b);
    RngStream rng(777);
    const GarchNigSimulation sim =
        simulate_garch_nig(truth, lambda0, eps_law, 0.0, 50000, h1, rng);

    const GarchNigModel fit = fit_garch_nig_returns(sim.returns, 0.0);
    CHECK(fit.garch.m == doctest::Approx(truth.m).epsilon(0.10));
    CHECK(fit.garch.a == doctest::Approx(truth.a).epsilon(0.10));
    CHECK(fit.garch.b == doctest::Approx(truth.b).epsilon(0.10));
    CHECK(std::abs(fit.lambda0 - lambda0) < 0.1);
    CHECK(fit.stationary);

    // residual variance near one after fitting
    CHECK(variance(fit.residuals) > 0.8);
    CHECK(variance(fit.residuals) < 1.2);

    // stored residuals equal a fresh filter pass with the same parameters
    const GarchFilterResult refilt = garch_nig_filter(
        fit.garch, fit.lambda0, fit.innovation, sim.returns, 0.0);
    CHECK((refilt.residuals - fit.residuals).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("joint MLE handles mid-range persistence splits") {
    const GarchParams truth{0.2, 0.5, 0.3};
    const GhParams eps_law = nig_standardized(8.0, 0.6);
    const double h1 = truth.m / (1.0 - truth.a - truth.b);
    RngStream rng(901);
    const GarchNigSimulation sim =
        simulate_garch_nig(truth, 0.0, eps_law, 0.0, 30000, h1, rng);
    GarchFitOptions options;
    options.pinned_lambda0 = 0.0;
    const GarchNigModel fit = fit_garch_nig_returns(sim.returns, 0.0, options);
    CHECK(fit.garch.a == doctest::Approx(truth.a).epsilon(0.15));
    CHECK(fit.garch.b == doctest::Approx(truth.b).epsilon(0.15));
    CHECK(fit.garch.m / (1.0 - fit.garch.a - fit.garch.b) ==
          doctest::Approx(h1).epsilon(0.10));
}

TEST_CASE("iid input drives persistence down and matches the sample variance") {
    RngStream rng(11);
    const int n = 20000;
    Eigen::VectorXd returns(n);
    for (int i = 0; i < n; ++i) returns(i) = 0.3 * rng.next_normal();

    GarchFitOptions options;
    options.pinned_lambda0 = 0.0;
    const GarchNigModel fit = fit_garch_nig_returns(returns, 0.0, options);
    const double uncond = fit.garch.m / (1.0 - fit.garch.a - fit.garch.b);
    CHECK(uncond == doctest::Approx(variance(returns)).epsilon(0.10));
    CHECK(fit.garch.b < 0.05);  // no real ARCH effect to find
}

TEST_CASE("series wrapper refuses nonpositive levels") {
    Eigen::VectorXd series = Eigen::VectorXd::Constant(200, 1.0);
    series(50) = 0.0;
    CHECK_THROWS_AS(fit_garch_nig(series, 0.0), InvalidParams);
}

TEST_CASE("Ljung-Box: power and degenerate input") {
    // strongly autocorrelated AR(1)
    RngStream rng(3);
    const int n = 500;
    Eigen::VectorXd ar(n);
    double prev = 0.0;
    for (int i = 0; i < n; ++i) {
        prev = 0.9 * prev + rng.next_normal();
        ar(i) = prev;
    }
    const LjungBoxResult strong = ljung_box(ar, 20);
    CHECK(strong.p_value < 1e-6);

    Eigen::VectorXd constant = Eigen::VectorXd::Constant(100, 2.0);
    CHECK_THROWS_AS(ljung_box(constant, 5), TooFewPoints);
    CHECK_THROWS_AS(ljung_box(ar, 0), TooFewPoints);
    CHECK_THROWS_AS(ljung_box(ar, 500), TooFewPoints);
}

TEST_CASE("Ljung-Box size: rejection rate near the nominal 5 percent") {
    const int reps = 1000;
    const int n = 10000;
    int rejections = 0;
    for (int r = 0; r < reps; ++r) {
        RngStream rng = RngStream::child(4242, static_cast<std::uint64_t>(r));
        Eigen::VectorXd z(n);
        for (int i = 0; i < n; ++i) z(i) = rng.next_normal();
        if (ljung_box(z, 20).p_value < 0.05) ++rejections;
    }
    const double rate = static_cast<double>(rejections) / reps;
    CHECK(rate > 0.03);
    CHECK(rate < 0.07);
}

namespace {

// Test-local ARMA(1,1)-GARCH(1,1) simulator with standardized Student-t
// innovations (integer dof, chi-square by sum of squared normals).
Eigen::VectorXd simulate_arma_garch_t(double c, double ar1, double ma1, double omega,
                                      double alpha1, double beta1, int nu, int n,
                                      RngStream& rng) {
    const auto draw_t = [&]() {
        double chi2 = 0.0;
        for (int k = 0; k < nu; ++k) {
            const double z = rng.next_normal();
            chi2 += z * z;
        }
        const double t = rng.next_normal() / std::sqrt(chi2 / nu);
        return t / std::sqrt(static_cast<double>(nu) / (nu - 2));
    };
    Eigen::VectorXd y(n);
    double h = omega / (1.0 - alpha1 - beta1);
    double prev_e = 0.0, prev_y = c / (1.0 - ar1);
    for (int i = 0; i < n; ++i) {
        const double e = std::sqrt(h) * draw_t();
        y(i) = c + ar1 * prev_y + ma1 * prev_e + e;
        h = omega + alpha1 * e * e + beta1 * h;
        prev_e = e;
        prev_y = y(i);
    }
    return y;
}

}  // namespace

TEST_CASE("ARMA-GARCH-t: white noise yields near-zero ARMA terms") {
    RngStream rng(8);
    const int n = 10000;
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y(i) = 1.5 + 0.7 * rng.next_normal();
    const ArmaGarchTModel fit = fit_arma_garch_t(y);
    CHECK(std::abs(fit.ar1) < 0.1);
    CHECK(std::abs(fit.ma1) < 0.1);
}

TEST_CASE("ARMA-GARCH-t: AR(1) coefficient recovery") {
    RngStream rng(81);
    const Eigen::VectorXd y =
        simulate_arma_garch_t(0.2, 0.5, 0.0, 0.02, 0.1, 0.8, 6, 10000, rng);
    const ArmaGarchTModel fit = fit_arma_garch_t(y);
    CHECK(std::abs(fit.ar1 - 0.5) < 0.05);
    CHECK(fit.alpha1 + fit.beta1 < 1.0);
}

TEST_CASE("ARMA-GARCH-t rejects degenerate input") {
    const Eigen::VectorXd constant = Eigen::VectorXd::Constant(300, 1.5);
    CHECK_THROWS_AS(fit_arma_garch_t(constant), TooFewPoints);
    Eigen::VectorXd tiny(20);
    tiny.setZero();
    CHECK_THROWS_AS(fit_arma_garch_t(tiny), TooFewPoints);
}

TEST_CASE("ARMA-GARCH-t residuals pass their own screen on clean data") {
    RngStream rng(82);
    const Eigen::VectorXd y =
        simulate_arma_garch_t(0.0, 0.3, 0.2, 0.05, 0.08, 0.85, 7, 4000, rng);
    const ArmaGarchTModel fit = fit_arma_garch_t(y);
    CHECK(fit.residual_lb.p_value > 0.05);
    CHECK(variance(fit.residuals) == doctest::Approx(1.0).epsilon(0.15));
}
