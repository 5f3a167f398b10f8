#pragma once

#include "ndi/garch.hpp"
#include "ndi/nig.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <vector>

namespace ndi {

struct EsscherSolution {
    double theta = 0.0;
    double lo = 0.0;        // search bracket inside the MGF domain
    double hi = 0.0;
    double residual = 0.0;  // |MGF(1+theta) - MGF(theta) e^{r}| / MGF(theta) e^{r}
};

// Root of MGF(1 + theta) = MGF(theta) e^{riskfree} for the one-step return
// law. The return law must be NIG (lambda = -1/2).
EsscherSolution solve_esscher(const GhParams& return_law, double riskfree);

// One-step return law of R_{t+1} given variance h under the fitted model:
// GH(lambda, alpha/sqrt(h), beta/sqrt(h), delta sqrt(h), r + lambda0 sqrt(h)
// - h/2 + mu sqrt(h)).
GhParams conditional_return_law(const GarchNigModel& model, double h);

struct PricingConfig {
    int n_paths = 10000;
    int horizon = 24;  // steps to the longest maturity
    std::vector<double> strikes;
    double riskfree = 0.0;  // per-step rate
    std::uint64_t seed = 1;
    double loss_floor = 1.0;  // smallest admissible L_t before the power transform
    bool legacy_recursion = false;
    int max_resample = 10;
    // Opt-in accelerator: interpolate theta over previously solved
    // variance states when the interpolant keeps the martingale residual
    // under the guard; exact re-solving is the default.
    bool memoize_esscher = false;
    double memoize_guard = 1e-8;
};

struct PathSet {
    // n_paths x (horizon + 1); column 0 holds the starting values.
    Eigen::MatrixXd s;
    Eigen::MatrixXd ndi;
    double s0 = 0.0;
    double riskfree = 0.0;
    int horizon = 0;
    std::int64_t resampled_paths = 0;
    double max_esscher_residual = 0.0;
};

// Simulate index paths under the Esscher-transformed measure. Each path
// owns stream hash(seed, path); re-runs with the same config are
// bit-identical.
PathSet simulate_q_paths(const GarchNigModel& model, double s0, double ndi0,
                         const PricingConfig& config);

struct OptionQuote {
    int maturity = 0;  // steps ahead
    double strike = 0.0;
    double call = 0.0;
    double put = 0.0;
    double se_call = 0.0;
    double se_put = 0.0;
};

struct IvCell {
    int maturity = 0;
    double strike = 0.0;
    double moneyness = 0.0;  // S / K
    double vol = 0.0;
    bool ok = false;  // false when the price sits outside inversion bounds
};

struct OptionSurface {
    std::vector<OptionQuote> quotes;  // every (maturity 1..horizon) x strike
    double spot = 0.0;                // S used for moneyness
    double riskfree = 0.0;
};

// Discounted Monte Carlo averages of the positive parts, on shared paths.
OptionSurface price_options(const PathSet& paths, const PricingConfig& config);

std::vector<IvCell> implied_vol_surface(const OptionSurface& surface, double spot);

double black_scholes_call(double spot, double strike, double rate, double maturity,
                          double sigma);
double black_scholes_put(double spot, double strike, double rate, double maturity,
                         double sigma);

// Bracketed bisection on sigma in [1e-6, 5], 1e-8 price tolerance; empty
// when the price violates static bounds.
std::optional<double> implied_vol_call(double price, double spot, double strike,
                                       double rate, double maturity);

}  // namespace ndi
