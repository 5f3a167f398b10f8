#include "ndi/pricing.hpp"

#include "ndi/errors.hpp"
#include "ndi/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace ndi {

namespace {

// g(theta) = log MGF(1+theta) - log MGF(theta) - r for the NIG law,
// strictly increasing on the admissible interval.
double esscher_gap(const GhParams& p, double theta, double riskfree) {
    const double s0 = std::sqrt(
        std::max(0.0, p.alpha * p.alpha - (p.beta + theta) * (p.beta + theta)));
    const double s1 = std::sqrt(std::max(
        0.0, p.alpha * p.alpha - (p.beta + theta + 1.0) * (p.beta + theta + 1.0)));
    // delta*(s0 - s1) without cancellation: s0^2 - s1^2 = 2(beta+theta) + 1.
    return p.mu + p.delta * (2.0 * (p.beta + theta) + 1.0) / (s0 + s1) - riskfree;
}

}  // namespace

EsscherSolution solve_esscher(const GhParams& return_law, double riskfree) {
    const GhParams& p = return_law;
    if (!p.valid()) throw InvalidParams("solve_esscher: invalid return law");
    if (p.lambda != -0.5) throw InvalidParams("solve_esscher: return law must be NIG");

    // Both theta and 1+theta must keep |beta + u| < alpha.
    const double lo_domain = -p.alpha - p.beta;
    const double hi_domain = p.alpha - p.beta - 1.0;
    const double width = hi_domain - lo_domain;  // = 2 alpha - 1
    if (!(width > 1e-10)) {
        throw DomainTooNarrow("solve_esscher: MGF domain does not admit u = 1");
    }
    const double margin = 1e-12 * std::max(1.0, std::abs(lo_domain) + std::abs(hi_domain)) +
                          1e-14 * width;
    double lo = lo_domain + margin;
    double hi = hi_domain - margin;

    double glo = esscher_gap(p, lo, riskfree);
    double ghi = esscher_gap(p, hi, riskfree);
    if (glo > 0.0 || ghi < 0.0) {
        throw NoRoot("solve_esscher: no sign change of the martingale gap in the domain");
    }

    // Bisection with a secant proposal once the bracket is tight.
    for (int it = 0; it < 200; ++it) {
        double candidate;
        if (ghi != glo && it >= 4) {
            candidate = lo - glo * (hi - lo) / (ghi - glo);
            if (!(candidate > lo && candidate < hi)) candidate = 0.5 * (lo + hi);
        } else {
            candidate = 0.5 * (lo + hi);
        }
        const double gc = esscher_gap(p, candidate, riskfree);
        if (gc == 0.0) {
            lo = hi = candidate;
            glo = ghi = 0.0;
            break;
        }
        if (gc < 0.0) {
            lo = candidate;
            glo = gc;
        } else {
            hi = candidate;
            ghi = gc;
        }
        if (hi - lo <= 1e-15 * (1.0 + std::abs(lo))) break;
    }
    const double theta = 0.5 * (lo + hi);

    EsscherSolution sol;
    sol.theta = theta;
    sol.lo = lo_domain;
    sol.hi = hi_domain;
    // Relative martingale residual |MGF(1+theta)/(MGF(theta) e^r) - 1|.
    sol.residual = std::abs(std::expm1(esscher_gap(p, theta, riskfree)));
    return sol;
}

GhParams conditional_return_law(const GarchNigModel& model, double h) {
    if (!(h > 0.0)) throw InvalidParams("conditional_return_law: variance must be positive");
    const double vol = std::sqrt(h);
    const GhParams& eps = model.innovation;
    return GhParams{-0.5, eps.alpha / vol, eps.beta / vol, eps.delta * vol,
                    model.riskfree + model.lambda0 * vol - 0.5 * h + eps.mu * vol};
}

namespace {

// theta(h) cache for the opt-in accelerator; linear interpolation between
// solved neighbors, accepted only under the residual guard.
class EsscherMemo {
public:
    explicit EsscherMemo(double guard) : guard_(guard) {}

    double theta_for(const GarchNigModel& model, double h, double riskfree,
                     double& residual_out) {
        const auto hi = cache_.lower_bound(h);
        if (hi != cache_.end() && hi != cache_.begin()) {
            const auto lo = std::prev(hi);
            const double span = hi->first - lo->first;
            if (span > 0.0 && span < 0.2 * lo->first) {
                const double w = (h - lo->first) / span;
                const double guess = lo->second + w * (hi->second - lo->second);
                const GhParams law = conditional_return_law(model, h);
                const double residual = std::abs(std::expm1(esscher_gap(law, guess, riskfree)));
                if (residual < guard_) {
                    residual_out = residual;
                    return guess;
                }
            }
        }
        const EsscherSolution sol =
            solve_esscher(conditional_return_law(model, h), riskfree);
        cache_[h] = sol.theta;
        residual_out = sol.residual;
        return sol.theta;
    }

private:
    double guard_;
    std::map<double, double> cache_;
};

}  // namespace

PathSet simulate_q_paths(const GarchNigModel& model, double s0, double ndi0,
                         const PricingConfig& config) {
    if (config.n_paths < 1 || config.horizon < 1) {
        throw InvalidParams("simulate_q_paths: need n_paths >= 1 and horizon >= 1");
    }
    if (!(s0 > 0.0) && !config.legacy_recursion) {
        throw InvalidParams("simulate_q_paths: starting S must be positive");
    }

    EsscherMemo memo(config.memoize_guard);
    PathSet paths;
    paths.s.resize(config.n_paths, config.horizon + 1);
    paths.ndi.resize(config.n_paths, config.horizon + 1);
    paths.s0 = s0;
    paths.riskfree = config.riskfree;
    paths.horizon = config.horizon;

    for (int path = 0; path < config.n_paths; ++path) {
        bool done = false;
        for (int attempt = 0; attempt <= config.max_resample && !done; ++attempt) {
            RngStream rng = RngStream::child(
                config.seed, static_cast<std::uint64_t>(path) +
                                 (static_cast<std::uint64_t>(attempt) << 40));
            if (attempt > 0) ++paths.resampled_paths;
            try {
                double h = model.h_forecast;
                double s = s0;
                double ndi = ndi0;
                paths.s(path, 0) = s;
                paths.ndi(path, 0) = ndi;
                for (int step = 1; step <= config.horizon; ++step) {
                    double residual = 0.0;
                    double theta;
                    if (config.memoize_esscher) {
                        theta = memo.theta_for(model, h, config.riskfree, residual);
                    } else {
                        const EsscherSolution esscher = solve_esscher(
                            conditional_return_law(model, h), config.riskfree);
                        theta = esscher.theta;
                        residual = esscher.residual;
                    }
                    paths.max_esscher_residual =
                        std::max(paths.max_esscher_residual, residual);
                    // Tilt in innovation space: beta -> beta + sqrt(h) theta.
                    const double vol = std::sqrt(h);
                    const GhParams& eps_law = model.innovation;
                    const GhParams tilted{-0.5, eps_law.alpha,
                                          eps_law.beta + vol * theta,
                                          eps_law.delta, eps_law.mu};
                    if (!tilted.valid()) {
                        throw DomainTooNarrow("simulate_q_paths: tilted law left the domain");
                    }
                    const double eps = nig_sample(rng, tilted);
                    const double r =
                        config.riskfree + model.lambda0 * vol - 0.5 * h + vol * eps;
                    if (config.legacy_recursion) {
                        // Literal recursion: the index accumulates R^10.
                        ndi = std::pow(r, 10) + ndi;
                        s = s * std::exp(r);
                    } else {
                        const double s_next = s * std::exp(r);
                        ndi = s_next - s;
                        s = s_next;
                    }
                    paths.s(path, step) = s;
                    paths.ndi(path, step) = ndi;
                    h = garch_variance_recursion(model.garch, h, eps);
                }
                done = true;
            } catch (const NoRoot&) {
                // resample this path with a fresh stream
            } catch (const DomainTooNarrow&) {
            }
        }
        if (!done) {
            throw NumericError("simulate_q_paths: path " + std::to_string(path) +
                               " failed the Esscher solve after " +
                               std::to_string(config.max_resample) + " resamples");
        }
    }
    return paths;
}

OptionSurface price_options(const PathSet& paths, const PricingConfig& config) {
    if (paths.s.rows() == 0 || paths.horizon < 1) throw EmptyPaths("price_options: no paths");
    if (config.strikes.empty()) throw InvalidParams("price_options: no strikes");

    OptionSurface surface;
    surface.spot = paths.s0;
    surface.riskfree = paths.riskfree;
    const auto n = static_cast<double>(paths.ndi.rows());

    for (int maturity = 1; maturity <= paths.horizon; ++maturity) {
        const double discount = std::exp(-paths.riskfree * maturity);
        const auto terminal = paths.ndi.col(maturity);
        for (const double strike : config.strikes) {
            double sum_call = 0.0, sum_call_sq = 0.0;
            double sum_put = 0.0, sum_put_sq = 0.0;
            for (Eigen::Index i = 0; i < terminal.size(); ++i) {
                const double call = std::max(terminal(i) - strike, 0.0);
                const double put = std::max(strike - terminal(i), 0.0);
                sum_call += call;
                sum_call_sq += call * call;
                sum_put += put;
                sum_put_sq += put * put;
            }
            OptionQuote quote;
            quote.maturity = maturity;
            quote.strike = strike;
            quote.call = discount * sum_call / n;
            quote.put = discount * sum_put / n;
            const double var_call =
                std::max(0.0, (sum_call_sq - sum_call * sum_call / n) / (n - 1.0));
            const double var_put =
                std::max(0.0, (sum_put_sq - sum_put * sum_put / n) / (n - 1.0));
            quote.se_call = discount * std::sqrt(var_call / n);
            quote.se_put = discount * std::sqrt(var_put / n);
            surface.quotes.push_back(quote);
        }
    }
    return surface;
}

double black_scholes_call(double spot, double strike, double rate, double maturity,
                          double sigma) {
    if (!(spot > 0.0) || !(strike > 0.0) || !(maturity > 0.0) || !(sigma > 0.0)) {
        throw InvalidParams("black_scholes_call: require positive S, K, T, sigma");
    }
    const double stdev = sigma * std::sqrt(maturity);
    const double d1 = (std::log(spot / strike) + (rate + 0.5 * sigma * sigma) * maturity) /
                      stdev;
    const double d2 = d1 - stdev;
    return spot * normal_cdf(d1) - strike * std::exp(-rate * maturity) * normal_cdf(d2);
}

double black_scholes_put(double spot, double strike, double rate, double maturity,
                         double sigma) {
    return black_scholes_call(spot, strike, rate, maturity, sigma) - spot +
           strike * std::exp(-rate * maturity);
}

std::optional<double> implied_vol_call(double price, double spot, double strike,
                                       double rate, double maturity) {
    const double lo_sigma = 1e-6, hi_sigma = 5.0;
    const double intrinsic = std::max(spot - strike * std::exp(-rate * maturity), 0.0);
    if (!(price > intrinsic) || !(price < spot)) return std::nullopt;
    double lo = lo_sigma, hi = hi_sigma;
    double flo = black_scholes_call(spot, strike, rate, maturity, lo) - price;
    double fhi = black_scholes_call(spot, strike, rate, maturity, hi) - price;
    if (flo > 0.0 || fhi < 0.0) return std::nullopt;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = black_scholes_call(spot, strike, rate, maturity, mid) - price;
        if (std::abs(fmid) < 1e-8) return mid;
        if (fmid < 0.0) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
            fhi = fmid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<IvCell> implied_vol_surface(const OptionSurface& surface, double spot) {
    std::vector<IvCell> grid;
    grid.reserve(surface.quotes.size());
    for (const auto& quote : surface.quotes) {
        IvCell cell;
        cell.maturity = quote.maturity;
        cell.strike = quote.strike;
        cell.moneyness = spot / quote.strike;
        const auto vol = implied_vol_call(quote.call, spot, quote.strike, surface.riskfree,
                                          static_cast<double>(quote.maturity));
        if (vol.has_value()) {
            cell.vol = *vol;
            cell.ok = true;
        }
        grid.push_back(cell);
    }
    return grid;
}

}  // namespace ndi
