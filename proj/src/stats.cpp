#include "ndi/stats.hpp"

#include "ndi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ndi {

double mean(const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (x.size() == 0) throw TooFewPoints("mean: empty series");
    return x.mean();
}

double variance(const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (x.size() < 2) throw TooFewPoints("variance: need at least 2 points");
    const double m = x.mean();
    return (x.array() - m).square().sum() / static_cast<double>(x.size() - 1);
}

double stddev(const Eigen::Ref<const Eigen::VectorXd>& x) { return std::sqrt(variance(x)); }

double skewness(const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (x.size() < 3) throw TooFewPoints("skewness: need at least 3 points");
    const double m = x.mean();
    const auto c = x.array() - m;
    const double n = static_cast<double>(x.size());
    const double m2 = c.square().sum() / n;
    const double m3 = c.cube().sum() / n;
    return m3 / std::pow(m2, 1.5);
}

double excess_kurtosis(const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (x.size() < 4) throw TooFewPoints("excess_kurtosis: need at least 4 points");
    const double m = x.mean();
    const auto c = x.array() - m;
    const double n = static_cast<double>(x.size());
    const double m2 = c.square().sum() / n;
    const double m4 = c.square().square().sum() / n;
    return m4 / (m2 * m2) - 3.0;
}

double correlation(const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y) {
    if (x.size() != y.size()) throw TooFewPoints("correlation: length mismatch");
    if (x.size() < 2) throw TooFewPoints("correlation: need at least 2 points");
    const auto cx = x.array() - x.mean();
    const auto cy = y.array() - y.mean();
    const double sxy = (cx * cy).sum();
    const double sxx = cx.square().sum();
    const double syy = cy.square().sum();
    if (sxx <= 0.0 || syy <= 0.0) {
        throw ZeroPortfolioVariance("correlation: a series is constant");
    }
    return sxy / std::sqrt(sxx * syy);
}

Eigen::MatrixXd covariance_matrix(const Eigen::Ref<const Eigen::MatrixXd>& panel) {
    if (panel.rows() < 2) throw TooFewPoints("covariance_matrix: need at least 2 rows");
    const Eigen::RowVectorXd mu = panel.colwise().mean();
    const Eigen::MatrixXd centered = panel.rowwise() - mu;
    return centered.transpose() * centered / static_cast<double>(panel.rows() - 1);
}

double quantile_type7(const Eigen::Ref<const Eigen::VectorXd>& x, double p) {
    if (x.size() == 0) throw TooFewPoints("quantile: empty series");
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile: p outside [0, 1]");
    std::vector<double> sorted(x.data(), x.data() + x.size());
    std::sort(sorted.begin(), sorted.end());
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

double autocorrelation(const Eigen::Ref<const Eigen::VectorXd>& x, int lag) {
    const auto n = static_cast<Eigen::Index>(x.size());
    if (lag < 0 || lag >= n) throw TooFewPoints("autocorrelation: lag out of range");
    const double m = x.mean();
    const auto c = x.array() - m;
    const double denom = c.square().sum();
    if (denom <= 0.0) throw TooFewPoints("autocorrelation: constant series");
    double num = 0.0;
    for (Eigen::Index t = lag; t < n; ++t) num += c(t) * c(t - lag);
    return num / denom;
}

}  // namespace ndi
