#pragma once

#include <Eigen/Core>

namespace ndi {

double mean(const Eigen::Ref<const Eigen::VectorXd>& x);
// Sample variance (ddof = 1).
double variance(const Eigen::Ref<const Eigen::VectorXd>& x);
double stddev(const Eigen::Ref<const Eigen::VectorXd>& x);
double skewness(const Eigen::Ref<const Eigen::VectorXd>& x);
double excess_kurtosis(const Eigen::Ref<const Eigen::VectorXd>& x);
double correlation(const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y);

// Sample covariance of the columns (ddof = 1).
Eigen::MatrixXd covariance_matrix(const Eigen::Ref<const Eigen::MatrixXd>& panel);

// Empirical quantile, type-7 interpolation on the order statistics.
double quantile_type7(const Eigen::Ref<const Eigen::VectorXd>& x, double p);

// Lag-k sample autocorrelation.
double autocorrelation(const Eigen::Ref<const Eigen::VectorXd>& x, int lag);

}  // namespace ndi
