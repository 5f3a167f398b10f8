#pragma once

#include <Eigen/Core>

#include <functional>

namespace ndi {

struct SimplexOptions {
    int max_iterations = 2000;
    // Stop when the relative spread of objective values across the
    // simplex falls below this.
    double f_tolerance = 1e-9;
    // Restarts re-seed the simplex around the incumbent with a smaller step.
    int restarts = 2;
    double initial_step = 0.25;
};

struct SimplexResult {
    Eigen::VectorXd x;
    double f = 0.0;
    int evaluations = 0;
    bool converged = false;
};

// Nelder-Mead downhill simplex minimizer. Non-finite objective values are
// treated as +inf, which doubles as a barrier for out-of-range parameters.
SimplexResult minimize_simplex(const std::function<double(const Eigen::VectorXd&)>& f,
                               const Eigen::VectorXd& x0,
                               const SimplexOptions& options = {});

}  // namespace ndi
