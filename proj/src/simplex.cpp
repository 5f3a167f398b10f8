#include "ndi/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace ndi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double guarded(const std::function<double(const Eigen::VectorXd&)>& f,
               const Eigen::VectorXd& x, int& evals) {
    ++evals;
    const double v = f(x);
    return std::isfinite(v) ? v : kInf;
}

struct Vertex {
    Eigen::VectorXd x;
    double f;
};

SimplexResult run_once(const std::function<double(const Eigen::VectorXd&)>& f,
                       const Eigen::VectorXd& x0, double step,
                       const SimplexOptions& opt, int& evals) {
    const auto n = static_cast<int>(x0.size());
    std::vector<Vertex> simplex(n + 1);
    simplex[0] = {x0, guarded(f, x0, evals)};
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd x = x0;
        x(i) += (x(i) != 0.0) ? step * std::abs(x(i)) : step;
        simplex[i + 1] = {x, guarded(f, x, evals)};
    }

    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    bool converged = false;
    for (int iter = 0; iter < opt.max_iterations; ++iter) {
        std::sort(simplex.begin(), simplex.end(),
                  [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
        const double fbest = simplex.front().f;
        const double fworst = simplex.back().f;
        if (std::isfinite(fworst) &&
            std::abs(fworst - fbest) <= opt.f_tolerance * (std::abs(fbest) + 1e-30)) {
            converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) centroid += simplex[i].x;
        centroid /= static_cast<double>(n);

        const Eigen::VectorXd xr = centroid + alpha * (centroid - simplex[n].x);
        const double fr = guarded(f, xr, evals);
        if (fr < simplex[0].f) {
            const Eigen::VectorXd xe = centroid + gamma * (xr - centroid);
            const double fe = guarded(f, xe, evals);
            simplex[n] = (fe < fr) ? Vertex{xe, fe} : Vertex{xr, fr};
            continue;
        }
        if (fr < simplex[n - 1].f) {
            simplex[n] = {xr, fr};
            continue;
        }
        const Eigen::VectorXd xc = centroid + rho * (simplex[n].x - centroid);
        const double fc = guarded(f, xc, evals);
        if (fc < simplex[n].f) {
            simplex[n] = {xc, fc};
            continue;
        }
        for (int i = 1; i <= n; ++i) {
            simplex[i].x = simplex[0].x + sigma * (simplex[i].x - simplex[0].x);
            simplex[i].f = guarded(f, simplex[i].x, evals);
        }
    }

    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    SimplexResult result;
    result.x = simplex.front().x;
    result.f = simplex.front().f;
    result.converged = converged;
    return result;
}

}  // namespace

SimplexResult minimize_simplex(const std::function<double(const Eigen::VectorXd&)>& f,
                               const Eigen::VectorXd& x0, const SimplexOptions& options) {
    int evals = 0;
    SimplexResult best = run_once(f, x0, options.initial_step, options, evals);
    bool last_converged = best.converged;
    double step = options.initial_step;
    for (int r = 0; r < options.restarts; ++r) {
        step *= 0.25;
        SimplexResult next = run_once(f, best.x, step, options, evals);
        last_converged = next.converged;
        if (next.f < best.f) best = next;
    }
    best.converged = last_converged;
    best.evaluations = evals;
    return best;
}

}  // namespace ndi
