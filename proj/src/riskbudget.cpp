#include "ndi/riskbudget.hpp"

#include "ndi/errors.hpp"
#include "ndi/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

namespace ndi {

PortfolioWeights PortfolioWeights::equal(int n) {
    if (n < 1) throw InvalidParams("PortfolioWeights::equal: n must be >= 1");
    PortfolioWeights weights;
    weights.w = Eigen::VectorXd::Constant(n, 1.0 / n);
    return weights;
}

ReturnPanel loss_return_panel(const LossPanel& panel, double exponent) {
    if (panel.losses.rows() < 2) throw TooFewPeriods("loss_return_panel: need 2+ periods");
    ReturnPanel out;
    out.types = panel.event_types;
    out.labels.assign(panel.periods.begin() + 1, panel.periods.end());
    const Eigen::MatrixXd transformed = panel.losses.array().pow(exponent);
    out.returns = transformed.bottomRows(transformed.rows() - 1) -
                  transformed.topRows(transformed.rows() - 1);
    return out;
}

Eigen::VectorXd std_mctr(const Eigen::Ref<const Eigen::MatrixXd>& returns,
                         const Eigen::Ref<const Eigen::VectorXd>& w) {
    if (returns.cols() != w.size()) throw InvalidParams("std_mctr: weight size mismatch");
    const Eigen::MatrixXd cov = covariance_matrix(returns);
    const Eigen::VectorXd cov_w = cov * w;
    const double port_var = w.dot(cov_w);
    if (!(port_var > 0.0)) {
        throw ZeroPortfolioVariance("std_mctr: portfolio variance is zero");
    }
    const double port_std = std::sqrt(port_var);
    return w.array() * cov_w.array() / port_std;
}

Eigen::VectorXd etl_mctr(const Eigen::Ref<const Eigen::MatrixXd>& returns,
                         const Eigen::Ref<const Eigen::VectorXd>& w, double level,
                         int min_tail_scenarios) {
    if (returns.cols() != w.size()) throw InvalidParams("etl_mctr: weight size mismatch");
    if (!(level > 0.5 && level < 1.0)) {
        throw InvalidParams("etl_mctr: level must lie in (0.5, 1)");
    }
    const Eigen::VectorXd portfolio = returns * w;
    const double var_q = quantile_type7(portfolio, 1.0 - level);

    std::vector<Eigen::Index> tail;
    for (Eigen::Index t = 0; t < portfolio.size(); ++t) {
        if (portfolio(t) <= var_q) tail.push_back(t);
    }
    if (static_cast<int>(tail.size()) < min_tail_scenarios) {
        throw TooFewTailScenarios("etl_mctr: only " + std::to_string(tail.size()) +
                                  " scenarios beyond the " + std::to_string(1.0 - level) +
                                  " quantile (need " + std::to_string(min_tail_scenarios) +
                                  ")");
    }
    Eigen::VectorXd tail_mean = Eigen::VectorXd::Zero(returns.cols());
    for (const auto t : tail) tail_mean += returns.row(t).transpose();
    tail_mean /= static_cast<double>(tail.size());
    return -(w.array() * tail_mean.array());
}

Eigen::VectorXd pctr(const Eigen::Ref<const Eigen::VectorXd>& mctr) {
    const double total = mctr.sum();
    if (total == 0.0 || !std::isfinite(total)) {
        throw ZeroTotalRisk("pctr: total MCTR is zero");
    }
    return mctr * (100.0 / total);
}

std::vector<double> group_mctr(const Eigen::Ref<const Eigen::VectorXd>& mctr,
                               const std::vector<std::vector<int>>& groups) {
    std::vector<char> seen(static_cast<std::size_t>(mctr.size()), 0);
    std::vector<double> sums;
    sums.reserve(groups.size());
    for (const auto& group : groups) {
        double sum = 0.0;
        for (const int i : group) {
            if (i < 0 || i >= mctr.size()) {
                throw UncoveredTypes("group_mctr: index out of range");
            }
            if (seen[static_cast<std::size_t>(i)]) {
                throw OverlappingGroups("group_mctr: type " + std::to_string(i) +
                                        " appears in two groups");
            }
            seen[static_cast<std::size_t>(i)] = 1;
            sum += mctr(i);
        }
        sums.push_back(sum);
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
        throw UncoveredTypes("group_mctr: groups do not cover every type");
    }
    return sums;
}

std::string MeasureSpec::label() const {
    if (kind == Kind::Std) return "std";
    char buf[16];
    std::snprintf(buf, sizeof(buf), "etl%d", static_cast<int>(std::lround(level * 100)));
    return buf;
}

const MeasureColumn& RiskBudgetReport::column(const std::string& label) const {
    for (const auto& col : columns) {
        if (col.label == label) return col;
    }
    throw InvalidParams("risk budget report has no measure '" + label + "'");
}

RiskBudgetReport budget_report(const ReturnPanel& panel, const PortfolioWeights& weights,
                               const BudgetOptions& options) {
    if (options.measures.empty()) throw InvalidParams("budget_report: no measures");
    RiskBudgetReport report;
    report.types = panel.types;
    const Eigen::MatrixXd& raw = panel.returns;
    const Eigen::MatrixXd signed_returns =
        options.losses_as_negative_returns ? (-raw).eval() : raw;

    for (const MeasureSpec& spec : options.measures) {
        MeasureColumn col;
        col.label = spec.label();
        col.mctr = spec.kind == MeasureSpec::Kind::Std
                       ? std_mctr(signed_returns, weights.w)
                       : etl_mctr(signed_returns, weights.w, spec.level,
                                  options.min_tail_scenarios);
        col.pctr = pctr(col.mctr);
        report.columns.push_back(std::move(col));
    }
    return report;
}

std::vector<WindowBudget> rolling_budgets(const ReturnPanel& panel,
                                          const PortfolioWeights& weights, int window_len,
                                          const BudgetOptions& options) {
    const auto n = panel.returns.rows();
    if (window_len < 2) throw InvalidParams("rolling_budgets: window too small");
    if (n < window_len + 1) {
        throw PanelTooShort("rolling_budgets: panel has " + std::to_string(n) +
                            " returns, need at least " + std::to_string(window_len + 1));
    }
    std::vector<WindowBudget> windows;
    for (Eigen::Index start = 0; start + window_len <= n; ++start) {
        WindowBudget wb;
        wb.start = panel.labels[static_cast<std::size_t>(start)];
        wb.end = panel.labels[static_cast<std::size_t>(start + window_len - 1)];
        ReturnPanel slice;
        slice.types = panel.types;
        slice.labels.assign(panel.labels.begin() + start,
                            panel.labels.begin() + start + window_len);
        slice.returns = panel.returns.middleRows(start, window_len);
        try {
            wb.report = budget_report(slice, weights, options);
        } catch (const Error& e) {
            wb.error = e.what();
        }
        windows.push_back(std::move(wb));
    }
    return windows;
}

}  // namespace ndi
