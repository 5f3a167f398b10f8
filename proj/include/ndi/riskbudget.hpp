#pragma once

#include "ndi/ingest.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace ndi {

struct PortfolioWeights {
    Eigen::VectorXd w;  // nonnegative, sums to 1

    static PortfolioWeights equal(int n);
};

// Per-event-type loss returns: first differences of the per-type
// transformed losses L_{t,i}^exponent.
struct ReturnPanel {
    std::vector<std::string> labels;  // period of each return row
    std::vector<std::string> types;
    Eigen::MatrixXd returns;  // (periods - 1) x types
};

ReturnPanel loss_return_panel(const LossPanel& panel, double exponent = 0.1);

// Euler contributions under the standard-deviation risk measure:
// MCTR_i = w_i (Sigma w)_i / sqrt(w' Sigma w).
Eigen::VectorXd std_mctr(const Eigen::Ref<const Eigen::MatrixXd>& returns,
                         const Eigen::Ref<const Eigen::VectorXd>& w);

// Historical-scenario Euler contributions under expected tail loss at
// `level` (0.95 or 0.99): scenarios at or below the empirical
// (1-level)-quantile of the portfolio return, MCTR_i = -w_i * tail mean
// of r_i. Losses are expected to enter as negative returns.
Eigen::VectorXd etl_mctr(const Eigen::Ref<const Eigen::MatrixXd>& returns,
                         const Eigen::Ref<const Eigen::VectorXd>& w, double level,
                         int min_tail_scenarios = 10);

// Percent contributions MCTR_i / sum(MCTR), in percent.
Eigen::VectorXd pctr(const Eigen::Ref<const Eigen::VectorXd>& mctr);

// Group sums over a partition of the type indices.
std::vector<double> group_mctr(const Eigen::Ref<const Eigen::VectorXd>& mctr,
                               const std::vector<std::vector<int>>& groups);

struct MeasureSpec {
    enum class Kind { Std, Etl };
    Kind kind = Kind::Std;
    double level = 0.0;  // tail level for Etl, unused for Std

    std::string label() const;  // "std", "etl95", ...
    static MeasureSpec std_dev() { return {Kind::Std, 0.0}; }
    static MeasureSpec etl(double level) { return {Kind::Etl, level}; }
};

struct MeasureColumn {
    std::string label;
    Eigen::VectorXd mctr;
    Eigen::VectorXd pctr;
};

struct RiskBudgetReport {
    std::vector<std::string> types;
    std::vector<MeasureColumn> columns;

    const MeasureColumn& column(const std::string& label) const;
};

struct BudgetOptions {
    // Table order: tail measures first, then the center one.
    std::vector<MeasureSpec> measures{MeasureSpec::etl(0.95), MeasureSpec::etl(0.99),
                                      MeasureSpec::std_dev()};
    int min_tail_scenarios = 10;
    // Loss sign convention: returns are negated before the tail measures
    // so that loss spikes land in the left tail and risky types carry
    // positive MCTR.
    bool losses_as_negative_returns = true;
};

RiskBudgetReport budget_report(const ReturnPanel& panel, const PortfolioWeights& weights,
                               const BudgetOptions& options = {});

struct WindowBudget {
    std::string start;
    std::string end;
    RiskBudgetReport report;
    std::string error;  // nonempty when a measure failed on this window
};

// Windows of window_len rows advancing by one period.
std::vector<WindowBudget> rolling_budgets(const ReturnPanel& panel,
                                          const PortfolioWeights& weights, int window_len,
                                          const BudgetOptions& options = {});

}  // namespace ndi
