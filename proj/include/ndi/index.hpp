#pragma once

#include "ndi/ingest.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <string>
#include <vector>

namespace ndi {

// The index and its auxiliary transformed series. s has one value per
// period; ndi holds first differences, so ndi.size() == s.size() - 1 and
// ndi(t-1) belongs to the period labeled periods[t].
struct NdiSeries {
    std::vector<std::string> periods;
    Eigen::VectorXd total_loss;  // L_t, carried through for reporting
    Eigen::VectorXd s;           // L_t^exponent
    Eigen::VectorXd ndi;         // s_t - s_{t-1}
    double exponent = 0.1;
};

// First difference: out(t) = in(t+1) - in(t).
Eigen::VectorXd difference(const Eigen::Ref<const Eigen::VectorXd>& series);

NdiSeries build_ndi(const LossPanel& panel, double exponent = 0.1);

void write_ndi_csv(std::ostream& out, const NdiSeries& series);
NdiSeries read_ndi_csv(std::istream& in);
NdiSeries read_ndi_csv_file(const std::string& path);

// Monthly index values: s differenced at month ends (equivalently the sum
// of the two semimonthly ndi values per month). One value per month from
// the second month on, labeled "YYYY-MM".
struct MonthlyNdi {
    std::vector<std::string> months;
    Eigen::VectorXd ndi;
};
MonthlyNdi aggregate_ndi_monthly(const NdiSeries& series);

}  // namespace ndi
