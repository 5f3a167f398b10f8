#include "ndi/index.hpp"

#include "ndi/csvio.hpp"
#include "ndi/errors.hpp"

#include <cmath>
#include <fstream>

namespace ndi {

Eigen::VectorXd difference(const Eigen::Ref<const Eigen::VectorXd>& series) {
    if (series.size() < 2) throw TooFewPoints("difference: need at least 2 points");
    return series.tail(series.size() - 1) - series.head(series.size() - 1);
}

NdiSeries build_ndi(const LossPanel& panel, double exponent) {
    if (panel.total_loss.size() < 2) throw TooFewPeriods("build_ndi: need at least 2 periods");
    if ((panel.total_loss.array() < 0.0).any()) {
        throw DataError("build_ndi: negative total loss");
    }
    NdiSeries series;
    series.periods = panel.periods;
    series.total_loss = panel.total_loss;
    series.exponent = exponent;
    series.s = panel.total_loss.array().pow(exponent);
    series.ndi = difference(series.s);
    return series;
}

void write_ndi_csv(std::ostream& out, const NdiSeries& series) {
    write_csv_row(out, {"period", "L", "S", "NDI", "exponent"});
    for (Eigen::Index t = 0; t < series.s.size(); ++t) {
        std::vector<std::string> row{series.periods[t], format_double(series.total_loss(t)),
                                     format_double(series.s(t)),
                                     t == 0 ? "" : format_double(series.ndi(t - 1)),
                                     t == 0 ? format_double(series.exponent) : ""};
        write_csv_row(out, row);
    }
}

NdiSeries read_ndi_csv(std::istream& in) {
    CsvReader reader(in);
    std::vector<std::string> row;
    if (!reader.next_row(row) || row.size() < 5 || row[0] != "period") {
        throw DataError("NDI CSV: unexpected header");
    }
    std::vector<std::string> periods;
    std::vector<double> l, s, ndi;
    double exponent = 0.1;
    bool first = true;
    while (reader.next_row(row)) {
        if (row.size() < 5) throw DataError("NDI CSV: ragged row");
        periods.push_back(row[0]);
        l.push_back(parse_double(row[1], "NDI CSV L"));
        s.push_back(parse_double(row[2], "NDI CSV S"));
        if (first) {
            exponent = parse_double(row[4], "NDI CSV exponent");
            first = false;
        } else {
            ndi.push_back(parse_double(row[3], "NDI CSV value"));
        }
    }
    if (s.size() < 2) throw TooFewPeriods("NDI CSV: need at least 2 periods");
    NdiSeries series;
    series.periods = std::move(periods);
    series.exponent = exponent;
    series.total_loss = Eigen::Map<Eigen::VectorXd>(l.data(), static_cast<Eigen::Index>(l.size()));
    series.s = Eigen::Map<Eigen::VectorXd>(s.data(), static_cast<Eigen::Index>(s.size()));
    series.ndi =
        Eigen::Map<Eigen::VectorXd>(ndi.data(), static_cast<Eigen::Index>(ndi.size()));
    return series;
}

NdiSeries read_ndi_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open NDI CSV '" + path + "'");
    return read_ndi_csv(in);
}

MonthlyNdi aggregate_ndi_monthly(const NdiSeries& series) {
    if (series.s.size() < 4) throw TooFewPeriods("aggregate_ndi_monthly: series too short");
    // Period labels are "YYYY-MM-DD"; month key is the first 7 characters.
    // Monthly value for month m (m >= 2) telescopes to
    // s(last period of m) - s(last period of m-1).
    MonthlyNdi monthly;
    std::vector<std::string> month_keys;
    std::vector<Eigen::Index> month_last;  // index into s of each month's last period
    for (Eigen::Index t = 0; t < series.s.size(); ++t) {
        const std::string key = series.periods[t].substr(0, 7);
        if (month_keys.empty() || month_keys.back() != key) {
            month_keys.push_back(key);
            month_last.push_back(t);
        } else {
            month_last.back() = t;
        }
    }
    if (month_keys.size() < 2) throw TooFewPeriods("aggregate_ndi_monthly: need two months");
    monthly.ndi.resize(static_cast<Eigen::Index>(month_keys.size()) - 1);
    for (std::size_t m = 1; m < month_keys.size(); ++m) {
        monthly.months.push_back(month_keys[m]);
        monthly.ndi(static_cast<Eigen::Index>(m) - 1) =
            series.s(month_last[m]) - series.s(month_last[m - 1]);
    }
    return monthly;
}

}  // namespace ndi
