#include "ndi/ingest.hpp"

#include "ndi/csvio.hpp"
#include "ndi/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ndi {

const std::vector<std::string>& canonical_event_types() {
    static const std::vector<std::string> types = {
        "Avalanche", "Blizzard", "Coastal Flood", "Cold/Wind Chill", "Debris Flow",
        "Dense Fog", "Dense Smoke", "Drought", "Dust Devil", "Dust Storm",
        "Excessive Heat", "Extreme Cold/Wind Chill", "Flash Flood", "Flood",
        "Frost/Freeze", "Funnel Cloud", "Freezing Fog", "Hail", "Heat", "Heavy Rain",
        "Heavy Snow", "High Surf", "High Wind", "Hurricane (Typhoon)", "Ice Storm",
        "Lake-Effect Snow", "Lakeshore Flood", "Lightning", "Marine Dense Fog",
        "Marine Heavy Freezing Spray", "Marine High Wind", "Marine Hurricane/Typhoon",
        "Marine Lightning", "Marine Strong Wind", "Marine Thunderstorm Wind",
        "Rip Current", "Seiche", "Sleet", "Storm Surge/Tide", "Strong Wind",
        "Thunderstorm Wind", "Tornado", "Tropical Depression", "Tropical Storm",
        "Tsunami", "Volcanic Ash", "Waterspout", "Wildfire", "Winter Storm",
        "Winter Weather"};
    return types;
}

std::string normalize_event_type(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (const char c : raw) {
        const auto uc = static_cast<unsigned char>(c);
        if (std::isalnum(uc)) {
            if (pending_space && !out.empty()) out.push_back(' ');
            pending_space = false;
            out.push_back(static_cast<char>(std::toupper(uc)));
        } else {
            // whitespace, '/', parentheses, hyphens all collapse to one space
            pending_space = true;
        }
    }
    return out;
}

namespace {

const std::unordered_map<std::string, int>& canonical_lookup() {
    static const std::unordered_map<std::string, int> map = [] {
        std::unordered_map<std::string, int> m;
        const auto& types = canonical_event_types();
        for (std::size_t i = 0; i < types.size(); ++i) {
            m.emplace(normalize_event_type(types[i]), static_cast<int>(i));
        }
        return m;
    }();
    return map;
}

}  // namespace

int canonical_type_index(std::string_view raw,
                         const std::unordered_map<std::string, std::string>& aliases) {
    std::string key = normalize_event_type(raw);
    if (!aliases.empty()) {
        const auto alias = aliases.find(key);
        if (alias != aliases.end()) key = normalize_event_type(alias->second);
    }
    const auto& lookup = canonical_lookup();
    const auto it = lookup.find(key);
    return it == lookup.end() ? -1 : it->second;
}

double parse_damage(std::string_view raw) {
    // trim
    std::size_t begin = 0, end = raw.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(raw[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(raw[end - 1]))) --end;
    if (begin == end) return 0.0;

    double scale = 1.0;
    const char last = raw[end - 1];
    switch (last) {
        case 'K': case 'k': scale = 1e3; --end; break;
        case 'M': case 'm': scale = 1e6; --end; break;
        case 'B': case 'b': scale = 1e9; --end; break;
        default: break;
    }
    if (begin == end) throw MalformedDamage("damage amount '" + std::string(raw) + "'");

    // Plain nonnegative decimal only: digits with at most one dot.
    bool seen_digit = false, seen_dot = false;
    for (std::size_t i = begin; i < end; ++i) {
        const char c = raw[i];
        if (c >= '0' && c <= '9') {
            seen_digit = true;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else {
            throw MalformedDamage("damage amount '" + std::string(raw) + "'");
        }
    }
    if (!seen_digit) throw MalformedDamage("damage amount '" + std::string(raw) + "'");

    const std::string number(raw.substr(begin, end - begin));
    return parse_double(number, "parse_damage") * scale;
}

double CpiTable::at(int year) const {
    const auto it = deflator.find(year);
    if (it == deflator.end()) {
        throw MissingCpiYear("no CPI deflator for year " + std::to_string(year));
    }
    return it->second;
}

double adjust_inflation(double amount, int year, const CpiTable& cpi) {
    return amount * cpi.at(year);
}

namespace {

int find_column(const std::vector<std::string>& header, const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw DataError("storm CSV: missing column '" + name + "'");
    }
    return static_cast<int>(it - header.begin());
}

}  // namespace

std::vector<StormEventRecord> read_storm_csv(std::istream& in, const IngestOptions& options,
                                             IngestStats& stats) {
    CsvReader reader(in);
    std::vector<std::string> row;
    if (!reader.next_row(row)) throw DataError("storm CSV: empty file (header required)");

    const int c_ym = find_column(row, options.col_yearmonth);
    const int c_day = find_column(row, options.col_day);
    const int c_type = find_column(row, options.col_event_type);
    const int c_damage = find_column(row, options.col_damage);
    const auto c_state_it = std::find(row.begin(), row.end(), options.col_state);
    const int c_state =
        c_state_it == row.end() ? -1 : static_cast<int>(c_state_it - row.begin());
    const std::size_t min_width = static_cast<std::size_t>(
        std::max({c_ym, c_day, c_type, c_damage})) + 1;

    std::vector<StormEventRecord> records;
    while (reader.next_row(row)) {
        ++stats.records_read;
        if (row.size() < min_width) {
            throw DataError("storm CSV: row " + std::to_string(stats.records_read) +
                            " has too few fields");
        }
        const long ym = parse_long(row[c_ym], "storm CSV BEGIN_YEARMONTH");
        StormEventRecord rec;
        rec.begin_date.year = static_cast<int>(ym / 100);
        rec.begin_date.month = static_cast<int>(ym % 100);
        rec.begin_date.day = static_cast<int>(parse_long(row[c_day], "storm CSV BEGIN_DAY"));
        if (!is_valid_date(rec.begin_date)) {
            throw DataError("storm CSV: invalid date in row " +
                            std::to_string(stats.records_read));
        }
        rec.event_type = row[c_type];
        rec.damage_property_raw = row[c_damage];
        if (c_state >= 0 && static_cast<std::size_t>(c_state) < row.size()) {
            rec.state = row[c_state];
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<StormEventRecord> read_storm_csv_file(const std::string& path,
                                                  const IngestOptions& options,
                                                  IngestStats& stats) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open storm CSV '" + path + "'");
    return read_storm_csv(in, options, stats);
}

CpiTable read_cpi_csv(std::istream& in, int base_year) {
    CsvReader reader(in);
    std::vector<std::string> row;
    if (!reader.next_row(row)) throw DataError("CPI CSV: empty file");
    // Header optional: accept either "year,deflator..." or data rows directly.
    CpiTable table;
    table.base_year = base_year;
    const bool header = !row.empty() && row[0].find_first_not_of("0123456789") != std::string::npos;
    const auto add_row = [&table](const std::vector<std::string>& fields) {
        if (fields.size() < 2) throw DataError("CPI CSV: need two columns (year, deflator)");
        const int year = static_cast<int>(parse_long(fields[0], "CPI year"));
        const double factor = parse_double(fields[1], "CPI deflator");
        if (!(factor > 0.0)) throw DataError("CPI CSV: deflator must be positive");
        table.deflator[year] = factor;
    };
    if (!header) add_row(row);
    while (reader.next_row(row)) add_row(row);
    return table;
}

CpiTable read_cpi_csv_file(const std::string& path, int base_year) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open CPI CSV '" + path + "'");
    return read_cpi_csv(in, base_year);
}

LossPanel aggregate_semimonthly(const std::vector<StormEventRecord>& records,
                                const CpiTable& cpi, const StudyWindow& window,
                                const IngestOptions& options, IngestStats& stats) {
    if (window.end_year < window.start_year) throw EmptyWindow("study window is empty");
    if (records.empty()) throw NoRecords("no storm records to aggregate");

    // CPI coverage of the whole window is checked up front.
    for (int y = window.start_year; y <= window.end_year; ++y) cpi.at(y);

    const auto& types = canonical_event_types();
    const int n_periods = window.period_count();
    const auto n_types = static_cast<int>(types.size());

    LossPanel panel;
    panel.event_types = types;
    panel.periods.reserve(n_periods);
    for (int p = 0; p < n_periods; ++p) panel.periods.push_back(period_label(window, p));
    panel.losses = Eigen::MatrixXd::Zero(n_periods, n_types);

    for (const auto& rec : records) {
        const int period = period_index(window, rec.begin_date);
        if (period < 0) {
            ++stats.skipped_outside_window;
            continue;
        }
        const int type = canonical_type_index(rec.event_type, options.aliases);
        if (type < 0) {
            ++stats.skipped_unknown_type;
            continue;
        }
        double damage = 0.0;
        try {
            damage = parse_damage(rec.damage_property_raw);
        } catch (const MalformedDamage&) {
            if (options.strict) throw;
            ++stats.skipped_malformed_damage;
            continue;
        }
        panel.losses(period, type) += adjust_inflation(damage, rec.begin_date.year, cpi);
        ++stats.records_accepted;
    }

    panel.total_loss.resize(n_periods);
    for (int p = 0; p < n_periods; ++p) panel.total_loss(p) = panel.losses.row(p).sum();
    return panel;
}

void write_loss_panel_csv(std::ostream& out, const LossPanel& panel) {
    std::vector<std::string> row;
    row.push_back("period");
    row.insert(row.end(), panel.event_types.begin(), panel.event_types.end());
    row.push_back("TOTAL");
    write_csv_row(out, row);
    for (Eigen::Index p = 0; p < panel.losses.rows(); ++p) {
        row.clear();
        row.push_back(panel.periods[p]);
        for (Eigen::Index t = 0; t < panel.losses.cols(); ++t) {
            row.push_back(format_double(panel.losses(p, t)));
        }
        row.push_back(format_double(panel.total_loss(p)));
        write_csv_row(out, row);
    }
}

LossPanel read_loss_panel_csv(std::istream& in) {
    CsvReader reader(in);
    std::vector<std::string> row;
    if (!reader.next_row(row)) throw DataError("loss panel CSV: empty file");
    if (row.size() < 3 || row.front() != "period" || row.back() != "TOTAL") {
        throw DataError("loss panel CSV: unexpected header");
    }
    LossPanel panel;
    panel.event_types.assign(row.begin() + 1, row.end() - 1);
    const auto n_types = static_cast<Eigen::Index>(panel.event_types.size());

    std::vector<std::vector<double>> values;
    while (reader.next_row(row)) {
        if (row.size() != static_cast<std::size_t>(n_types) + 2) {
            throw DataError("loss panel CSV: ragged row");
        }
        panel.periods.push_back(row[0]);
        std::vector<double> cells(n_types + 1);
        for (Eigen::Index i = 0; i <= n_types; ++i) {
            cells[i] = parse_double(row[i + 1], "loss panel cell");
            if (cells[i] < 0.0) {
                throw DataError("loss panel CSV: negative loss in period " + row[0]);
            }
        }
        values.push_back(std::move(cells));
    }
    const auto n_periods = static_cast<Eigen::Index>(values.size());
    panel.losses.resize(n_periods, n_types);
    panel.total_loss.resize(n_periods);
    for (Eigen::Index p = 0; p < n_periods; ++p) {
        for (Eigen::Index t = 0; t < n_types; ++t) panel.losses(p, t) = values[p][t];
        panel.total_loss(p) = values[p][n_types];
    }
    return panel;
}

LossPanel read_loss_panel_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open loss panel CSV '" + path + "'");
    return read_loss_panel_csv(in);
}

}  // namespace ndi
