#pragma once

#include "ndi/periods.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ndi {

struct StormEventRecord {
    Date begin_date;
    std::string event_type;
    std::string damage_property_raw;
    std::string state;  // retained, unused by the math
};

// Year -> deflator to the base year; deflator(base_year) == 1.
struct CpiTable {
    int base_year = 0;
    std::unordered_map<int, double> deflator;

    double at(int year) const;
};

// Period x event-type panel of inflation-adjusted property losses.
struct LossPanel {
    std::vector<std::string> periods;      // semimonthly labels, strictly increasing
    std::vector<std::string> event_types;  // canonical names
    Eigen::MatrixXd losses;                // periods x types, nonnegative dollars
    Eigen::VectorXd total_loss;            // row sums
};

struct IngestStats {
    std::int64_t records_read = 0;
    std::int64_t records_accepted = 0;
    std::int64_t skipped_malformed_damage = 0;
    std::int64_t skipped_unknown_type = 0;
    std::int64_t skipped_outside_window = 0;
};

struct IngestOptions {
    bool strict = false;  // abort on malformed damage instead of skipping
    // Extra event-type aliases, keyed by normalized form.
    std::unordered_map<std::string, std::string> aliases;
    std::string col_yearmonth = "BEGIN_YEARMONTH";
    std::string col_day = "BEGIN_DAY";
    std::string col_event_type = "EVENT_TYPE";
    std::string col_damage = "DAMAGE_PROPERTY";
    std::string col_state = "STATE";
};

// The 50 event-type names the index covers.
const std::vector<std::string>& canonical_event_types();

// Uppercase, collapse whitespace / "/" / parentheses / hyphens, so raw
// variants like "Hurricane (Typhoon)" and "HURRICANE/TYPHOON" coincide.
std::string normalize_event_type(std::string_view raw);

// Canonical index for a raw event-type name, honoring alias overrides;
// -1 when unknown.
int canonical_type_index(std::string_view raw,
                         const std::unordered_map<std::string, std::string>& aliases = {});

// "25.00K" -> 25000; "" -> 0; suffixes K/M/B scale 1e3/1e6/1e9.
// Throws MalformedDamage otherwise.
double parse_damage(std::string_view raw);

// amount (dollars of `year`) -> base-year dollars.
double adjust_inflation(double amount, int year, const CpiTable& cpi);

std::vector<StormEventRecord> read_storm_csv(std::istream& in, const IngestOptions& options,
                                             IngestStats& stats);
std::vector<StormEventRecord> read_storm_csv_file(const std::string& path,
                                                  const IngestOptions& options,
                                                  IngestStats& stats);

CpiTable read_cpi_csv(std::istream& in, int base_year);
CpiTable read_cpi_csv_file(const std::string& path, int base_year);

LossPanel aggregate_semimonthly(const std::vector<StormEventRecord>& records,
                                const CpiTable& cpi, const StudyWindow& window,
                                const IngestOptions& options, IngestStats& stats);

void write_loss_panel_csv(std::ostream& out, const LossPanel& panel);
LossPanel read_loss_panel_csv(std::istream& in);
LossPanel read_loss_panel_csv_file(const std::string& path);

}  // namespace ndi
