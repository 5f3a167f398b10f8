#pragma once

#include <string>

namespace ndi {

struct Date {
    int year = 0;
    int month = 0;  // 1..12
    int day = 0;    // 1..31

    bool operator==(const Date&) const = default;
};

bool is_leap_year(int year);
int days_in_month(int year, int month);
bool is_valid_date(const Date& d);

// Whole-calendar-year study window. Each month splits into two
// semimonthly periods (days 1-15, day 16-end), the operative reading of
// "two-week increments": 24 periods per year.
struct StudyWindow {
    int start_year = 0;
    int end_year = 0;

    int years() const { return end_year - start_year + 1; }
    int period_count() const { return 24 * years(); }
    int month_count() const { return 12 * years(); }
    bool contains(const Date& d) const {
        return d.year >= start_year && d.year <= end_year;
    }
};

// 0-based period index of a date; -1 when outside the window.
int period_index(const StudyWindow& window, const Date& d);

// Label is the period's first calendar day, "YYYY-MM-DD".
std::string period_label(const StudyWindow& window, int index);

// 0-based month index; -1 when outside the window.
int month_index(const StudyWindow& window, const Date& d);
std::string month_label(const StudyWindow& window, int index);

// Month index ("YYYY-MM") within the window, -1 if outside.
int month_index_of_label(const StudyWindow& window, const std::string& label);

// Month (0-based within window) that owns semimonthly period `index`.
inline int period_month(int index) { return index / 2; }

}  // namespace ndi
