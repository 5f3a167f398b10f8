#include "ndi/periods.hpp"

#include "ndi/errors.hpp"

#include <cstdio>

namespace ndi {

bool is_leap_year(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
    static constexpr int lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month < 1 || month > 12) throw DataError("days_in_month: month out of range");
    if (month == 2 && is_leap_year(year)) return 29;
    return lengths[month - 1];
}

bool is_valid_date(const Date& d) {
    if (d.month < 1 || d.month > 12) return false;
    if (d.day < 1 || d.day > days_in_month(d.year, d.month)) return false;
    return true;
}

int period_index(const StudyWindow& window, const Date& d) {
    if (!window.contains(d)) return -1;
    const int half = d.day >= 16 ? 1 : 0;
    return 24 * (d.year - window.start_year) + 2 * (d.month - 1) + half;
}

std::string period_label(const StudyWindow& window, int index) {
    if (index < 0 || index >= window.period_count()) {
        throw DataError("period_label: index out of range");
    }
    const int year = window.start_year + index / 24;
    const int month = (index % 24) / 2 + 1;
    const int day = (index % 2 == 0) ? 1 : 16;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

int month_index(const StudyWindow& window, const Date& d) {
    if (!window.contains(d)) return -1;
    return 12 * (d.year - window.start_year) + (d.month - 1);
}

std::string month_label(const StudyWindow& window, int index) {
    if (index < 0 || index >= window.month_count()) {
        throw DataError("month_label: index out of range");
    }
    const int year = window.start_year + index / 12;
    const int month = index % 12 + 1;
    char buf[12];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
    return buf;
}

int month_index_of_label(const StudyWindow& window, const std::string& label) {
    if (label.size() < 7 || label[4] != '-') return -1;
    int year = 0, month = 0;
    if (std::sscanf(label.c_str(), "%d-%d", &year, &month) != 2) return -1;
    if (month < 1 || month > 12) return -1;
    if (year < window.start_year || year > window.end_year) return -1;
    return 12 * (year - window.start_year) + (month - 1);
}

}  // namespace ndi
