#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace ndi {

// RFC-4180 style reader: quoted fields may contain commas, doubled
// quotes, and embedded newlines.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    // Returns false at end of input. Empty lines are skipped.
    bool next_row(std::vector<std::string>& fields);

private:
    std::istream& in_;
};

std::string csv_escape(const std::string& field);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

// Shortest round-trip decimal representation.
std::string format_double(double value);
double parse_double(const std::string& text, const char* context);
long parse_long(const std::string& text, const char* context);

}  // namespace ndi
