#include "ndi/csvio.hpp"

#include "ndi/errors.hpp"

#include <charconv>
#include <cstdlib>
#include <system_error>

namespace ndi {

bool CsvReader::next_row(std::vector<std::string>& fields) {
    fields.clear();
    std::string field;
    bool in_quotes = false;
    bool any = false;
    int c;
    while ((c = in_.get()) != EOF) {
        any = true;
        const char ch = static_cast<char>(c);
        if (in_quotes) {
            if (ch == '"') {
                if (in_.peek() == '"') {
                    field.push_back('"');
                    in_.get();
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(ch);
            }
            continue;
        }
        switch (ch) {
            case '"':
                in_quotes = true;
                break;
            case ',':
                fields.push_back(std::move(field));
                field.clear();
                break;
            case '\r':
                break;
            case '\n':
                if (fields.empty() && field.empty()) {
                    // blank line, keep scanning
                    any = false;
                    continue;
                }
                fields.push_back(std::move(field));
                return true;
            default:
                field.push_back(ch);
        }
    }
    if (!any && fields.empty() && field.empty()) return false;
    if (!fields.empty() || !field.empty()) {
        fields.push_back(std::move(field));
        return true;
    }
    return false;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (const char ch : field) {
        if (ch == '"') out += "\"\"";
        else out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.put(',');
        out << csv_escape(fields[i]);
    }
    out.put('\n');
}

std::string format_double(double value) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) throw NumericError("format_double: conversion failed");
    return std::string(buf, ptr);
}

double parse_double(const std::string& text, const char* context) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || end != begin + text.size()) {
        throw DataError(std::string(context) + ": cannot parse number '" + text + "'");
    }
    return v;
}

long parse_long(const std::string& text, const char* context) {
    long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw DataError(std::string(context) + ": cannot parse integer '" + text + "'");
    }
    return v;
}

}  // namespace ndi
