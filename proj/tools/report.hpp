#pragma once

// Structured command output rendered as an aligned table, CSV or JSON.

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace macrosize::cli {

enum class Format { table, csv, json };

struct Field {
    std::string name;
    double value;
    std::string unit;  // empty for dimensionless numbers
    bool integer = false;
};

using Cell = std::variant<std::string, double>;

struct Report {
    std::string title;
    std::vector<Field> fields;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::string> notes;

    void add(std::string name, double value, std::string unit = {});
    void add_count(std::string name, long long value);
    void note(std::string text);
};

/// Six significant digits, shortest of fixed or scientific.
std::string format_number(double v);

void render(std::ostream& out, const Report& r, Format f);

}  // namespace macrosize::cli
