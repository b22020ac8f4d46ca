#include "report.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace macrosize::cli {

void Report::add(std::string name, double value, std::string unit) {
    fields.push_back(Field{std::move(name), value, std::move(unit)});
}

void Report::add_count(std::string name, long long value) {
    fields.push_back(Field{std::move(name), static_cast<double>(value), {}, true});
}

void Report::note(std::string text) { notes.push_back(std::move(text)); }

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

namespace {

std::string field_text(const Field& f) {
    if (!f.integer) return format_number(f.value);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", f.value);
    return buf;
}

std::string cell_text(const Cell& c) {
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    return format_number(std::get<double>(c));
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

void render_table(std::ostream& out, const Report& r) {
    out << "# " << r.title << "\n";
    std::size_t name_w = 0;
    for (const auto& f : r.fields) name_w = std::max(name_w, f.name.size());
    for (const auto& f : r.fields) {
        std::string line = f.name + std::string(name_w - f.name.size() + 2, ' ') + field_text(f);
        if (!f.unit.empty()) line += " " + f.unit;
        out << line << "\n";
    }
    if (!r.columns.empty()) {
        if (!r.fields.empty()) out << "\n";
        std::vector<std::size_t> width(r.columns.size());
        for (std::size_t c = 0; c < r.columns.size(); ++c) width[c] = r.columns[c].size();
        for (const auto& row : r.rows) {
            for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) {
                width[c] = std::max(width[c], cell_text(row[c]).size());
            }
        }
        auto emit = [&](const std::vector<std::string>& cells) {
            std::string line;
            for (std::size_t c = 0; c < cells.size(); ++c) {
                line += cells[c];
                if (c + 1 < cells.size()) line += std::string(width[c] - cells[c].size() + 2, ' ');
            }
            out << line << "\n";
        };
        emit(r.columns);
        for (const auto& row : r.rows) {
            std::vector<std::string> cells;
            for (const auto& c : row) cells.push_back(cell_text(c));
            emit(cells);
        }
    }
    for (const auto& n : r.notes) out << "note: " << n << "\n";
}

void render_csv(std::ostream& out, const Report& r) {
    if (!r.fields.empty()) {
        out << "quantity,value,unit\n";
        for (const auto& f : r.fields) out << csv_escape(f.name) << "," << field_text(f) << "," << f.unit << "\n";
    }
    if (!r.columns.empty()) {
        if (!r.fields.empty()) out << "\n";
        for (std::size_t c = 0; c < r.columns.size(); ++c) out << (c ? "," : "") << csv_escape(r.columns[c]);
        out << "\n";
        for (const auto& row : r.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_escape(cell_text(row[c]));
            out << "\n";
        }
    }
    for (const auto& n : r.notes) out << "# note: " << n << "\n";
}

void render_json(std::ostream& out, const Report& r) {
    nlohmann::ordered_json doc;
    doc["title"] = r.title;
    if (!r.fields.empty()) {
        auto fields = nlohmann::ordered_json::array();
        for (const auto& f : r.fields) {
            nlohmann::ordered_json item;
            item["name"] = f.name;
            if (f.integer) {
                item["value"] = static_cast<long long>(f.value);
            } else {
                item["value"] = f.value;
            }
            if (!f.unit.empty()) item["unit"] = f.unit;
            fields.push_back(item);
        }
        doc["fields"] = fields;
    }
    if (!r.columns.empty()) {
        doc["columns"] = r.columns;
        auto rows = nlohmann::ordered_json::array();
        for (const auto& row : r.rows) {
            auto cells = nlohmann::ordered_json::array();
            for (const auto& c : row) {
                if (const auto* s = std::get_if<std::string>(&c)) {
                    cells.push_back(*s);
                } else {
                    cells.push_back(std::get<double>(c));
                }
            }
            rows.push_back(cells);
        }
        doc["rows"] = rows;
    }
    if (!r.notes.empty()) doc["notes"] = r.notes;
    out << doc.dump(2) << "\n";
}

}  // namespace

void render(std::ostream& out, const Report& r, Format f) {
    switch (f) {
        case Format::table: render_table(out, r); break;
        case Format::csv: render_csv(out, r); break;
        case Format::json: render_json(out, r); break;
    }
}

}  // namespace macrosize::cli
