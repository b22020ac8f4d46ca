#pragma once

// Strict reader for unit-suffixed configuration documents.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace macrosize::cli {

enum class Dimension { mass, length, time, frequency, temperature, current, dimensionless };

/// Whitelisted unit spelling for a dimension (frequency reports rad/s).
const char* unit_name(Dimension d);

/// Parses "<number> <unit>". Hz is converted to rad/s and a note is appended.
/// Dimensionless values may also be plain numbers.
double parse_quantity(const nlohmann::json& value, Dimension d, const std::string& key,
                      std::vector<std::string>* notes = nullptr);

nlohmann::json load_document(const std::filesystem::path& path);

/// A JSON object whose keys are checked against an allowed set on construction.
class Section {
public:
    Section(const nlohmann::json& node, std::string where, const std::vector<std::string>& allowed,
            std::vector<std::string>* notes);

    bool has(const std::string& key) const;
    double quantity(const std::string& key, Dimension d) const;
    std::optional<double> optional_quantity(const std::string& key, Dimension d) const;
    double quantity_or(const std::string& key, Dimension d, double fallback) const;
    std::string text(const std::string& key) const;
    std::string text_or(const std::string& key, const std::string& fallback) const;
    int count(const std::string& key) const;
    int count_or(const std::string& key, int fallback) const;
    const nlohmann::json& node(const std::string& key) const;
    Section child(const std::string& key, const std::vector<std::string>& allowed) const;
    std::vector<std::string>* notes() const { return notes_; }

private:
    const nlohmann::json& require(const std::string& key) const;

    nlohmann::json node_;
    std::string where_;
    std::vector<std::string>* notes_;
};

}  // namespace macrosize::cli
