#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "macrosize/error.hpp"

namespace macrosize::cli {

namespace {

constexpr const char* kWhitelist[] = {"kg", "m", "s", "Hz", "rad/s", "K", "A", "dimensionless"};

bool whitelisted(const std::string& unit) {
    for (const char* u : kWhitelist) {
        if (unit == u) return true;
    }
    return false;
}

double parse_number(const std::string& token, const std::string& key) {
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (!token.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw ParseError("key '" + key + "': malformed number '" + token + "'");
    if (!std::isfinite(v)) throw ParseError("key '" + key + "': non-finite value '" + token + "'");
    return v;
}

}  // namespace

const char* unit_name(Dimension d) {
    switch (d) {
        case Dimension::mass: return "kg";
        case Dimension::length: return "m";
        case Dimension::time: return "s";
        case Dimension::frequency: return "rad/s";
        case Dimension::temperature: return "K";
        case Dimension::current: return "A";
        case Dimension::dimensionless: return "dimensionless";
    }
    return "?";
}

double parse_quantity(const nlohmann::json& value, Dimension d, const std::string& key,
                      std::vector<std::string>* notes) {
    if (value.is_number()) {
        if (d != Dimension::dimensionless) {
            throw ParseError("key '" + key + "': missing unit, expected a string like \"1 " + unit_name(d) + "\"");
        }
        const double v = value.get<double>();
        if (!std::isfinite(v)) throw ParseError("key '" + key + "': non-finite value");
        return v;
    }
    if (!value.is_string()) throw ParseError("key '" + key + "': expected a quantity string");

    std::istringstream in(value.get<std::string>());
    std::string number;
    std::string unit;
    std::string extra;
    if (!(in >> number)) throw ParseError("key '" + key + "': empty quantity");
    in >> unit;
    if (in >> extra) throw ParseError("key '" + key + "': trailing text '" + extra + "'");
    const double v = parse_number(number, key);
    if (unit.empty()) {
        if (d == Dimension::dimensionless) return v;
        throw ParseError("key '" + key + "': missing unit, expected " + unit_name(d));
    }
    if (!whitelisted(unit)) throw ParseError("key '" + key + "': unit '" + unit + "' is not in the whitelist");

    if (d == Dimension::frequency && unit == "Hz") {
        const double omega = 2.0 * std::numbers::pi * v;
        if (notes) {
            std::ostringstream os;
            os << key << ": " << v << " Hz read as omega / 2 pi, converted to " << omega << " rad/s (x 2 pi)";
            notes->push_back(os.str());
        }
        return omega;
    }
    if (unit != unit_name(d)) {
        throw ParseError("key '" + key + "': expected unit " + unit_name(d) + ", got '" + unit + "'");
    }
    return v;
}

nlohmann::json load_document(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config '" + path.string() + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("config '" + path.string() + "': " + e.what());
    }
}

Section::Section(const nlohmann::json& node, std::string where, const std::vector<std::string>& allowed,
                 std::vector<std::string>* notes)
    : node_(node), where_(std::move(where)), notes_(notes) {
    if (!node_.is_object()) throw ParseError(where_ + ": expected an object");
    for (const auto& item : node_.items()) {
        bool known = false;
        for (const auto& a : allowed) known = known || a == item.key();
        if (!known) throw ParseError(where_ + ": unknown key '" + item.key() + "'");
    }
}

bool Section::has(const std::string& key) const { return node_.contains(key); }

const nlohmann::json& Section::require(const std::string& key) const {
    if (!node_.contains(key)) throw ParseError(where_ + ": missing key '" + key + "'");
    return node_.at(key);
}

double Section::quantity(const std::string& key, Dimension d) const {
    return parse_quantity(require(key), d, key, notes_);
}

std::optional<double> Section::optional_quantity(const std::string& key, Dimension d) const {
    if (!has(key)) return std::nullopt;
    return quantity(key, d);
}

double Section::quantity_or(const std::string& key, Dimension d, double fallback) const {
    return has(key) ? quantity(key, d) : fallback;
}

std::string Section::text(const std::string& key) const {
    const auto& v = require(key);
    if (!v.is_string()) throw ParseError(where_ + ": key '" + key + "' must be a string");
    return v.get<std::string>();
}

std::string Section::text_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? text(key) : fallback;
}

int Section::count(const std::string& key) const {
    const auto& v = require(key);
    if (!v.is_number_integer()) throw ParseError(where_ + ": key '" + key + "' must be an integer");
    return v.get<int>();
}

int Section::count_or(const std::string& key, int fallback) const { return has(key) ? count(key) : fallback; }

const nlohmann::json& Section::node(const std::string& key) const { return require(key); }

Section Section::child(const std::string& key, const std::vector<std::string>& allowed) const {
    return Section(require(key), where_ + "." + key, allowed, notes_);
}

}  // namespace macrosize::cli
