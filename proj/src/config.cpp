#include "dqca/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dqca {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

} // namespace

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str());
}

Config Config::from_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string body = trim(line.substr(0, line.find('#')));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            cfg.errors_.push_back("line " + std::to_string(lineno) +
                                  ": expected key=value, got '" + body + "'");
            continue;
        }
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty()) {
            cfg.errors_.push_back("line " + std::to_string(lineno) + ": empty key");
            continue;
        }
        cfg.set(key, value);
    }
    return cfg;
}

void Config::set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : entries_) {
        if (k == key) {
            v = value;
            return;
        }
    }
    entries_.emplace_back(key, value);
}

bool Config::has(const std::string& key) const { return raw(key).has_value(); }

std::optional<std::string> Config::raw(const std::string& key) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return v;
    return std::nullopt;
}

double Config::get_double(const std::string& key, double fallback) {
    const auto v = raw(key);
    if (!v) return fallback;
    const char* begin = v->data();
    const char* end = begin + v->size();
    double parsed = 0.0;
    const auto res = std::from_chars(begin, end, parsed);
    if (res.ec != std::errc{} || res.ptr != end) {
        errors_.push_back(key + ": cannot parse '" + *v + "' as a real number");
        return fallback;
    }
    return parsed;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) {
    const auto v = raw(key);
    if (!v) return fallback;
    const char* begin = v->data();
    const char* end = begin + v->size();
    std::int64_t parsed = 0;
    const auto res = std::from_chars(begin, end, parsed);
    if (res.ec != std::errc{} || res.ptr != end) {
        errors_.push_back(key + ": cannot parse '" + *v + "' as an integer");
        return fallback;
    }
    return parsed;
}

bool Config::get_bool(const std::string& key, bool fallback) {
    const auto v = raw(key);
    if (!v) return fallback;
    std::string low = *v;
    std::transform(low.begin(), low.end(), low.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    if (low == "true" || low == "1" || low == "yes" || low == "on") return true;
    if (low == "false" || low == "0" || low == "no" || low == "off") return false;
    errors_.push_back(key + ": cannot parse '" + *v + "' as a boolean");
    return fallback;
}

std::string Config::get_string(const std::string& key, std::string fallback) {
    const auto v = raw(key);
    return v ? *v : fallback;
}

void Config::require_positive(const std::string& key, double value) {
    if (!(value > 0.0))
        errors_.push_back(key + ": must be positive, got " + std::to_string(value));
}

void Config::require_range(const std::string& key, double value, double lo, double hi) {
    if (!(value >= lo) || !(value <= hi))
        errors_.push_back(key + ": must lie in [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "], got " + std::to_string(value));
}

void Config::fail(const std::string& key, const std::string& message) {
    errors_.push_back(key + ": " + message);
}

void Config::check_known_keys(const std::vector<std::string>& allowed) {
    for (const auto& [k, v] : entries_)
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
            errors_.push_back(k + ": unknown key");
}

std::vector<std::pair<std::string, std::string>> Config::entries() const { return entries_; }

} // namespace dqca
