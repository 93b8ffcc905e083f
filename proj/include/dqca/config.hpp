#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dqca {

// Flat key=value settings store: file lines (# comments, blank lines ignored)
// plus command-line overrides, last write wins. Typed getters record problems
// instead of throwing so every bad key is reported in one pass.
class Config {
public:
    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;
    std::optional<std::string> raw(const std::string& key) const;

    double get_double(const std::string& key, double fallback);
    std::int64_t get_int(const std::string& key, std::int64_t fallback);
    bool get_bool(const std::string& key, bool fallback);
    std::string get_string(const std::string& key, std::string fallback);

    // Post-read checks.
    void require_positive(const std::string& key, double value);
    void require_range(const std::string& key, double value, double lo, double hi);
    void fail(const std::string& key, const std::string& message);
    void check_known_keys(const std::vector<std::string>& allowed);

    const std::vector<std::string>& errors() const { return errors_; }
    std::vector<std::pair<std::string, std::string>> entries() const;

private:
    std::vector<std::pair<std::string, std::string>> entries_;  // insertion order
    std::vector<std::string> errors_;
};

} // namespace dqca
