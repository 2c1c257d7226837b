#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace scalinglab::harness {

/// Configuration error carrying the offending key (or section) name.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& message, std::string key)
        : std::runtime_error(message), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

/// A flat, line-oriented key = value file with experiment-scoped [sections].
/// The unnamed leading section holds the experiment selector, seeds, and
/// output directory. '#' starts a comment. Order is preserved so a config
/// can be serialized back byte-stably.
class Config {
public:
    using Entries = std::vector<std::pair<std::string, std::string>>;

    void set(const std::string& section, const std::string& key, const std::string& value);
    std::optional<std::string> get(const std::string& section, const std::string& key) const;
    bool has_section(const std::string& section) const;
    const std::vector<std::pair<std::string, Entries>>& sections() const { return sections_; }

    /// Keys present in `section` but not in `allowed` — for strict
    /// validation with the offending key named.
    std::vector<std::string> unknown_keys(const std::string& section,
                                          const std::vector<std::string>& allowed) const;

private:
    std::vector<std::pair<std::string, Entries>> sections_;
};

Config parse_config_text(const std::string& text);
Config load_config(const std::string& path);
std::string serialize_config(const Config& config);

// Typed accessors; each throws ConfigError naming the key on a parse
// failure and returns the fallback when the key is absent.
long get_int(const Config&, const std::string& section, const std::string& key, long fallback);
double get_double(const Config&, const std::string& section, const std::string& key,
                  double fallback);
bool get_bool(const Config&, const std::string& section, const std::string& key, bool fallback);
std::string get_string(const Config&, const std::string& section, const std::string& key,
                       const std::string& fallback);
std::vector<double> get_double_list(const Config&, const std::string& section,
                                    const std::string& key, const std::vector<double>& fallback);
std::vector<long> get_int_list(const Config&, const std::string& section, const std::string& key,
                               const std::vector<long>& fallback);
std::vector<std::uint64_t> get_seed_list(const Config&, const std::string& section,
                                         const std::string& key,
                                         const std::vector<std::uint64_t>& fallback);

}  // namespace scalinglab::harness
