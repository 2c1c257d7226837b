#include "scalinglab/harness/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace scalinglab::harness {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

double parse_double_or_throw(const std::string& value, const std::string& key) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0' || errno == ERANGE) {
        throw ConfigError("key '" + key + "': cannot parse '" + value + "' as a number", key);
    }
    return v;
}

long parse_int_or_throw(const std::string& value, const std::string& key) {
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0' || errno == ERANGE) {
        throw ConfigError("key '" + key + "': cannot parse '" + value + "' as an integer", key);
    }
    return v;
}

}  // namespace

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
    for (auto& [name, entries] : sections_) {
        if (name == section) {
            for (auto& [k, v] : entries) {
                if (k == key) {
                    v = value;
                    return;
                }
            }
            entries.emplace_back(key, value);
            return;
        }
    }
    sections_.push_back({section, {{key, value}}});
}

std::optional<std::string> Config::get(const std::string& section, const std::string& key) const {
    for (const auto& [name, entries] : sections_) {
        if (name != section) continue;
        for (const auto& [k, v] : entries) {
            if (k == key) return v;
        }
    }
    return std::nullopt;
}

bool Config::has_section(const std::string& section) const {
    return std::any_of(sections_.begin(), sections_.end(),
                       [&](const auto& s) { return s.first == section; });
}

std::vector<std::string> Config::unknown_keys(const std::string& section,
                                              const std::vector<std::string>& allowed) const {
    std::vector<std::string> unknown;
    for (const auto& [name, entries] : sections_) {
        if (name != section) continue;
        for (const auto& [k, v] : entries) {
            if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
                unknown.push_back(k);
            }
        }
    }
    return unknown;
}

Config parse_config_text(const std::string& text) {
    Config config;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header",
                                  line);
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) {
                throw ConfigError("line " + std::to_string(line_no) + ": empty section name", line);
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'", line);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": empty key", line);
        }
        config.set(section, key, value);
    }
    return config;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path, path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

std::string serialize_config(const Config& config) {
    std::ostringstream out;
    bool first = true;
    for (const auto& [name, entries] : config.sections()) {
        if (!name.empty()) {
            if (!first) out << "\n";
            out << "[" << name << "]\n";
        }
        for (const auto& [k, v] : entries) {
            out << k << " = " << v << "\n";
        }
        first = false;
    }
    return out.str();
}

long get_int(const Config& c, const std::string& section, const std::string& key, long fallback) {
    const auto v = c.get(section, key);
    return v ? parse_int_or_throw(*v, key) : fallback;
}

double get_double(const Config& c, const std::string& section, const std::string& key,
                  double fallback) {
    const auto v = c.get(section, key);
    return v ? parse_double_or_throw(*v, key) : fallback;
}

bool get_bool(const Config& c, const std::string& section, const std::string& key, bool fallback) {
    const auto v = c.get(section, key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
    if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
    throw ConfigError("key '" + key + "': cannot parse '" + *v + "' as a boolean", key);
}

std::string get_string(const Config& c, const std::string& section, const std::string& key,
                       const std::string& fallback) {
    const auto v = c.get(section, key);
    return v ? *v : fallback;
}

std::vector<double> get_double_list(const Config& c, const std::string& section,
                                    const std::string& key, const std::vector<double>& fallback) {
    const auto v = c.get(section, key);
    if (!v) return fallback;
    std::vector<double> out;
    for (const auto& item : split_list(*v)) out.push_back(parse_double_or_throw(item, key));
    return out;  // an explicitly empty value is a valid empty list
}

std::vector<long> get_int_list(const Config& c, const std::string& section, const std::string& key,
                               const std::vector<long>& fallback) {
    const auto v = c.get(section, key);
    if (!v) return fallback;
    std::vector<long> out;
    for (const auto& item : split_list(*v)) out.push_back(parse_int_or_throw(item, key));
    return out;
}

std::vector<std::uint64_t> get_seed_list(const Config& c, const std::string& section,
                                         const std::string& key,
                                         const std::vector<std::uint64_t>& fallback) {
    const auto v = c.get(section, key);
    if (!v) return fallback;
    std::vector<std::uint64_t> out;
    for (const auto& item : split_list(*v)) {
        out.push_back(static_cast<std::uint64_t>(parse_int_or_throw(item, key)));
    }
    if (out.empty()) throw ConfigError("key '" + key + "': empty seed list", key);
    return out;
}

}  // namespace scalinglab::harness
