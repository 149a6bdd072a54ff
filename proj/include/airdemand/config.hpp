#pragma once

// TOML-like configuration files: [section] headers, key = value pairs,
// `#` comments, optionally double-quoted string values. Typed getters
// convert on access and report the offending section/key on failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace airdemand {

class ConfigFile {
public:
    ConfigFile() = default;

    static ConfigFile parse(const std::string& text, const std::string& origin = "<string>") {
        ConfigFile cfg;
        std::istringstream in(text);
        std::string line;
        std::string section;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::string_view sv = trim(line);
            if (sv.empty()) continue;
            if (sv.front() == '[') {
                if (sv.back() != ']')
                    throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                                             ": unterminated section header");
                section = std::string(trim(sv.substr(1, sv.size() - 2)));
                continue;
            }
            const std::size_t eq = sv.find('=');
            if (eq == std::string_view::npos)
                throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                                         ": expected key = value");
            std::string key(trim(sv.substr(0, eq)));
            std::string value(trim(sv.substr(eq + 1)));
            if (key.empty())
                throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": empty key");
            if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
                value = value.substr(1, value.size() - 2);
            cfg.values_[section + "." + key] = value;
        }
        return cfg;
    }

    static ConfigFile load(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open config file: " + path.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse(buf.str(), path.string());
    }

    bool has(const std::string& section, const std::string& key) const {
        return values_.count(section + "." + key) > 0;
    }

    std::optional<std::string> get(const std::string& section, const std::string& key) const {
        const auto it = values_.find(section + "." + key);
        if (it == values_.end()) return std::nullopt;
        return it->second;
    }

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
        const auto v = get(section, key);
        return v ? *v : fallback;
    }

    double get_double(const std::string& section, const std::string& key, double fallback) const {
        const auto v = get(section, key);
        if (!v) return fallback;
        try {
            std::size_t used = 0;
            const double parsed = std::stod(*v, &used);
            if (used != v->size()) throw std::invalid_argument("trailing characters");
            return parsed;
        } catch (const std::exception&) {
            throw std::runtime_error("config [" + section + "] " + key + ": expected a number, got '" +
                                     *v + "'");
        }
    }

    std::int64_t get_int(const std::string& section, const std::string& key,
                         std::int64_t fallback) const {
        const auto v = get(section, key);
        if (!v) return fallback;
        try {
            std::size_t used = 0;
            const long long parsed = std::stoll(*v, &used);
            if (used != v->size()) throw std::invalid_argument("trailing characters");
            return parsed;
        } catch (const std::exception&) {
            throw std::runtime_error("config [" + section + "] " + key +
                                     ": expected an integer, got '" + *v + "'");
        }
    }

    std::uint64_t get_uint(const std::string& section, const std::string& key,
                           std::uint64_t fallback) const {
        const auto v = get(section, key);
        if (!v) return fallback;
        try {
            std::size_t used = 0;
            const unsigned long long parsed = std::stoull(*v, &used);
            if (used != v->size()) throw std::invalid_argument("trailing characters");
            return parsed;
        } catch (const std::exception&) {
            throw std::runtime_error("config [" + section + "] " + key +
                                     ": expected an unsigned integer, got '" + *v + "'");
        }
    }

    // Comma-separated list value, e.g. neurons = "8,12,16".
    std::vector<std::string> get_list(const std::string& section, const std::string& key,
                                      const std::vector<std::string>& fallback) const {
        const auto v = get(section, key);
        if (!v) return fallback;
        std::vector<std::string> out;
        std::size_t start = 0;
        while (start <= v->size()) {
            const std::size_t comma = v->find(',', start);
            const std::string item(trim(std::string_view(*v).substr(
                start, comma == std::string::npos ? std::string::npos : comma - start)));
            if (!item.empty()) out.push_back(item);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (out.empty())
            throw std::runtime_error("config [" + section + "] " + key + ": empty list");
        return out;
    }

private:
    static std::string_view trim(std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
        return s;
    }

    std::map<std::string, std::string> values_;
};

}  // namespace airdemand
