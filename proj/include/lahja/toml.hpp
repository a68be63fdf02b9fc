#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <string>

#include "lahja/errors.hpp"

namespace lahja {

/// Flat TOML subset for run configuration: `key = value` pairs, optional
/// [section] headers (flattened to "section.key"), '#' comments, and
/// string / integer / float / boolean values. Nested tables and arrays are
/// out of scope for config files.
class TomlConfig {
public:
    static TomlConfig parse_file(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ParseError("cannot open config file: " + path);
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        return parse(text, path);
    }

    static TomlConfig parse(const std::string& text, const std::string& origin = "<string>") {
        TomlConfig cfg;
        std::string section;
        std::size_t lineno = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t end = text.find('\n', pos);
            if (end == std::string::npos) end = text.size();
            std::string line = text.substr(pos, end - pos);
            pos = end + 1;
            ++lineno;
            strip_comment(line);
            line = trim(line);
            if (line.empty()) {
                if (pos > text.size()) break;
                continue;
            }
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ParseError(origin + ":" + std::to_string(lineno) +
                                     ": unterminated section header");
                section = trim(line.substr(1, line.size() - 2));
                continue;
            }
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ParseError(origin + ":" + std::to_string(lineno) + ": expected key = value");
            std::string key = trim(line.substr(0, eq));
            std::string raw = trim(line.substr(eq + 1));
            if (key.empty() || raw.empty())
                throw ParseError(origin + ":" + std::to_string(lineno) + ": empty key or value");
            if (!section.empty()) key = section + "." + key;
            cfg.values_[key] = unquote(raw, origin, lineno);
        }
        return cfg;
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_string(const std::string& key, const std::string& fallback = {}) const {
        auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    std::int64_t get_int(const std::string& key, std::int64_t fallback = 0) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        try {
            return std::stoll(it->second);
        } catch (...) {
            throw ParseError("config key " + key + " is not an integer: " + it->second);
        }
    }

    double get_double(const std::string& key, double fallback = 0.0) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        try {
            return std::stod(it->second);
        } catch (...) {
            throw ParseError("config key " + key + " is not a number: " + it->second);
        }
    }

    bool get_bool(const std::string& key, bool fallback = false) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        if (it->second == "true") return true;
        if (it->second == "false") return false;
        throw ParseError("config key " + key + " is not a boolean: " + it->second);
    }

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    static void strip_comment(std::string& line) {
        bool in_string = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_string = !in_string;
            if (line[i] == '#' && !in_string) {
                line.resize(i);
                return;
            }
        }
    }

    static std::string trim(const std::string& s) {
        auto b = s.find_first_not_of(" \t\r");
        auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    }

    static std::string unquote(const std::string& raw, const std::string& origin,
                               std::size_t lineno) {
        if (raw.front() != '"') return raw;
        if (raw.size() < 2 || raw.back() != '"')
            throw ParseError(origin + ":" + std::to_string(lineno) + ": unterminated string");
        std::string out;
        for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
            if (raw[i] == '\\' && i + 2 < raw.size()) {
                char c = raw[++i];
                switch (c) {
                    case 'n': out.push_back('\n'); break;
                    case 't': out.push_back('\t'); break;
                    case '"': out.push_back('"'); break;
                    case '\\': out.push_back('\\'); break;
                    default: out.push_back(c);
                }
            } else {
                out.push_back(raw[i]);
            }
        }
        return out;
    }

    std::map<std::string, std::string> values_;
};

}  // namespace lahja
