#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "proxmc/errors.hpp"

namespace proxmc {

/* Flat sectioned key/value config files:
 *
 *   # comment (also ';'); whole-line comments only
 *   [section]
 *   key = value
 *
 * Values are kept as raw trimmed strings; typed accessors convert on demand
 * and report the offending line on failure.  Every entry records whether it
 * was read, so a run can reject configs containing keys it never consumed
 * (typos would otherwise silently fall back to defaults).
 * parse → serialize → parse is idempotent.
 */

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

struct ConfigEntry {
    std::string key;
    std::string value;
    int line = 0;
    mutable bool consumed = false;
};

struct ConfigSection {
    std::string name;
    int line = 0;
    std::vector<ConfigEntry> entries;

    const ConfigEntry* find(const std::string& key) const {
        for (const auto& e : entries)
            if (e.key == key) return &e;
        return nullptr;
    }
};

class ConfigFile {
  public:
    static ConfigFile parse_string(const std::string& text, const std::string& origin = "<string>") {
        ConfigFile cfg;
        cfg.origin_ = origin;
        std::istringstream in(text);
        std::string raw;
        int line_no = 0;
        ConfigSection* cur = nullptr;
        while (std::getline(in, raw)) {
            ++line_no;
            const std::string line = detail::trim(raw);
            if (line.empty() || line[0] == '#' || line[0] == ';') continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw config_error(cfg.where(line_no) + ": unterminated section header");
                const std::string name = detail::trim(line.substr(1, line.size() - 2));
                if (name.empty()) throw config_error(cfg.where(line_no) + ": empty section name");
                for (const auto& s : cfg.sections_)
                    if (s.name == name)
                        throw config_error(cfg.where(line_no) + ": duplicate section [" + name + "]");
                cfg.sections_.push_back({name, line_no, {}});
                cur = &cfg.sections_.back();
                continue;
            }
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw config_error(cfg.where(line_no) + ": expected 'key = value' or '[section]'");
            if (!cur) throw config_error(cfg.where(line_no) + ": key/value before any [section]");
            const std::string key = detail::trim(line.substr(0, eq));
            const std::string value = detail::trim(line.substr(eq + 1));
            if (key.empty()) throw config_error(cfg.where(line_no) + ": empty key");
            if (cur->find(key))
                throw config_error(cfg.where(line_no) + ": duplicate key '" + key + "' in [" + cur->name + "]");
            cur->entries.push_back({key, value, line_no, false});
        }
        return cfg;
    }

    static ConfigFile parse_file(const std::string& path) {
        std::ifstream f(path, std::ios::binary);
        if (!f) throw config_error("cannot open config file '" + path + "'");
        std::ostringstream buf;
        buf << f.rdbuf();
        return parse_string(buf.str(), path);
    }

    std::string serialize() const {
        std::ostringstream out;
        bool first = true;
        for (const auto& s : sections_) {
            if (!first) out << "\n";
            first = false;
            out << "[" << s.name << "]\n";
            for (const auto& e : s.entries) out << e.key << " = " << e.value << "\n";
        }
        return out.str();
    }

    const std::vector<ConfigSection>& sections() const { return sections_; }

    bool has_section(const std::string& name) const { return find_section(name) != nullptr; }

    bool has(const std::string& section, const std::string& key) const {
        const ConfigSection* s = find_section(section);
        return s && s->find(key);
    }

    std::string get_string(const std::string& section, const std::string& key) const {
        return require(section, key).value;
    }
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
        const ConfigEntry* e = lookup(section, key);
        return e ? e->value : fallback;
    }

    double get_double(const std::string& section, const std::string& key) const {
        return to_double(require(section, key));
    }
    double get_double(const std::string& section, const std::string& key, double fallback) const {
        const ConfigEntry* e = lookup(section, key);
        return e ? to_double(*e) : fallback;
    }

    long long get_int(const std::string& section, const std::string& key) const {
        return to_int(require(section, key));
    }
    long long get_int(const std::string& section, const std::string& key, long long fallback) const {
        const ConfigEntry* e = lookup(section, key);
        return e ? to_int(*e) : fallback;
    }

    bool get_bool(const std::string& section, const std::string& key, bool fallback) const {
        const ConfigEntry* e = lookup(section, key);
        if (!e) return fallback;
        if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
        if (e->value == "false" || e->value == "0" || e->value == "no") return false;
        throw config_error(where(e->line) + ": expected boolean for '" + key + "', got '" + e->value + "'");
    }

    std::vector<double> get_double_list(const std::string& section, const std::string& key) const {
        const ConfigEntry& e = require(section, key);
        std::vector<double> out;
        for (const std::string& tok : split_list(e.value)) {
            ConfigEntry tmp{e.key, tok, e.line, true};
            out.push_back(to_double(tmp));
        }
        if (out.empty()) throw config_error(where(e.line) + ": empty list for '" + key + "'");
        return out;
    }

    std::vector<long long> get_int_list(const std::string& section, const std::string& key) const {
        const ConfigEntry& e = require(section, key);
        std::vector<long long> out;
        for (const std::string& tok : split_list(e.value)) {
            ConfigEntry tmp{e.key, tok, e.line, true};
            out.push_back(to_int(tmp));
        }
        if (out.empty()) throw config_error(where(e.line) + ": empty list for '" + key + "'");
        return out;
    }

    // Call after all accessors: rejects keys the run never looked at.
    void check_all_consumed() const {
        for (const auto& s : sections_)
            for (const auto& e : s.entries)
                if (!e.consumed)
                    throw config_error(where(e.line) + ": unknown key '" + e.key + "' in [" + s.name + "]");
    }

    std::string where(int line) const { return origin_ + ":" + std::to_string(line); }

  private:
    const ConfigSection* find_section(const std::string& name) const {
        for (const auto& s : sections_)
            if (s.name == name) return &s;
        return nullptr;
    }

    const ConfigEntry* lookup(const std::string& section, const std::string& key) const {
        const ConfigSection* s = find_section(section);
        if (!s) return nullptr;
        const ConfigEntry* e = s->find(key);
        if (e) e->consumed = true;
        return e;
    }

    const ConfigEntry& require(const std::string& section, const std::string& key) const {
        const ConfigEntry* e = lookup(section, key);
        if (!e)
            throw config_error(origin_ + ": missing required key '" + key + "' in [" + section + "]");
        return *e;
    }

    double to_double(const ConfigEntry& e) const {
        const char* s = e.value.c_str();
        char* end = nullptr;
        const double v = std::strtod(s, &end);
        if (end == s || *end != '\0')
            throw config_error(where(e.line) + ": expected number for '" + e.key + "', got '" + e.value + "'");
        return v;
    }

    long long to_int(const ConfigEntry& e) const {
        const char* s = e.value.c_str();
        char* end = nullptr;
        const long long v = std::strtoll(s, &end, 10);
        if (end == s || *end != '\0')
            throw config_error(where(e.line) + ": expected integer for '" + e.key + "', got '" + e.value + "'");
        return v;
    }

    static std::vector<std::string> split_list(const std::string& v) {
        std::vector<std::string> out;
        std::string cur;
        for (char c : v) {
            if (c == ',') {
                const std::string t = detail::trim(cur);
                if (!t.empty()) out.push_back(t);
                cur.clear();
            } else {
                cur += c;
            }
        }
        const std::string t = detail::trim(cur);
        if (!t.empty()) out.push_back(t);
        return out;
    }

    std::string origin_;
    std::vector<ConfigSection> sections_;
};

}  // namespace proxmc
