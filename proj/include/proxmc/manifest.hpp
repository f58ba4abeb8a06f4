#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "proxmc/errors.hpp"

namespace proxmc {

/* Run manifest: every artifact a run writes, with a content hash, plus the
 * seeds and version tags needed to reproduce it.  The JSON is emitted with
 * sorted keys and fixed formatting so identical runs give identical bytes.
 */

inline std::uint64_t fnv1a64(const char* data, std::size_t n) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= std::uint64_t(static_cast<unsigned char>(data[i]));
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t hash_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw input_error("hash_file: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    const std::string s = buf.str();
    return fnv1a64(s.data(), s.size());
}

inline std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace detail {

inline std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace detail

struct Manifest {
    std::string tool_version;
    std::string subcommand;
    std::uint64_t base_seed = 0;
    std::vector<std::uint64_t> chain_seeds;
    std::map<std::string, std::string> files;  // relative path -> fnv1a64 hex

    void add_file(const std::string& run_dir, const std::string& rel_path) {
        files[rel_path] = hash_hex(hash_file(run_dir + "/" + rel_path));
    }

    std::string to_json() const {
        std::ostringstream out;
        out << "{\n";
        out << "  \"base_seed\": " << base_seed << ",\n";
        out << "  \"chain_seeds\": [";
        for (std::size_t i = 0; i < chain_seeds.size(); ++i) out << (i ? ", " : "") << chain_seeds[i];
        out << "],\n";
        out << "  \"files\": {\n";
        std::size_t i = 0;
        for (const auto& [path, hash] : files) {
            out << "    \"" << detail::json_escape(path) << "\": \"" << hash << "\"";
            out << (++i < files.size() ? ",\n" : "\n");
        }
        out << "  },\n";
        out << "  \"subcommand\": \"" << detail::json_escape(subcommand) << "\",\n";
        out << "  \"tool_version\": \"" << detail::json_escape(tool_version) << "\"\n";
        out << "}\n";
        return out.str();
    }

    void write(const std::string& run_dir) const {
        const std::string path = run_dir + "/manifest.json";
        std::ofstream f(path, std::ios::binary);
        if (!f) throw input_error("Manifest::write: cannot open '" + path + "'");
        f << to_json();
    }

    // Re-hash every listed file and report mismatches (empty = all verified).
    std::vector<std::string> verify(const std::string& run_dir) const {
        std::vector<std::string> bad;
        for (const auto& [path, hash] : files)
            if (hash_hex(hash_file(run_dir + "/" + path)) != hash) bad.push_back(path);
        return bad;
    }
};

}  // namespace proxmc
