#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "proxmc/errors.hpp"
#include "proxmc/vec.hpp"

namespace proxmc {

/* CSV emission with deterministic number formatting: %.17g round-trips
 * doubles exactly and is locale-independent through snprintf with the C
 * locale conventions for digits.
 */

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CsvWriter {
    std::ofstream f;

    explicit CsvWriter(const std::string& path) : f(path, std::ios::binary) {
        if (!f) throw input_error("CsvWriter: cannot open '" + path + "' for writing");
    }

    void header(const std::vector<std::string>& names) {
        for (std::size_t i = 0; i < names.size(); ++i) f << (i ? "," : "") << names[i];
        f << "\n";
    }

    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i)
            f << (i ? "," : "") << format_double(values[i]);
        f << "\n";
    }

    void row_mixed(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) f << (i ? "," : "") << cells[i];
        f << "\n";
    }
};

// columns[i] is one column; all must share a length
inline void write_csv_columns(const std::string& path, const std::vector<std::string>& names,
                              const std::vector<const Vec*>& columns) {
    if (names.size() != columns.size()) throw input_error("write_csv_columns: name/column mismatch");
    if (columns.empty()) throw input_error("write_csv_columns: no columns");
    const std::size_t n = columns[0]->size();
    for (const Vec* c : columns)
        if (c->size() != n) throw input_error("write_csv_columns: ragged columns");
    CsvWriter w(path);
    w.header(names);
    std::vector<double> r(columns.size());
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < columns.size(); ++i) r[i] = (*columns[i])[k];
        w.row(r);
    }
}

}  // namespace proxmc
