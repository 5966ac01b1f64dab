#pragma once

// Number formatting and file output shared by the CSV writers.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <system_error>
#include <vector>

#include "sqcl/errors.hpp"

namespace sqcl::io {

/// Fixed 17-significant-digit scientific notation.
inline std::string format_number(double x) {
    char buf[40];
    if (x == 0.0) x = 0.0;  // drop the sign of negative zero
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

inline std::string format_optional(const std::optional<double>& x) { return x ? format_number(*x) : std::string(); }

inline std::string csv_header(const std::vector<std::string>& cols) {
    std::string s;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) s += ',';
        s += cols[i];
    }
    return s + '\n';
}

/// Writes via a sibling temp file and rename, so readers never see a
/// partial file.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ParameterError("cannot write " + tmp.string());
        f << content;
        f.flush();
        if (!f) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw ParameterError("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw ParameterError("cannot rename into " + path.string());
    }
}

}  // namespace sqcl::io
