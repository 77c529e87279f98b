#pragma once

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "stc/errors.hpp"
#include "stc/scenario.hpp"

namespace stc {

inline constexpr const char* kCsvHeader = "t,w,y,u,v,e,a1,a2,a3,a4,b0,b1,b2,b3,kc,eps";

// 15 significant digits: enough to round-trip doubles for plotting and
// cross-checking, stable across platforms with classic-locale formatting.
inline void append_csv_number(std::string& out, double x) {
    char buf[40];
    const int len = std::snprintf(buf, sizeof buf, "%.15g", x);
    out.append(buf, static_cast<std::size_t>(len));
}

// Renders records into the CSV layout: header row, one data row per record,
// '.' decimals, ',' separators, '\n' line ends, kc blank outside J2 runs.
[[nodiscard]] inline std::string format_csv(const std::vector<StepRecord>& records) {
    std::string out;
    out.reserve(64 + records.size() * 220);
    out += kCsvHeader;
    out += '\n';
    for (const auto& r : records) {
        out += std::to_string(r.t);
        out += ',';
        append_csv_number(out, r.w);
        out += ',';
        append_csv_number(out, r.y);
        out += ',';
        append_csv_number(out, r.u);
        out += ',';
        append_csv_number(out, r.v);
        out += ',';
        append_csv_number(out, r.e);
        for (double th : r.theta) {
            out += ',';
            append_csv_number(out, th);
        }
        out += ',';
        if (r.kc) append_csv_number(out, *r.kc);
        out += ',';
        append_csv_number(out, r.eps);
        out += '\n';
    }
    return out;
}

inline void export_csv(const std::vector<StepRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot open '" + path + "' for writing: " + std::strerror(errno));
    const std::string body = format_csv(records);
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    out.flush();
    if (!out)
        throw ConfigError("failed while writing '" + path + "': " + std::strerror(errno));
}

} // namespace stc
