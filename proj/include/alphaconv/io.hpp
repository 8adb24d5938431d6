#pragma once

// Bit-stable serialization: field CSV ("x,y,value", row-major node order,
// 17 significant digits, exact decimal round trip) and JSON summaries with
// frozen schema version strings.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "alphaconv/envelope.hpp"

namespace alphaconv {

inline constexpr const char* kSummarySchema = "alphaconv/summary-v1";
inline constexpr const char* kBridgeSchema = "alphaconv/bridge-v1";
inline constexpr const char* kReportSchema = "alphaconv/check-report-v1";
inline constexpr const char* kOracleSchema = "alphaconv/oracle-compare-v1";

// 17 significant digits: enough for an exact double round trip.
inline std::string format_sig17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_field_csv(const std::filesystem::path& path, const Field& field) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << "x,y,value\n";
    const Grid& g = *field.grid;
    for (size_t n = 0; n < field.size(); ++n) {
        const Vec2 z = g.coord(static_cast<int>(n));
        out << format_sig17(z.x) << ',' << format_sig17(z.y) << ',' << format_sig17(field[n])
            << '\n';
    }
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

// Reads a field CSV back onto the given grid; node count and coordinates
// must match the grid exactly (values written with 17 significant digits
// reparse to the identical doubles).
inline Field read_field_csv(const std::filesystem::path& path, GridPtr grid) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "x,y,value")
        throw std::runtime_error(path.string() + ": expected header 'x,y,value'");
    Field f;
    f.grid = std::move(grid);
    f.values.reserve(f.grid->size());
    size_t n = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double x, y, v;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &y, &v) != 3)
            throw std::runtime_error(path.string() + ": malformed row '" + line + "'");
        if (n >= f.grid->size())
            throw std::runtime_error(path.string() + ": more rows than grid nodes");
        const Vec2 z = f.grid->coord(static_cast<int>(n));
        if (std::abs(z.x - x) > 1e-12 || std::abs(z.y - y) > 1e-12)
            throw std::runtime_error(path.string() + ": row " + std::to_string(n) +
                                     " does not match the grid node position");
        f.values.push_back(v);
        ++n;
    }
    if (n != f.grid->size())
        throw std::runtime_error(path.string() + ": fewer rows than grid nodes");
    return f;
}

}  // namespace alphaconv
