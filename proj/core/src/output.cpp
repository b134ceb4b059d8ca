#include "floqfric/output.hpp"

#include <cstdio>
#include <ostream>

#ifndef FLOQFRIC_VERSION
#define FLOQFRIC_VERSION "0.0.0"
#endif

namespace floqfric {

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string grid_csv_row(const FrictionResult& r) {
    const double values[] = {r.position.x,          r.position.y,          r.gamma(0, 0),
                             r.gamma(0, 1),         r.gamma(1, 0),         r.gamma(1, 1),
                             r.gamma_sym(0, 1),     r.gamma_asym(0, 1),    r.mean_force(0),
                             r.mean_force(1),       r.imag_residual};
    std::string row;
    for (double v : values) {
        if (!row.empty()) row += ',';
        row += format_number(v);
    }
    return row;
}

void write_grid_csv(std::ostream& out, const GridResult& grid) {
    out << kGridCsvHeader << '\n';
    for (const auto& r : grid.points) out << grid_csv_row(r) << '\n';
}

void write_point_csv(std::ostream& out, const FrictionResult& r) {
    out << kGridCsvHeader << '\n' << grid_csv_row(r) << '\n';
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectorySample>& samples) {
    out << kTrajectoryCsvHeader << '\n';
    for (const auto& s : samples) {
        out << format_number(s.t) << ',' << format_number(s.position(0)) << ','
            << format_number(s.position(1)) << ',' << format_number(s.momentum(0)) << ','
            << format_number(s.momentum(1)) << '\n';
    }
}

const char* version() noexcept { return FLOQFRIC_VERSION; }

}  // namespace floqfric
