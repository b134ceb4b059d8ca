// output.hpp: text serialisation of grids, trajectories and run manifests

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "floqfric/friction.hpp"
#include "floqfric/langevin.hpp"

namespace floqfric {

inline constexpr const char* kGridCsvHeader =
    "x,y,gxx,gxy,gyx,gyy,gsym_xy,gasym_xy,fx,fy,imag_residual";
inline constexpr const char* kTrajectoryCsvHeader = "t,x,y,px,py";

/// Decimal text with 12 significant digits ("%.12g").
std::string format_number(double v);

std::string grid_csv_row(const FrictionResult& r);

/// Header plus one row per point, x outer, y inner.
void write_grid_csv(std::ostream& out, const GridResult& grid);
void write_point_csv(std::ostream& out, const FrictionResult& r);
void write_trajectory_csv(std::ostream& out, const std::vector<TrajectorySample>& samples);

/// Version string compiled into the library.
const char* version() noexcept;

}  // namespace floqfric
