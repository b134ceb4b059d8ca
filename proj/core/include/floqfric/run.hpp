// run.hpp: subcommand execution: computes, writes CSV output and a manifest

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "floqfric/config.hpp"
#include "floqfric/friction.hpp"

namespace floqfric {

/// Probe lattice strictly inside the grid: per_axis^2 points at fractions
/// (i + 1) / (per_axis + 1) of each axis range.
std::vector<Position> probe_points(const GridSpec& grid, int per_axis);

/// max_ij |other_ij - ref_ij| / max(|ref_ij|, 1e-3 max|ref|).
double relative_change(const Eigen::Matrix2d& ref, const Eigen::Matrix2d& other);

struct ConvergenceRow {
    Position position;
    std::string variant;          // "base", "n_floquet+K", "rel_tol*F"
    FrictionResult result;
    double max_rel_change{0.0};   // against the base row at the same position
};

/// For each probe: base params, N -> N + extra, rel_tol -> rel_tol * factor.
std::vector<ConvergenceRow> convergence_sweep(const std::vector<Position>& probes,
                                              const ModelParams& params, const ConvergeSpec& spec,
                                              unsigned workers = 0);

/// Executes config.mode, writing config.output and config.output + ".manifest.json".
/// Returns the process exit status: 0 on success, 1 when an internal check
/// fails (verification or convergence), 2 on computation or I/O errors.
int run(const RunConfig& config, std::ostream& log);

std::string manifest_path(const std::string& output);

}  // namespace floqfric
