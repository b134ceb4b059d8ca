#include "floqfric/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include "floqfric/output.hpp"
#include "floqfric/propagator.hpp"
#include "json.hpp"

namespace floqfric {

using json = nlohmann::ordered_json;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

std::ofstream open_output(const std::string& path) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output '" + path + "'");
    return out;
}

void write_manifest(const RunConfig& config, const json& report, double seconds) {
    json doc;
    doc["tool"] = "floqfric";
    doc["version"] = version();
    doc["mode"] = to_string(config.mode);
    doc["output"] = config.output;
    doc["config"] = json::parse(serialize_config(config));
    doc["report"] = report;
    doc["timings"] = {{"total_seconds", seconds}};
    auto out = open_output(manifest_path(config.output));
    out << doc.dump(2) << '\n';
    if (!out) throw std::runtime_error("failed writing manifest");
}

json grid_summary(const std::vector<FrictionResult>& points) {
    double max_gxx = 0.0, max_asym = 0.0, max_imag = 0.0, max_quad = 0.0, max_tail = 0.0;
    double max_lower = 0.0;
    long evaluations = 0;
    for (const auto& r : points) {
        max_gxx = std::max(max_gxx, std::abs(r.gamma(0, 0)));
        max_asym = std::max(max_asym, std::abs(r.gamma_asym(0, 1)));
        max_imag = std::max(max_imag, r.imag_residual);
        max_quad = std::max(max_quad, r.quad_error);
        max_tail = std::max(max_tail, r.tail_estimate);
        max_lower = std::max(max_lower, r.lower_tail);
        evaluations += r.evaluations;
    }
    return {{"points", points.size()},         {"max_abs_gxx", max_gxx},
            {"max_abs_gasym_xy", max_asym},     {"max_imag_residual", max_imag},
            {"max_quad_error", max_quad},       {"max_tail_estimate", max_tail},
            {"max_lower_tail", max_lower},      {"energy_evaluations", evaluations}};
}

int run_grid(const RunConfig& c, json& report, std::ostream& log) {
    const GridResult grid = friction_grid(c.grid.x_axis(), c.grid.y_axis(), c.params, c.workers);
    auto out = open_output(c.output);
    write_grid_csv(out, grid);
    if (!out) throw std::runtime_error("failed writing '" + c.output + "'");
    report = grid_summary(grid.points);
    log << "friction-grid: " << grid.points.size() << " points -> " << c.output << '\n';
    return 0;
}

int run_point(const RunConfig& c, json& report, std::ostream& log) {
    const FrictionResult r = friction_tensor(c.point, c.params);
    auto out = open_output(c.output);
    write_point_csv(out, r);
    if (!out) throw std::runtime_error("failed writing '" + c.output + "'");
    report = grid_summary({r});
    report["quad_error"] = r.quad_error;
    log << "friction-point: (" << c.point.x << ", " << c.point.y << ") -> " << c.output << '\n';
    return 0;
}

int run_verify(const RunConfig& c, json& report, std::ostream& log) {
    const VerifyReport v =
        verify_floquet(c.verify.position, c.params, c.verify.n_floquet, c.verify.periods, c.verify.tolerance);
    report = {{"x", v.position.x},
              {"y", v.position.y},
              {"b", v.drive_amp},
              {"omega", v.drive_freq},
              {"n_floquet", v.n_floquet},
              {"periods", v.periods},
              {"dt", v.dt},
              {"samples", v.samples},
              {"max_trace_distance", v.max_trace_distance},
              {"max_hermiticity_error", v.max_hermiticity_error},
              {"max_trace_error", v.max_trace_error},
              {"tolerance", v.tolerance},
              {"seconds", v.seconds},
              {"passed", v.passed}};
    auto out = open_output(c.output);
    out << "check,value,tolerance,status\n";
    out << "max_trace_distance," << format_number(v.max_trace_distance) << ','
        << format_number(v.tolerance) << ',' << (v.passed ? "PASS" : "FAIL") << '\n';
    if (!out) throw std::runtime_error("failed writing '" + c.output + "'");
    log << "floquet-verify: max trace distance " << v.max_trace_distance << " over " << v.samples
        << " samples: " << (v.passed ? "PASS" : "FAIL") << '\n';
    return v.passed ? 0 : 1;
}

int run_dynamics(const RunConfig& c, json& report, std::ostream& log) {
    const DynamicsSpec& d = c.dynamics;
    IntegratorConfig cfg;
    cfg.dt = d.dt;
    cfg.n_steps = d.n_steps;
    cfg.temperature = 1.0 / c.params.beta;
    cfg.friction_refresh = d.friction_refresh;
    cfg.sample_stride = d.sample_stride;
    cfg.noise = d.noise;

    const ModelForceField exact(c.params);
    std::unique_ptr<CachedForceField> cached;
    const ForceField* field = &exact;
    if (d.friction_refresh == FrictionRefresh::cached_grid) {
        cached = std::make_unique<CachedForceField>(
            friction_grid(c.grid.x_axis(), c.grid.y_axis(), c.params, c.workers));
        field = cached.get();
        report["interpolation_error"] = interpolation_error(*cached, exact, 2);
    }

    const TrajectoryState start = TrajectoryState::make(
        Eigen::Vector2d(d.start.x, d.start.y), Eigen::Vector2d(d.px0, d.py0), c.seed);
    const Trajectory traj = simulate(start, cfg, *field, c.params.mass);

    IntegratorConfig probe = cfg;
    probe.n_steps = std::min<long>(cfg.n_steps, 100);
    if (probe.n_steps > 0) {
        const StepConvergence conv = dt_halving_report(start, probe, *field, c.params.mass);
        report["dt_halving"] = {{"steps", probe.n_steps},
                                {"dt", conv.dt},
                                {"difference_dt_vs_half", conv.final_difference},
                                {"difference_half_vs_quarter", conv.halved_difference},
                                {"observed_order", conv.observed_order}};
    }

    auto out = open_output(c.output);
    write_trajectory_csv(out, traj.samples);
    if (!out) throw std::runtime_error("failed writing '" + c.output + "'");
    report["samples"] = traj.samples.size();
    report["friction_refresh"] =
        d.friction_refresh == FrictionRefresh::every_step ? "every-step" : "cached-grid";
    log << "dynamics: " << d.n_steps << " steps -> " << c.output << '\n';
    return 0;
}

int run_converge(const RunConfig& c, json& report, std::ostream& log) {
    const auto rows = convergence_sweep(probe_points(c.grid, c.converge.probes_per_axis), c.params,
                                        c.converge, c.workers);
    auto out = open_output(c.output);
    out << "x,y,variant,gxx,gxy,gyx,gyy,max_rel_change\n";
    double worst = 0.0;
    for (const auto& row : rows) {
        const auto& g = row.result.gamma;
        out << format_number(row.position.x) << ',' << format_number(row.position.y) << ','
            << row.variant << ',' << format_number(g(0, 0)) << ',' << format_number(g(0, 1)) << ','
            << format_number(g(1, 0)) << ',' << format_number(g(1, 1)) << ','
            << format_number(row.max_rel_change) << '\n';
        worst = std::max(worst, row.max_rel_change);
    }
    if (!out) throw std::runtime_error("failed writing '" + c.output + "'");
    const bool passed = worst < c.converge.max_rel_change;
    report = {{"probes", rows.size() / 3},
              {"max_rel_change", worst},
              {"threshold", c.converge.max_rel_change},
              {"passed", passed}};
    log << "converge: worst relative change " << worst << ": " << (passed ? "PASS" : "FAIL") << '\n';
    return passed ? 0 : 1;
}

}  // namespace

std::vector<Position> probe_points(const GridSpec& grid, int per_axis) {
    std::vector<Position> probes;
    for (int i = 0; i < per_axis; ++i) {
        for (int j = 0; j < per_axis; ++j) {
            const double fx = static_cast<double>(i + 1) / (per_axis + 1);
            const double fy = static_cast<double>(j + 1) / (per_axis + 1);
            probes.push_back({grid.x_min + fx * (grid.x_max - grid.x_min),
                              grid.y_min + fy * (grid.y_max - grid.y_min)});
        }
    }
    return probes;
}

double relative_change(const Eigen::Matrix2d& ref, const Eigen::Matrix2d& other) {
    const double floor = 1e-3 * ref.cwiseAbs().maxCoeff();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < 2; ++i) {
        for (Eigen::Index j = 0; j < 2; ++j) {
            const double scale = std::max(std::abs(ref(i, j)), floor);
            if (scale > 0.0) worst = std::max(worst, std::abs(other(i, j) - ref(i, j)) / scale);
        }
    }
    return worst;
}

std::vector<ConvergenceRow> convergence_sweep(const std::vector<Position>& probes,
                                              const ModelParams& params, const ConvergeSpec& spec,
                                              unsigned workers) {
    ModelParams more_blocks = params;
    more_blocks.n_floquet += spec.extra_floquet;
    ModelParams tighter = params;
    tighter.quad.rel_tol *= spec.tol_factor;

    const auto base = friction_points(probes, params, workers);
    const auto wide = friction_points(probes, more_blocks, workers);
    const auto tight = friction_points(probes, tighter, workers);

    std::ostringstream blocks_name, tol_name;
    blocks_name << "n_floquet+" << spec.extra_floquet;
    tol_name << "rel_tol*" << spec.tol_factor;

    std::vector<ConvergenceRow> rows;
    for (std::size_t k = 0; k < probes.size(); ++k) {
        rows.push_back({probes[k], "base", base[k], 0.0});
        rows.push_back({probes[k], blocks_name.str(), wide[k], relative_change(base[k].gamma, wide[k].gamma)});
        rows.push_back({probes[k], tol_name.str(), tight[k], relative_change(base[k].gamma, tight[k].gamma)});
    }
    return rows;
}

std::string manifest_path(const std::string& output) { return output + ".manifest.json"; }

int run(const RunConfig& config, std::ostream& log) {
    const auto start = clock_type::now();
    json report = json::object();
    int status = 2;
    try {
        switch (config.mode) {
            case RunMode::friction_grid: status = run_grid(config, report, log); break;
            case RunMode::friction_point: status = run_point(config, report, log); break;
            case RunMode::floquet_verify: status = run_verify(config, report, log); break;
            case RunMode::dynamics: status = run_dynamics(config, report, log); break;
            case RunMode::converge: status = run_converge(config, report, log); break;
        }
        write_manifest(config, report, seconds_since(start));
    } catch (const GridError& e) {
        log << "error: " << e.what() << '\n';
        for (const auto& f : e.failures()) {
            log << "  at (" << f.position.x << ", " << f.position.y << "): " << f.message << '\n';
        }
        return 2;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return 2;
    }
    return status;
}

}  // namespace floqfric
