#include "floqfric/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace floqfric {

using json = nlohmann::ordered_json;

namespace {

const std::vector<std::string> kMandatory = {"gamma", "mu_left", "mu_right", "beta", "a",
                                             "delta", "omega",   "b",        "n_floquet"};
const std::vector<std::string> kNuclear = {"pot_kx", "pot_ky", "mass"};

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = [] {
        std::set<std::string> k(kMandatory.begin(), kMandatory.end());
        k.insert(kNuclear.begin(), kNuclear.end());
        for (const char* extra :
             {"quad_window", "quad_rel_tol", "quad_abs_tol", "quad_max_subdiv", "quad_initial_panels",
              "eta", "imag_tol", "x_min", "x_max", "nx", "y_min", "y_max", "ny", "x", "y", "mode",
              "output", "seed", "workers", "x0", "y0", "px0", "py0", "dt", "n_steps", "sample_stride",
              "friction_refresh", "noise", "verify_x", "verify_y", "verify_n_floquet", "verify_periods",
              "verify_tolerance", "converge_probes", "converge_extra_floquet", "converge_tol_factor",
              "converge_max_rel_change"}) {
            k.insert(extra);
        }
        return k;
    }();
    return keys;
}

class Reader {
public:
    Reader(const json& doc, std::vector<std::string>& problems) : doc_(doc), problems_(problems) {}

    bool has(const std::string& key) const { return doc_.contains(key); }

    void real(const std::string& key, double& out) {
        if (!has(key)) return;
        const json& v = doc_.at(key);
        if (!v.is_number()) return mismatch(key, "a number");
        out = v.get<double>();
    }

    template <class Int>
    void integer(const std::string& key, Int& out) {
        if (!has(key)) return;
        const json& v = doc_.at(key);
        double d = 0.0;
        if (v.is_number_integer()) {
            if (v.is_number_unsigned()) {
                const auto u = v.get<std::uint64_t>();
                if (u > static_cast<std::uint64_t>(std::numeric_limits<Int>::max())) {
                    return mismatch(key, "an integer in range");
                }
                out = static_cast<Int>(u);
                return;
            }
            const auto s = v.get<std::int64_t>();
            if (s < static_cast<std::int64_t>(std::numeric_limits<Int>::min()) ||
                (s > 0 && static_cast<std::uint64_t>(s) > static_cast<std::uint64_t>(std::numeric_limits<Int>::max()))) {
                return mismatch(key, "an integer in range");
            }
            out = static_cast<Int>(s);
            return;
        }
        if (v.is_number_float() && std::modf(v.get<double>(), &d) == 0.0 &&
            d >= static_cast<double>(std::numeric_limits<Int>::min()) &&
            d <= static_cast<double>(std::numeric_limits<Int>::max())) {
            out = static_cast<Int>(d);
            return;
        }
        mismatch(key, "an integer");
    }

    void string(const std::string& key, std::string& out) {
        if (!has(key)) return;
        const json& v = doc_.at(key);
        if (!v.is_string()) return mismatch(key, "a string");
        out = v.get<std::string>();
    }

    void boolean(const std::string& key, bool& out) {
        if (!has(key)) return;
        const json& v = doc_.at(key);
        if (!v.is_boolean()) return mismatch(key, "a boolean");
        out = v.get<bool>();
    }

    void problem(const std::string& msg) { problems_.push_back(msg); }

private:
    void mismatch(const std::string& key, const char* expected) {
        problems_.push_back(key + ": type mismatch, expected " + expected);
    }

    const json& doc_;
    std::vector<std::string>& problems_;
};

const char* refresh_name(FrictionRefresh r) {
    return r == FrictionRefresh::every_step ? "every-step" : "cached-grid";
}

}  // namespace

const char* to_string(RunMode mode) noexcept {
    switch (mode) {
        case RunMode::friction_grid: return "friction-grid";
        case RunMode::friction_point: return "friction-point";
        case RunMode::floquet_verify: return "floquet-verify";
        case RunMode::dynamics: return "dynamics";
        case RunMode::converge: return "converge";
    }
    return "unknown";
}

RunMode run_mode_from_string(const std::string& name) {
    for (RunMode m : {RunMode::friction_grid, RunMode::friction_point, RunMode::floquet_verify,
                      RunMode::dynamics, RunMode::converge}) {
        if (name == to_string(m)) return m;
    }
    throw ConfigError({"mode: unknown mode '" + name + "'"});
}

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error([&] {
          std::string msg = "invalid configuration";
          for (const auto& p : problems) msg += "\n  " + p;
          return msg;
      }()),
      problems_(std::move(problems)) {}

const std::vector<std::string>& mandatory_keys() { return kMandatory; }

RunConfig parse_config(const std::string& text, std::optional<RunMode> mode) {
    json doc;
    try {
        doc = json::parse(text.empty() ? std::string("{}") : text);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("document: not valid JSON (") + e.what() + ")"});
    }
    if (!doc.is_object()) throw ConfigError({"document: expected a JSON object of key/value pairs"});

    std::vector<std::string> problems;
    for (const auto& [key, value] : doc.items()) {
        if (!known_keys().count(key)) problems.push_back(key + ": unknown key");
    }

    RunConfig cfg;
    Reader r(doc, problems);

    if (doc.contains("mode") && !doc["mode"].is_string()) {
        problems.push_back("mode: type mismatch, expected a string");
    }
    if (doc.contains("mode") && doc["mode"].is_string()) {
        try {
            cfg.mode = run_mode_from_string(doc["mode"].get<std::string>());
        } catch (const ConfigError& e) {
            problems.insert(problems.end(), e.problems().begin(), e.problems().end());
        }
    }

    if (mode) cfg.mode = *mode;

    for (const auto& key : kMandatory) {
        if (!doc.contains(key)) problems.push_back(key + ": missing mandatory key");
    }
    if (cfg.mode == RunMode::dynamics) {
        for (const auto& key : kNuclear) {
            if (!doc.contains(key)) problems.push_back(key + ": missing (required for dynamics)");
        }
    }

    ModelParams& p = cfg.params;
    r.real("gamma", p.gamma);
    r.real("mu_left", p.mu_left);
    r.real("mu_right", p.mu_right);
    r.real("beta", p.beta);
    r.real("a", p.coupling_slope);
    r.real("delta", p.level_shift);
    r.real("omega", p.drive_freq);
    r.real("b", p.drive_amp);
    r.integer("n_floquet", p.n_floquet);
    r.real("pot_kx", p.pot_kx);
    r.real("pot_ky", p.pot_ky);
    r.real("mass", p.mass);
    r.real("quad_window", p.quad.window_half_width);
    r.real("quad_rel_tol", p.quad.rel_tol);
    r.real("quad_abs_tol", p.quad.abs_tol);
    r.integer("quad_max_subdiv", p.quad.max_subdivisions);
    r.integer("quad_initial_panels", p.quad.initial_panels);
    r.real("eta", p.eta);
    r.real("imag_tol", p.imag_tol);

    r.real("x_min", cfg.grid.x_min);
    r.real("x_max", cfg.grid.x_max);
    r.integer("nx", cfg.grid.nx);
    r.real("y_min", cfg.grid.y_min);
    r.real("y_max", cfg.grid.y_max);
    r.integer("ny", cfg.grid.ny);
    r.real("x", cfg.point.x);
    r.real("y", cfg.point.y);

    r.string("output", cfg.output);
    r.integer("seed", cfg.seed);
    r.integer("workers", cfg.workers);

    DynamicsSpec& d = cfg.dynamics;
    r.real("x0", d.start.x);
    r.real("y0", d.start.y);
    r.real("px0", d.px0);
    r.real("py0", d.py0);
    r.real("dt", d.dt);
    r.integer("n_steps", d.n_steps);
    r.integer("sample_stride", d.sample_stride);
    std::string refresh = refresh_name(d.friction_refresh);
    r.string("friction_refresh", refresh);
    if (refresh == "every-step") {
        d.friction_refresh = FrictionRefresh::every_step;
    } else if (refresh == "cached-grid") {
        d.friction_refresh = FrictionRefresh::cached_grid;
    } else {
        problems.push_back("friction_refresh: expected 'every-step' or 'cached-grid'");
    }
    r.boolean("noise", d.noise);

    r.real("verify_x", cfg.verify.position.x);
    r.real("verify_y", cfg.verify.position.y);
    r.integer("verify_n_floquet", cfg.verify.n_floquet);
    r.integer("verify_periods", cfg.verify.periods);
    r.real("verify_tolerance", cfg.verify.tolerance);

    r.integer("converge_probes", cfg.converge.probes_per_axis);
    r.integer("converge_extra_floquet", cfg.converge.extra_floquet);
    r.real("converge_tol_factor", cfg.converge.tol_factor);
    r.real("converge_max_rel_change", cfg.converge.max_rel_change);

    if (problems.empty()) {
        try {
            validate(p);
        } catch (const ParamError& e) {
            problems.push_back(std::string(e.what()) + " (constraint violation)");
        }
        if (cfg.grid.nx < 1) problems.push_back("nx: must be >= 1");
        if (cfg.grid.ny < 1) problems.push_back("ny: must be >= 1");
        if (cfg.grid.nx > 1 && !(cfg.grid.x_max > cfg.grid.x_min)) problems.push_back("x_max: must exceed x_min");
        if (cfg.grid.ny > 1 && !(cfg.grid.y_max > cfg.grid.y_min)) problems.push_back("y_max: must exceed y_min");
        if (!(d.dt > 0.0)) problems.push_back("dt: must be > 0");
        if (d.n_steps < 0) problems.push_back("n_steps: must be >= 0");
        if (d.sample_stride < 1) problems.push_back("sample_stride: must be >= 1");
        if (cfg.verify.n_floquet < 0) problems.push_back("verify_n_floquet: must be >= 0");
        if (cfg.verify.periods < 1) problems.push_back("verify_periods: must be >= 1");
        if (!(cfg.verify.tolerance > 0.0)) problems.push_back("verify_tolerance: must be > 0");
        if (cfg.converge.probes_per_axis < 1) problems.push_back("converge_probes: must be >= 1");
        if (cfg.converge.extra_floquet < 1) problems.push_back("converge_extra_floquet: must be >= 1");
        if (!(cfg.converge.tol_factor > 0.0 && cfg.converge.tol_factor < 1.0)) {
            problems.push_back("converge_tol_factor: must lie in (0, 1)");
        }
        if (!(cfg.converge.max_rel_change > 0.0)) problems.push_back("converge_max_rel_change: must be > 0");
        if (cfg.output.empty()) problems.push_back("output: must not be empty");
    }

    if (!problems.empty()) throw ConfigError(std::move(problems));
    return cfg;
}

RunConfig load_config(const std::string& path, std::optional<RunMode> mode) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"config: cannot open '" + path + "'"});
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), mode);
}

std::string serialize_config(const RunConfig& c) {
    const ModelParams& p = c.params;
    json doc;
    doc["gamma"] = p.gamma;
    doc["mu_left"] = p.mu_left;
    doc["mu_right"] = p.mu_right;
    doc["beta"] = p.beta;
    doc["a"] = p.coupling_slope;
    doc["delta"] = p.level_shift;
    doc["omega"] = p.drive_freq;
    doc["b"] = p.drive_amp;
    doc["n_floquet"] = p.n_floquet;
    doc["pot_kx"] = p.pot_kx;
    doc["pot_ky"] = p.pot_ky;
    doc["mass"] = p.mass;
    doc["quad_window"] = p.quad.window_half_width;
    doc["quad_rel_tol"] = p.quad.rel_tol;
    doc["quad_abs_tol"] = p.quad.abs_tol;
    doc["quad_max_subdiv"] = p.quad.max_subdivisions;
    doc["quad_initial_panels"] = p.quad.initial_panels;
    doc["eta"] = p.eta;
    doc["imag_tol"] = p.imag_tol;
    doc["mode"] = to_string(c.mode);
    doc["x_min"] = c.grid.x_min;
    doc["x_max"] = c.grid.x_max;
    doc["nx"] = c.grid.nx;
    doc["y_min"] = c.grid.y_min;
    doc["y_max"] = c.grid.y_max;
    doc["ny"] = c.grid.ny;
    doc["x"] = c.point.x;
    doc["y"] = c.point.y;
    doc["output"] = c.output;
    doc["seed"] = c.seed;
    doc["workers"] = c.workers;
    doc["x0"] = c.dynamics.start.x;
    doc["y0"] = c.dynamics.start.y;
    doc["px0"] = c.dynamics.px0;
    doc["py0"] = c.dynamics.py0;
    doc["dt"] = c.dynamics.dt;
    doc["n_steps"] = c.dynamics.n_steps;
    doc["sample_stride"] = c.dynamics.sample_stride;
    doc["friction_refresh"] = refresh_name(c.dynamics.friction_refresh);
    doc["noise"] = c.dynamics.noise;
    doc["verify_x"] = c.verify.position.x;
    doc["verify_y"] = c.verify.position.y;
    doc["verify_n_floquet"] = c.verify.n_floquet;
    doc["verify_periods"] = c.verify.periods;
    doc["verify_tolerance"] = c.verify.tolerance;
    doc["converge_probes"] = c.converge.probes_per_axis;
    doc["converge_extra_floquet"] = c.converge.extra_floquet;
    doc["converge_tol_factor"] = c.converge.tol_factor;
    doc["converge_max_rel_change"] = c.converge.max_rel_change;
    return doc.dump(2);
}

}  // namespace floqfric
