// config.hpp: run configuration: a flat JSON object of key/value pairs.
//
// Physical keys are mandatory; numerical controls fall back to defaults.
// Unknown keys are rejected.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "floqfric/langevin.hpp"
#include "floqfric/params.hpp"

namespace floqfric {

enum class RunMode { friction_grid, friction_point, floquet_verify, dynamics, converge };

const char* to_string(RunMode mode) noexcept;
RunMode run_mode_from_string(const std::string& name);

struct GridSpec {
    double x_min{-8.0};
    double x_max{2.0};
    int nx{61};
    double y_min{-5.0};
    double y_max{5.0};
    int ny{61};

    std::vector<double> x_axis() const { return linspace(x_min, x_max, nx); }
    std::vector<double> y_axis() const { return linspace(y_min, y_max, ny); }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct DynamicsSpec {
    Position start{};
    double px0{0.0};
    double py0{0.0};
    double dt{1e-2};
    long n_steps{1000};
    long sample_stride{10};
    FrictionRefresh friction_refresh{FrictionRefresh::cached_grid};
    bool noise{true};

    friend bool operator==(const DynamicsSpec&, const DynamicsSpec&) = default;
};

struct VerifySpec {
    Position position{};
    int n_floquet{8};
    int periods{10};
    double tolerance{1e-6};

    friend bool operator==(const VerifySpec&, const VerifySpec&) = default;
};

struct ConvergeSpec {
    int probes_per_axis{3};       // probe lattice inside the grid
    int extra_floquet{2};         // N -> N + extra
    double tol_factor{0.1};       // rel_tol -> rel_tol * factor
    double max_rel_change{0.01};

    friend bool operator==(const ConvergeSpec&, const ConvergeSpec&) = default;
};

struct RunConfig {
    ModelParams params{};
    GridSpec grid{};
    Position point{};
    RunMode mode{RunMode::friction_grid};
    std::string output{"floqfric_out.csv"};
    std::uint64_t seed{0};
    unsigned workers{0};
    DynamicsSpec dynamics{};
    VerifySpec verify{};
    ConvergeSpec converge{};

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Aggregated configuration problems; each message names its key.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    std::vector<std::string> problems_;
};

/// Keys without defaults. Nuclear keys (pot_kx, pot_ky, mass) are additionally
/// required in dynamics mode.
const std::vector<std::string>& mandatory_keys();

/// `mode`, when given, takes precedence over the document's "mode" key.
RunConfig parse_config(const std::string& text, std::optional<RunMode> mode = std::nullopt);
RunConfig load_config(const std::string& path, std::optional<RunMode> mode = std::nullopt);

/// Canonical JSON with every key; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

}  // namespace floqfric
