// floqfric: command-line driver for Floquet friction grids, verification and dynamics.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "floqfric/config.hpp"
#include "floqfric/output.hpp"
#include "floqfric/run.hpp"

namespace {

struct Overrides {
    std::string config;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out, "output path (overrides 'output')");
    cmd->add_option("--seed", o.seed, "random seed (overrides 'seed')");
    cmd->add_option("--workers", o.workers, "worker threads, 0 = all cores (overrides 'workers')");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"floqfric: Floquet electronic friction and Langevin dynamics"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(floqfric::version()));

    Overrides o;
    const std::pair<const char*, const char*> commands[] = {
        {"friction-point", "friction tensor and mean force at (x, y)"},
        {"friction-grid", "friction tensor over the configured (x, y) grid"},
        {"floquet-verify", "compare Floquet and direct propagation of the closed driven model"},
        {"dynamics", "Langevin trajectory with electronic friction"},
        {"converge", "Floquet truncation and quadrature tolerance sweep at probe points"},
    };
    for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), o);

    CLI11_PARSE(app, argc, argv);

    try {
        const auto mode = floqfric::run_mode_from_string(app.get_subcommands().front()->get_name());
        floqfric::RunConfig cfg = floqfric::load_config(o.config, mode);
        if (o.out) cfg.output = *o.out;
        if (o.seed) cfg.seed = *o.seed;
        if (o.workers) cfg.workers = *o.workers;
        return floqfric::run(cfg, std::cerr);
    } catch (const floqfric::ConfigError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }
}
