#include "floqfric/params.hpp"

#include <cmath>

namespace floqfric {

namespace {

void require_finite(const char* key, double v) {
    if (!std::isfinite(v)) throw ParamError(key, "must be finite");
}

void require_positive(const char* key, double v) {
    require_finite(key, v);
    if (!(v > 0.0)) throw ParamError(key, "must be > 0");
}

}  // namespace

void validate(const ModelParams& p) {
    require_positive("gamma", p.gamma);
    require_finite("mu_left", p.mu_left);
    require_finite("mu_right", p.mu_right);
    require_positive("beta", p.beta);
    require_finite("b", p.drive_amp);
    if (p.drive_amp < 0.0) throw ParamError("b", "must be >= 0");
    require_positive("omega", p.drive_freq);
    require_finite("a", p.coupling_slope);
    require_finite("delta", p.level_shift);
    if (p.n_floquet < 0) throw ParamError("n_floquet", "must be >= 0");
    require_positive("pot_kx", p.pot_kx);
    require_positive("pot_ky", p.pot_ky);
    require_positive("mass", p.mass);

    const auto& q = p.quad;
    require_finite("quad_window", q.window_half_width);
    require_positive("quad_rel_tol", q.rel_tol);
    require_finite("quad_abs_tol", q.abs_tol);
    if (q.abs_tol < 0.0) throw ParamError("quad_abs_tol", "must be >= 0");
    if (q.max_subdivisions < 1) throw ParamError("quad_max_subdiv", "must be >= 1");
    require_positive("eta", p.eta);
    require_positive("imag_tol", p.imag_tol);
}

}  // namespace floqfric
