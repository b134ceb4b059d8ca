#include "floqfric/langevin.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace floqfric {

ModelForceField::ModelForceField(ModelParams params) : params_(std::move(params)) {
    validate(params_);
}

ForceSample ModelForceField::sample(Position position) const {
    const FrictionResult r = friction_tensor(position, params_);
    return {r.mean_force, r.gamma};
}

CachedForceField::CachedForceField(GridResult grid) : grid_(std::move(grid)) {
    if (grid_.x_axis.size() < 2 || grid_.y_axis.size() < 2) {
        throw std::invalid_argument("CachedForceField: need at least 2 points per axis");
    }
}

namespace {

// Cell index and fractional offset along one axis.
std::pair<std::size_t, double> locate(const std::vector<double>& axis, double v) {
    const auto it = std::upper_bound(axis.begin(), axis.end(), v);
    std::size_t i = static_cast<std::size_t>(std::distance(axis.begin(), it));
    i = std::clamp<std::size_t>(i, 1, axis.size() - 1) - 1;
    return {i, (v - axis[i]) / (axis[i + 1] - axis[i])};
}

}  // namespace

ForceSample CachedForceField::sample(Position position) const {
    const auto& xs = grid_.x_axis;
    const auto& ys = grid_.y_axis;
    if (position.x < xs.front() || position.x > xs.back() || position.y < ys.front() ||
        position.y > ys.back()) {
        std::ostringstream os;
        os << "CachedForceField: (" << position.x << ", " << position.y << ") outside grid";
        throw std::out_of_range(os.str());
    }
    const auto [ix, tx] = locate(xs, position.x);
    const auto [iy, ty] = locate(ys, position.y);

    const FrictionResult& p00 = grid_.at(ix, iy);
    const FrictionResult& p10 = grid_.at(ix + 1, iy);
    const FrictionResult& p01 = grid_.at(ix, iy + 1);
    const FrictionResult& p11 = grid_.at(ix + 1, iy + 1);
    const double w00 = (1 - tx) * (1 - ty);
    const double w10 = tx * (1 - ty);
    const double w01 = (1 - tx) * ty;
    const double w11 = tx * ty;

    ForceSample s;
    s.gamma = w00 * p00.gamma + w10 * p10.gamma + w01 * p01.gamma + w11 * p11.gamma;
    s.force = w00 * p00.mean_force + w10 * p10.mean_force + w01 * p01.mean_force + w11 * p11.mean_force;
    return s;
}

ForceSample HarmonicConstantField::sample(Position position) const {
    return {Eigen::Vector2d(-stiffness_(0) * position.x, -stiffness_(1) * position.y), gamma_};
}

TrajectoryState TrajectoryState::make(Eigen::Vector2d position, Eigen::Vector2d momentum,
                                      std::uint64_t seed) {
    TrajectoryState s;
    s.position = std::move(position);
    s.momentum = std::move(momentum);
    s.rng.seed(seed);
    return s;
}

Eigen::Matrix2d symmetric_sqrt(const Eigen::Matrix2d& m, double clip_tol) {
    const Eigen::Matrix2d sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(sym);
    Eigen::Vector2d ev = solver.eigenvalues();
    const double floor = -clip_tol * std::max(1.0, ev.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < 2; ++i) {
        if (ev(i) >= 0.0) continue;
        if (ev(i) < floor) {
            std::ostringstream os;
            os << "symmetric friction is not positive semidefinite (eigenvalue " << ev(i) << ")";
            throw std::domain_error(os.str());
        }
        static std::once_flag warned;
        std::call_once(warned, [] {
            std::clog << "floqfric: clipping slightly negative friction eigenvalue to zero\n";
        });
        ev(i) = 0.0;
    }
    return solver.eigenvectors() * ev.cwiseSqrt().asDiagonal() * solver.eigenvectors().transpose();
}

Eigen::Vector2d noise_increment(TrajectoryState& state, const Eigen::Matrix2d& gamma_sym,
                                double temperature, double dt) {
    const Eigen::Vector2d xi(state.normal(state.rng), state.normal(state.rng));
    return std::sqrt(2.0 * temperature * dt) * (symmetric_sqrt(gamma_sym) * xi);
}

TrajectoryState langevin_step(const TrajectoryState& state, const IntegratorConfig& cfg,
                              const ForceField& field, double mass) {
    const ForceSample f = field.sample({state.position(0), state.position(1)});
    const double gamma_norm = Eigen::JacobiSVD<Eigen::Matrix2d>(f.gamma).singularValues()(0);
    if (!(cfg.dt * gamma_norm / mass < 0.5)) {
        std::ostringstream os;
        os << "langevin_step: dt*|gamma|/m = " << cfg.dt * gamma_norm / mass << " violates < 0.5";
        throw std::domain_error(os.str());
    }

    TrajectoryState next = state;
    Eigen::Vector2d kick = cfg.dt * (f.force - f.gamma * state.momentum / mass);
    if (cfg.noise) {
        kick += noise_increment(next, 0.5 * (f.gamma + f.gamma.transpose()), cfg.temperature, cfg.dt);
    }
    next.momentum = state.momentum + kick;
    next.position = state.position + cfg.dt * next.momentum / mass;
    next.t = state.t + cfg.dt;
    return next;
}

Trajectory simulate(const TrajectoryState& initial, const IntegratorConfig& cfg,
                    const ForceField& field, double mass) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("simulate: dt must be > 0");
    if (cfg.n_steps < 0) throw std::invalid_argument("simulate: n_steps must be >= 0");
    const long stride = std::max(1L, cfg.sample_stride);

    Trajectory traj;
    traj.samples.push_back({initial.t, initial.position, initial.momentum});
    TrajectoryState s = initial;
    for (long k = 1; k <= cfg.n_steps; ++k) {
        s = langevin_step(s, cfg, field, mass);
        if (k % stride == 0) traj.samples.push_back({s.t, s.position, s.momentum});
    }
    traj.final_state = std::move(s);
    return traj;
}

StepConvergence dt_halving_report(const TrajectoryState& initial, const IntegratorConfig& cfg,
                                  const ForceField& field, double mass) {
    auto run = [&](int refine) {
        IntegratorConfig c = cfg;
        c.noise = false;
        c.dt = cfg.dt / refine;
        c.n_steps = cfg.n_steps * refine;
        c.sample_stride = c.n_steps > 0 ? c.n_steps : 1;
        const TrajectoryState s = simulate(initial, c, field, mass).final_state;
        Eigen::Vector4d v;
        v << s.position, s.momentum;
        return v;
    };
    const Eigen::Vector4d s1 = run(1);
    const Eigen::Vector4d s2 = run(2);
    const Eigen::Vector4d s4 = run(4);

    StepConvergence r;
    r.dt = cfg.dt;
    r.final_difference = (s1 - s2).norm();
    r.halved_difference = (s2 - s4).norm();
    if (r.final_difference > 0.0 && r.halved_difference > 0.0) {
        r.observed_order = std::log2(r.final_difference / r.halved_difference);
    }
    return r;
}

double interpolation_error(const CachedForceField& cached, const ForceField& exact,
                           int probes_per_axis) {
    const auto& xs = cached.grid().x_axis;
    const auto& ys = cached.grid().y_axis;
    probes_per_axis = std::max(1, probes_per_axis);
    double worst = 0.0;
    for (int i = 0; i < probes_per_axis; ++i) {
        for (int j = 0; j < probes_per_axis; ++j) {
            const std::size_t ix = (xs.size() - 2) * static_cast<std::size_t>(i + 1) /
                                   static_cast<std::size_t>(probes_per_axis + 1);
            const std::size_t iy = (ys.size() - 2) * static_cast<std::size_t>(j + 1) /
                                   static_cast<std::size_t>(probes_per_axis + 1);
            const Position mid{0.5 * (xs[ix] + xs[ix + 1]), 0.5 * (ys[iy] + ys[iy + 1])};
            const ForceSample a = cached.sample(mid);
            const ForceSample b = exact.sample(mid);
            worst = std::max({worst, (a.gamma - b.gamma).cwiseAbs().maxCoeff(),
                              (a.force - b.force).cwiseAbs().maxCoeff()});
        }
    }
    return worst;
}

}  // namespace floqfric
