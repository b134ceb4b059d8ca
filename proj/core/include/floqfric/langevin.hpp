// langevin.hpp: nuclear Langevin dynamics with electronic friction
//
//   m dR/dt = P
//   dP/dt   = F(R) - gamma(R) P / m + dF,   <dF dF^T> = 2 T gamma_sym(R) delta(t)
//
// Only the symmetric part of gamma enters the noise; the antisymmetric
// (Lorentz-like) part acts deterministically and does no work.

#pragma once

#include <Eigen/Dense>

#include <memory>
#include <random>
#include <vector>

#include "floqfric/friction.hpp"

namespace floqfric {

struct ForceSample {
    Eigen::Vector2d force{Eigen::Vector2d::Zero()};
    Eigen::Matrix2d gamma{Eigen::Matrix2d::Zero()};
};

class ForceField {
public:
    virtual ~ForceField() = default;
    virtual ForceSample sample(Position position) const = 0;
};

/// Recomputes the friction tensor and mean force at every call.
class ModelForceField final : public ForceField {
public:
    explicit ModelForceField(ModelParams params);
    ForceSample sample(Position position) const override;

private:
    ModelParams params_;
};

/// Bilinear interpolation of a precomputed friction grid. Positions outside
/// the grid throw std::out_of_range.
class CachedForceField final : public ForceField {
public:
    explicit CachedForceField(GridResult grid);
    ForceSample sample(Position position) const override;
    const GridResult& grid() const noexcept { return grid_; }

private:
    GridResult grid_;
};

/// Harmonic well -k R with a position-independent friction tensor.
class HarmonicConstantField final : public ForceField {
public:
    HarmonicConstantField(Eigen::Vector2d stiffness, Eigen::Matrix2d gamma)
        : stiffness_(std::move(stiffness)), gamma_(std::move(gamma)) {}
    ForceSample sample(Position position) const override;

private:
    Eigen::Vector2d stiffness_;
    Eigen::Matrix2d gamma_;
};

enum class FrictionRefresh { every_step, cached_grid };

struct IntegratorConfig {
    double dt{1e-2};
    long n_steps{0};
    double temperature{1.0};   // 1 / beta
    FrictionRefresh friction_refresh{FrictionRefresh::every_step};
    long sample_stride{1};
    bool noise{true};
};

struct TrajectoryState {
    double t{0.0};
    Eigen::Vector2d position{Eigen::Vector2d::Zero()};
    Eigen::Vector2d momentum{Eigen::Vector2d::Zero()};
    std::mt19937_64 rng{};
    std::normal_distribution<double> normal{0.0, 1.0};

    static TrajectoryState make(Eigen::Vector2d position, Eigen::Vector2d momentum,
                                std::uint64_t seed);
};

/// Symmetric square root of a symmetric PSD matrix. Eigenvalues down to
/// -clip_tol * max(1, ||m||) are clipped to zero; below that std::domain_error.
Eigen::Matrix2d symmetric_sqrt(const Eigen::Matrix2d& m, double clip_tol = 1e-10);

/// Gaussian increment with covariance 2 T gamma_sym dt.
Eigen::Vector2d noise_increment(TrajectoryState& state, const Eigen::Matrix2d& gamma_sym,
                                double temperature, double dt);

/// One Euler-Maruyama step (momentum first, position with the new momentum).
/// Throws std::domain_error when dt ||gamma|| / m >= 0.5.
TrajectoryState langevin_step(const TrajectoryState& state, const IntegratorConfig& cfg,
                              const ForceField& field, double mass);

struct TrajectorySample {
    double t;
    Eigen::Vector2d position;
    Eigen::Vector2d momentum;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;   // initial state, then every stride
    TrajectoryState final_state;
};

Trajectory simulate(const TrajectoryState& initial, const IntegratorConfig& cfg,
                    const ForceField& field, double mass);

/// Noise-free run at dt and dt/2 over the same duration.
struct StepConvergence {
    double dt{0.0};
    double final_difference{0.0};   // |state(dt) - state(dt/2)|
    double halved_difference{0.0};  // |state(dt/2) - state(dt/4)|
    double observed_order{0.0};
};
StepConvergence dt_halving_report(const TrajectoryState& initial, const IntegratorConfig& cfg,
                                  const ForceField& field, double mass);

/// Largest deviation of the cached field from the exact one at the cell
/// midpoints of a coarse probe lattice (probes_per_axis^2 cells sampled).
double interpolation_error(const CachedForceField& cached, const ForceField& exact,
                           int probes_per_axis = 2);

}  // namespace floqfric
