// friction.hpp: Floquet electronic friction tensor, steady-state density and
// mean force for the driven dot-lead model, plus coordinate-grid sweeps.
//
// gamma_ab = int deps/2pi Tr_0[dH_F/dR_a dG^R/deps dH_F/dR_b G^<] + h.c.
//
// Tr_0 is the period average: the trace over the central (m = 0) Floquet
// block. Averaging the full truncated trace over its 2N+1 blocks has the same
// limit but picks up an O(1/N) error from the blocks at the truncation edge.

#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

#include "floqfric/greens.hpp"
#include "floqfric/quadrature.hpp"

namespace floqfric {

struct FrictionResult {
    Position position;
    Eigen::Matrix2d gamma{Eigen::Matrix2d::Zero()};   // rows/cols: x, y
    Eigen::Matrix2d gamma_sym{Eigen::Matrix2d::Zero()};
    Eigen::Matrix2d gamma_asym{Eigen::Matrix2d::Zero()};
    Eigen::Vector2d mean_force{Eigen::Vector2d::Zero()};
    double imag_residual{0.0};   // |Im Tr[dH sigma]| discarded from the mean force
    double quad_error{0.0};      // estimated absolute quadrature error on gamma
    double lower_tail{0.0};      // largest |gamma_ab| contribution from below the window (included)
    double tail_estimate{0.0};   // bound on the excluded mass above the window
    int evaluations{0};
};

struct GridResult {
    std::vector<double> x_axis;
    std::vector<double> y_axis;
    std::vector<FrictionResult> points;   // x outer, y inner
    ModelParams params;

    const FrictionResult& at(std::size_t ix, std::size_t iy) const {
        return points.at(ix * y_axis.size() + iy);
    }
};

/// Computation failure tied to a nuclear configuration.
class FrictionError : public std::runtime_error {
public:
    FrictionError(Position position, const std::string& what);
    const Position& position() const noexcept { return position_; }

private:
    Position position_;
};

/// One or more grid points failed; every failure keeps its coordinates.
class GridError : public std::runtime_error {
public:
    struct Failure {
        Position position;
        std::string message;
    };
    explicit GridError(std::vector<Failure> failures);
    const std::vector<Failure>& failures() const noexcept { return failures_; }

private:
    std::vector<Failure> failures_;
};

/// Energy window [lo, hi] resolved by the primary quadrature. Energies below
/// lo are added through a mapped semi-infinite panel; above hi the Fermi
/// factor suppresses the integrand and the remainder is only bounded.
struct EnergyWindow {
    double lo;
    double hi;
};
EnergyWindow energy_window(const HarmonicSeries& h, const SelfEnergy& se, const ModelParams& params);

/// Integrand of the friction trace and of Tr[dH G^<] at one energy.
///
/// With equal broadening on every level Sigma^R is scalar and the resolvent
/// is evaluated in the eigenbasis of h_F; otherwise a dense LU path is used.
class FrictionIntegrand {
public:
    /// Layout of operator(): Re T_xx, Re T_xy, Re T_yx, Re T_yy,
    /// Re Tr[dH_x G^<], Im ..., Re Tr[dH_y G^<], Im ...
    static constexpr int kSize = 8;

    FrictionIntegrand(const FloquetOperator& hf, const FloquetOperator& dhx,
                      const FloquetOperator& dhy, const SelfEnergy& se, bool force_dense = false);

    Eigen::VectorXd operator()(double eps) const;

    bool spectral() const noexcept { return spectral_; }

private:
    Eigen::VectorXd eval_spectral(double eps) const;
    Eigen::VectorXd eval_dense(double eps) const;

    FloquetOperator hf_;
    FloquetOperator dhx_;
    FloquetOperator dhy_;
    SelfEnergy se_;
    bool spectral_;

    // spectral path
    Eigen::VectorXd energies_;
    Eigen::MatrixXcd ax_;                      // U^dagger dH_x U
    Eigen::MatrixXcd ay_;
    Eigen::MatrixXcd cax_;                     // U^dagger P_0 dH_x U, P_0 the central block
    Eigen::MatrixXcd cay_;
    double half_gamma_{0.0};
    std::vector<double> group_shift_;          // distinct Fermi offsets
    std::vector<Eigen::MatrixXcd> projectors_; // U^dagger P_g U per offset
};

/// Friction tensor and mean force at one configuration. Throws FrictionError
/// when the energy quadrature does not reach its tolerance.
FrictionResult friction_tensor(Position position, const ModelParams& params);

/// Full Floquet-space single-particle density sigma = -i int deps/2pi G^<.
Eigen::MatrixXcd steady_state_density(Position position, const ModelParams& params);

/// Central block sigma_(0,0): the period-averaged level density.
Eigen::MatrixXcd period_averaged_density(const FloquetOperator& sigma);

/// F = -grad U - Re Tr_0[dH_F/dR sigma].
Eigen::Vector2d mean_force(Position position, const ModelParams& params);

/// -grad of the harmonic nuclear potential.
Eigen::Vector2d potential_force(Position position, const ModelParams& params);

/// friction_tensor at each position, spread over `workers` threads
/// (0 = hardware concurrency). Output order matches input order; failures are
/// collected into a GridError.
std::vector<FrictionResult> friction_points(const std::vector<Position>& positions,
                                            const ModelParams& params, unsigned workers = 0);

/// Evaluates every (x, y) pair; points are independent and spread over
/// `workers` threads (0 = hardware concurrency). Ordering is canonical.
GridResult friction_grid(const std::vector<double>& x_axis, const std::vector<double>& y_axis,
                         const ModelParams& params, unsigned workers = 0);

/// n equally spaced values from lo to hi inclusive (n == 1 gives lo).
std::vector<double> linspace(double lo, double hi, int n);

}  // namespace floqfric
