// propagator.hpp: closed-system reference propagation of a driven density matrix
//
// Two independent routes for rho(t) under H(t) = sum_n H^(n) e^{i n w t}:
// direct fixed-step RK4 integration of d rho/dt = -i[H(t), rho], and
// time-independent evolution under the truncated Floquet Hamiltonian followed
// by reconstruction of the physical density from the central block row.

#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "floqfric/floquet.hpp"

namespace floqfric {

using TimeDependentHamiltonian = std::function<Eigen::MatrixXcd(double)>;

struct DensityTrajectory {
    std::vector<double> times;
    std::vector<Eigen::MatrixXcd> states;
};

/// Classical RK4 with dt adjusted down so that t_end is hit exactly.
/// Every `sample_stride`-th step (and the final one) is recorded.
DensityTrajectory propagate_direct(const TimeDependentHamiltonian& h, const Eigen::MatrixXcd& rho0,
                                   double t_end, double dt, int sample_stride = 1);

/// Default RK4 step: min(0.01 / ||H||, T / 200) with ||H|| bounded by
/// the sum of harmonic spectral norms.
double default_direct_step(const HarmonicSeries& h, double omega);

/// Evolution under H_F via its Hermitian eigendecomposition. Construction
/// performs the decomposition once; evaluate(t) is cheap.
class FloquetPropagator {
public:
    FloquetPropagator(const HarmonicSeries& h, double omega, int n_floquet);

    /// Physical rho(t) from rho_F(0) = rho0 (x) 1.
    Eigen::MatrixXcd evaluate(const Eigen::MatrixXcd& rho0, double t) const;

    const FloquetOperator& hamiltonian() const noexcept { return hf_; }

private:
    FloquetOperator hf_;
    double omega_;
    Eigen::VectorXd energies_;
    Eigen::MatrixXcd vectors_;
};

Eigen::MatrixXcd propagate_floquet(const HarmonicSeries& h, const Eigen::MatrixXcd& rho0,
                                   double omega, int n_floquet, double t);
Eigen::MatrixXcd propagate_floquet(const HarmonicSeries& h, const Eigen::MatrixXcd& rho0,
                                   const ModelParams& params, double t);

/// (1/2) sum |eig(a - b)| for Hermitian a, b.
double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

struct VerifyReport {
    Position position;
    double drive_amp{0.0};
    double drive_freq{0.0};
    int n_floquet{0};
    int periods{0};
    double dt{0.0};
    std::size_t samples{0};
    double max_trace_distance{0.0};
    double max_hermiticity_error{0.0};
    double max_trace_error{0.0};
    double tolerance{0.0};
    double seconds{0.0};
    bool passed{false};
};

/// Direct-vs-Floquet comparison of the closed driven model at `position`,
/// sampled throughout `periods` drive periods.
VerifyReport verify_floquet(Position position, const ModelParams& params, int n_floquet,
                            int periods = 10, double tolerance = 1e-6);

/// Mixed reference state used by verify_floquet.
Eigen::MatrixXcd reference_initial_state();

}  // namespace floqfric
