#include "floqfric/propagator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace floqfric {

using cplx = std::complex<double>;

namespace {

void check_density(const Eigen::MatrixXcd& rho) {
    if (rho.rows() != rho.cols()) throw std::invalid_argument("density matrix must be square");
    const double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw std::invalid_argument("density matrix must be Hermitian");
    }
    if (std::abs(rho.trace() - cplx(1.0, 0.0)) > 1e-10) {
        throw std::invalid_argument("density matrix must have unit trace");
    }
}

Eigen::MatrixXcd lvn_rhs(const Eigen::MatrixXcd& h, const Eigen::MatrixXcd& rho) {
    const cplx minus_i(0.0, -1.0);
    return minus_i * (h * rho - rho * h);
}

}  // namespace

DensityTrajectory propagate_direct(const TimeDependentHamiltonian& h, const Eigen::MatrixXcd& rho0,
                                   double t_end, double dt, int sample_stride) {
    check_density(rho0);
    if (!(dt > 0.0)) throw std::invalid_argument("propagate_direct: dt must be > 0");
    if (t_end < 0.0) throw std::invalid_argument("propagate_direct: t_end must be >= 0");
    sample_stride = std::max(1, sample_stride);

    const auto steps = static_cast<long>(std::ceil(t_end / dt - 1e-12));
    const double step = steps > 0 ? t_end / static_cast<double>(steps) : 0.0;

    DensityTrajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(rho0);

    Eigen::MatrixXcd rho = rho0;
    for (long k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * step;
        const Eigen::MatrixXcd h0 = h(t);
        const Eigen::MatrixXcd hm = h(t + 0.5 * step);
        const Eigen::MatrixXcd h1 = h(t + step);

        const Eigen::MatrixXcd k1 = lvn_rhs(h0, rho);
        const Eigen::MatrixXcd k2 = lvn_rhs(hm, rho + 0.5 * step * k1);
        const Eigen::MatrixXcd k3 = lvn_rhs(hm, rho + 0.5 * step * k2);
        const Eigen::MatrixXcd k4 = lvn_rhs(h1, rho + step * k3);
        rho += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        if ((k + 1) % sample_stride == 0 || k + 1 == steps) {
            traj.times.push_back(static_cast<double>(k + 1) * step);
            traj.states.push_back(rho);
        }
    }
    return traj;
}

double default_direct_step(const HarmonicSeries& h, double omega) {
    double norm = 0.0;
    for (const auto& [n, hn] : h.harmonics()) {
        norm += Eigen::JacobiSVD<Eigen::MatrixXcd>(hn).singularValues()(0);
    }
    const double period = 2.0 * std::numbers::pi / omega;
    double dt = period / 200.0;
    if (norm > 0.0) dt = std::min(dt, 0.01 / norm);
    return dt;
}

FloquetPropagator::FloquetPropagator(const HarmonicSeries& h, double omega, int n_floquet)
    : hf_(build_floquet_operator(h, omega, n_floquet)), omega_(omega) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hf_.matrix());
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("FloquetPropagator: eigendecomposition failed");
    }
    energies_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
}

Eigen::MatrixXcd FloquetPropagator::evaluate(const Eigen::MatrixXcd& rho0, double t) const {
    check_density(rho0);
    const int d = hf_.dim_level();
    const int n_f = hf_.n_floquet();
    if (rho0.rows() != d) throw std::invalid_argument("FloquetPropagator: rho0 dimension mismatch");

    // Central block row of U(t) = V exp(-i E t) V^dagger.
    const Eigen::VectorXcd phases =
        (energies_.cast<cplx>() * cplx(0.0, -t)).array().exp().matrix();
    const Eigen::MatrixXcd row_v = vectors_.middleRows(hf_.index(0, 0), d);
    const Eigen::MatrixXcd u_row = row_v * phases.asDiagonal() * vectors_.adjoint();

    // rho_F(0) = rho0 (x) 1, so (U rho_F(0))_{0,k} = U_{0,k} rho0.
    Eigen::MatrixXcd left(d, hf_.size());
    for (int k = -n_f; k <= n_f; ++k) {
        left.middleCols(hf_.index(k, 0), d) = u_row.middleCols(hf_.index(k, 0), d) * rho0;
    }

    // rho(t) = sum_k [rho_F(t)]_{0,k} e^{-i k w t}, with U^dagger = V exp(+iEt) V^dagger
    const Eigen::MatrixXcd left_v = left * vectors_ * phases.conjugate().asDiagonal();
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    for (int k = -n_f; k <= n_f; ++k) {
        rho += (left_v * vectors_.middleRows(hf_.index(k, 0), d).adjoint()) *
               std::exp(cplx(0.0, -k * omega_ * t));
    }
    return rho;
}

Eigen::MatrixXcd propagate_floquet(const HarmonicSeries& h, const Eigen::MatrixXcd& rho0,
                                   double omega, int n_floquet, double t) {
    return FloquetPropagator(h, omega, n_floquet).evaluate(rho0, t);
}

Eigen::MatrixXcd propagate_floquet(const HarmonicSeries& h, const Eigen::MatrixXcd& rho0,
                                   const ModelParams& params, double t) {
    return propagate_floquet(h, rho0, params.drive_freq, params.n_floquet, t);
}

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    const Eigen::MatrixXcd diff = a - b;
    const Eigen::MatrixXcd herm = 0.5 * (diff + diff.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

Eigen::MatrixXcd reference_initial_state() {
    Eigen::MatrixXcd rho(2, 2);
    rho << 0.7, cplx(0.2, -0.1), cplx(0.2, 0.1), 0.3;
    return rho;
}

VerifyReport verify_floquet(Position position, const ModelParams& params, int n_floquet,
                            int periods, double tolerance) {
    const auto start = std::chrono::steady_clock::now();
    const HarmonicSeries h = model_harmonics(position, params);
    const double omega = params.drive_freq;
    const double period = 2.0 * std::numbers::pi / omega;
    const double t_end = periods * period;
    const double dt = default_direct_step(h, omega);
    const Eigen::MatrixXcd rho0 = reference_initial_state();

    const auto steps = static_cast<int>(std::ceil(t_end / dt - 1e-12));
    const int stride = std::max(1, steps / 4000);
    const DensityTrajectory direct = propagate_direct(
        [&](double t) { return h.at_time(t, omega); }, rho0, t_end, dt, stride);

    const FloquetPropagator floquet(h, omega, n_floquet);

    VerifyReport report;
    report.position = position;
    report.drive_amp = params.drive_amp;
    report.drive_freq = omega;
    report.n_floquet = n_floquet;
    report.periods = periods;
    report.dt = t_end / std::max(1, steps);
    report.samples = direct.times.size();
    report.tolerance = tolerance;
    for (std::size_t i = 0; i < direct.times.size(); ++i) {
        const Eigen::MatrixXcd rho_f = floquet.evaluate(rho0, direct.times[i]);
        report.max_trace_distance =
            std::max(report.max_trace_distance, trace_distance(rho_f, direct.states[i]));
        report.max_hermiticity_error = std::max(
            report.max_hermiticity_error, (rho_f - rho_f.adjoint()).cwiseAbs().maxCoeff());
        report.max_trace_error =
            std::max(report.max_trace_error, std::abs(rho_f.trace() - cplx(1.0, 0.0)));
    }
    report.passed = report.max_trace_distance < tolerance;
    report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace floqfric
