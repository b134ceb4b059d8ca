#include "floqfric/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace floqfric {

using cplx = std::complex<double>;

HarmonicSeries::HarmonicSeries(int dim, Position position) : dim_(dim), position_(position) {
    if (dim < 1) throw std::invalid_argument("HarmonicSeries: dimension must be >= 1");
}

void HarmonicSeries::set(int n, const Eigen::MatrixXcd& h) {
    if (h.rows() != dim_ || h.cols() != dim_) {
        throw std::invalid_argument("HarmonicSeries: harmonic " + std::to_string(n) + " has shape " +
                                    std::to_string(h.rows()) + "x" + std::to_string(h.cols()) +
                                    ", expected " + std::to_string(dim_));
    }
    if (n == 0) {
        if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, h.cwiseAbs().maxCoeff())) {
            throw std::invalid_argument("HarmonicSeries: H^(0) must be Hermitian");
        }
        harmonics_[0] = h;
        return;
    }
    harmonics_[n] = h;
    harmonics_[-n] = h.adjoint();
}

Eigen::MatrixXcd HarmonicSeries::get(int n) const {
    auto it = harmonics_.find(n);
    if (it == harmonics_.end()) return Eigen::MatrixXcd::Zero(dim_, dim_);
    return it->second;
}

Eigen::MatrixXcd HarmonicSeries::at_time(double t, double omega) const {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim_, dim_);
    for (const auto& [n, hn] : harmonics_) {
        h += hn * std::exp(cplx(0.0, n * omega * t));
    }
    return h;
}

int HarmonicSeries::max_order() const noexcept {
    int order = 0;
    for (const auto& [n, hn] : harmonics_) order = std::max(order, std::abs(n));
    return order;
}

FloquetOperator::FloquetOperator(int dim_level, int n_floquet)
    : dim_level_(dim_level), n_floquet_(n_floquet) {
    if (dim_level < 1) throw std::invalid_argument("FloquetOperator: level dimension must be >= 1");
    if (n_floquet < 0) throw std::invalid_argument("FloquetOperator: truncation must be >= 0");
    const Eigen::Index n = static_cast<Eigen::Index>(dim_level) * floquet_blocks(n_floquet);
    data_ = Eigen::MatrixXcd::Zero(n, n);
}

FloquetOperator::FloquetOperator(int dim_level, int n_floquet, Eigen::MatrixXcd data)
    : FloquetOperator(dim_level, n_floquet) {
    if (data.rows() != data_.rows() || data.cols() != data_.cols()) {
        throw std::invalid_argument("FloquetOperator: data shape does not match d*(2N+1)");
    }
    data_ = std::move(data);
}

HarmonicSeries model_harmonics(Position position, const ModelParams& params) {
    const double diag = position.x + params.level_shift;
    const double offdiag = params.coupling_slope * position.y;

    HarmonicSeries h(2, position);
    Eigen::MatrixXcd h0(2, 2);
    h0 << diag, offdiag, offdiag, -diag;
    h.set(0, h0);

    // B cos(wt) = B/2 e^{iwt} + B/2 e^{-iwt}
    if (params.drive_amp != 0.0) {
        Eigen::MatrixXcd h1(2, 2);
        h1 << 0.0, 0.5 * params.drive_amp, 0.5 * params.drive_amp, 0.0;
        h.set(1, h1);
    }
    return h;
}

FloquetOperator build_floquet_operator(const HarmonicSeries& h, double omega, int n_floquet) {
    FloquetOperator hf(h.dim(), n_floquet);
    const auto identity = Eigen::MatrixXcd::Identity(h.dim(), h.dim());
    for (int m = -n_floquet; m <= n_floquet; ++m) {
        for (const auto& [order, hn] : h.harmonics()) {
            const int n = m - order;
            if (n < -n_floquet || n > n_floquet) continue;
            hf.block(m, n) += hn;
        }
        hf.block(m, m) += (m * omega) * identity;
    }
    return hf;
}

FloquetOperator build_floquet_operator(const HarmonicSeries& h, const ModelParams& params) {
    return build_floquet_operator(h, params.drive_freq, params.n_floquet);
}

FloquetOperator block_diagonal(const Eigen::MatrixXcd& level_matrix, int n_floquet) {
    if (level_matrix.rows() != level_matrix.cols()) {
        throw std::invalid_argument("block_diagonal: level matrix must be square");
    }
    FloquetOperator op(static_cast<int>(level_matrix.rows()), n_floquet);
    for (int m = -n_floquet; m <= n_floquet; ++m) op.block(m, m) = level_matrix;
    return op;
}

FloquetOperator dh_floquet(Direction direction, Position /*position*/, const ModelParams& params) {
    // The model is linear in (x, y) and the drive carries no R dependence.
    Eigen::MatrixXcd d(2, 2);
    if (direction == Direction::x) {
        d << 1.0, 0.0, 0.0, -1.0;
    } else {
        d << 0.0, params.coupling_slope, params.coupling_slope, 0.0;
    }
    return block_diagonal(d, params.n_floquet);
}

FloquetOperator ladder_operator(int dim_level, int n_floquet, int shift) {
    FloquetOperator op(dim_level, n_floquet);
    const auto identity = Eigen::MatrixXcd::Identity(dim_level, dim_level);
    for (int m = -n_floquet; m <= n_floquet; ++m) {
        const int n = m - shift;
        if (n < -n_floquet || n > n_floquet) continue;
        op.block(m, n) = identity;
    }
    return op;
}

FloquetOperator number_operator(int dim_level, int n_floquet) {
    FloquetOperator op(dim_level, n_floquet);
    const auto identity = Eigen::MatrixXcd::Identity(dim_level, dim_level);
    for (int m = -n_floquet; m <= n_floquet; ++m) op.block(m, m) = static_cast<double>(m) * identity;
    return op;
}

}  // namespace floqfric
