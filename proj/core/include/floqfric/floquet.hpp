// floquet.hpp: truncated Floquet-space operators built from Fourier harmonics
//
// Index convention on the (2N+1)*d dimensional space: Floquet index m in
// [-N, N] is the slow index, level index i in [0, d) the fast one, so the
// flat index is (m + N) * d + i.

#pragma once

#include <Eigen/Dense>

#include <map>

#include "floqfric/params.hpp"

namespace floqfric {

enum class Direction { x, y };

/// Fourier harmonics H^(n) of a time-periodic d x d Hamiltonian,
/// H(t) = sum_n H^(n) exp(i n omega t).
class HarmonicSeries {
public:
    explicit HarmonicSeries(int dim, Position position = {});

    int dim() const noexcept { return dim_; }
    const Position& position() const noexcept { return position_; }

    /// Stores H^(n) and its Hermitian partner H^(-n) = (H^(n))^dagger.
    void set(int n, const Eigen::MatrixXcd& h);

    /// Zero matrix when the harmonic is absent.
    Eigen::MatrixXcd get(int n) const;

    const std::map<int, Eigen::MatrixXcd>& harmonics() const noexcept { return harmonics_; }

    /// H(t) summed from the stored harmonics.
    Eigen::MatrixXcd at_time(double t, double omega) const;

    /// Largest |n| stored.
    int max_order() const noexcept;

private:
    int dim_;
    Position position_;
    std::map<int, Eigen::MatrixXcd> harmonics_;
};

/// Square operator on the truncated level x Floquet space.
class FloquetOperator {
public:
    FloquetOperator(int dim_level, int n_floquet);
    FloquetOperator(int dim_level, int n_floquet, Eigen::MatrixXcd data);

    int dim_level() const noexcept { return dim_level_; }
    int n_floquet() const noexcept { return n_floquet_; }
    int blocks() const noexcept { return floquet_blocks(n_floquet_); }
    Eigen::Index size() const noexcept { return data_.rows(); }

    /// Flat index of (Floquet index m, level i).
    Eigen::Index index(int m, int level) const noexcept {
        return static_cast<Eigen::Index>(m + n_floquet_) * dim_level_ + level;
    }

    /// Level block (m, n), m and n in [-N, N].
    auto block(int m, int n) { return data_.block(index(m, 0), index(n, 0), dim_level_, dim_level_); }
    auto block(int m, int n) const {
        return data_.block(index(m, 0), index(n, 0), dim_level_, dim_level_);
    }

    const Eigen::MatrixXcd& matrix() const noexcept { return data_; }
    Eigen::MatrixXcd& matrix() noexcept { return data_; }

    double hermiticity_error() const { return (data_ - data_.adjoint()).cwiseAbs().maxCoeff(); }

private:
    int dim_level_;
    int n_floquet_;
    Eigen::MatrixXcd data_;
};

/// Harmonics of the built-in two-level model
///   [[x + Delta, A y + B cos wt], [A y + B cos wt, -x - Delta]].
HarmonicSeries model_harmonics(Position position, const ModelParams& params);

/// Block (m, n) = H^(m-n) + delta_mn m omega I; harmonics reaching outside
/// [-N, N] are dropped.
FloquetOperator build_floquet_operator(const HarmonicSeries& h, double omega, int n_floquet);
FloquetOperator build_floquet_operator(const HarmonicSeries& h, const ModelParams& params);

/// dH_F/dR for the built-in model: dH^(0)/dR replicated on every Floquet block.
FloquetOperator dh_floquet(Direction direction, Position position, const ModelParams& params);

/// Replicates a d x d matrix on all 2N+1 diagonal blocks.
FloquetOperator block_diagonal(const Eigen::MatrixXcd& level_matrix, int n_floquet);

/// Ladder operator L_n: identity on level blocks (m, m - n).
FloquetOperator ladder_operator(int dim_level, int n_floquet, int shift);

/// Number operator: m * I on diagonal block m.
FloquetOperator number_operator(int dim_level, int n_floquet);

}  // namespace floqfric
