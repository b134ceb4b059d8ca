#include <doctest.h>

#include "floqfric/floquet.hpp"

using namespace floqfric;
using Eigen::MatrixXcd;
using cplx = std::complex<double>;

namespace {

ModelParams reference_params() {
    ModelParams p;
    p.gamma = 1.0;
    p.beta = 2.0;
    p.coupling_slope = 1.0;
    p.level_shift = 3.0;
    p.drive_amp = 1.0;
    p.drive_freq = 0.5;
    p.n_floquet = 1;
    return p;
}

MatrixXcd mat2(cplx a, cplx b, cplx c, cplx d) {
    MatrixXcd m(2, 2);
    m << a, b, c, d;
    return m;
}

}  // namespace

TEST_CASE("model harmonics at the origin") {
    auto h = model_harmonics({0.0, 0.0}, reference_params());
    CHECK(h.dim() == 2);
    CHECK(h.max_order() == 1);
    CHECK(h.get(0).isApprox(mat2(3, 0, 0, -3)));
    CHECK(h.get(1).isApprox(mat2(0, 0.5, 0.5, 0)));
    CHECK(h.get(-1).isApprox(mat2(0, 0.5, 0.5, 0)));
    CHECK(h.get(2).isZero());
}

TEST_CASE("model harmonics without drive") {
    auto p = reference_params();
    p.drive_amp = 0.0;
    auto h = model_harmonics({0.3, -1.0}, p);
    CHECK(h.get(1).isZero());
    CHECK(h.get(-1).isZero());
    CHECK_FALSE(h.get(0).isZero());
}

TEST_CASE("model harmonics at (1, 2)") {
    auto h = model_harmonics({1.0, 2.0}, reference_params());
    CHECK(h.get(0).isApprox(mat2(4, 2, 2, -4)));
}

TEST_CASE("time-domain Hamiltonian sums the harmonics") {
    auto p = reference_params();
    auto h = model_harmonics({0.5, -0.7}, p);
    for (double t : {0.0, 0.4, 3.1}) {
        double c = p.drive_amp * std::cos(p.drive_freq * t);
        MatrixXcd expect = mat2(0.5 + 3, -0.7 + c, -0.7 + c, -0.5 - 3);
        CHECK((h.at_time(t, p.drive_freq) - expect).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("harmonic series rejects inconsistent input") {
    HarmonicSeries h(2);
    CHECK_THROWS_AS(h.set(0, mat2(1, 2, 3, 4)), std::invalid_argument);
    CHECK_THROWS_AS(h.set(1, MatrixXcd::Zero(3, 3)), std::invalid_argument);

    MatrixXcd upper = mat2(0, cplx(1, 1), 0, 0);
    h.set(2, upper);
    CHECK(h.get(-2).isApprox(upper.adjoint()));
}

TEST_CASE("scalar Floquet operators") {
    HarmonicSeries zero(1);
    zero.set(0, MatrixXcd::Zero(1, 1));
    auto hf = build_floquet_operator(zero, 0.5, 1);
    CHECK(hf.size() == 3);
    Eigen::VectorXcd diag(3);
    diag << -0.5, 0.0, 0.5;
    CHECK(hf.matrix().isApprox(MatrixXcd(diag.asDiagonal())));

    HarmonicSeries one(1);
    one.set(0, MatrixXcd::Identity(1, 1));
    auto h1 = build_floquet_operator(one, 0.5, 0);
    CHECK(h1.size() == 1);
    CHECK(h1.matrix()(0, 0) == cplx(1.0));
}

TEST_CASE("driven two-level Floquet operator with N = 1") {
    auto p = reference_params();
    auto hf = build_floquet_operator(model_harmonics({0.0, 0.0}, p), p);
    REQUIRE(hf.size() == 6);
    CHECK(MatrixXcd(hf.block(-1, -1)).isApprox(mat2(2.5, 0, 0, -3.5)));
    CHECK(MatrixXcd(hf.block(0, 0)).isApprox(mat2(3, 0, 0, -3)));
    CHECK(MatrixXcd(hf.block(1, 1)).isApprox(mat2(3.5, 0, 0, -2.5)));
    for (auto [m, n] : {std::pair{0, -1}, {-1, 0}, {1, 0}, {0, 1}})
        CHECK(MatrixXcd(hf.block(m, n)).isApprox(mat2(0, 0.5, 0.5, 0)));
    CHECK(MatrixXcd(hf.block(1, -1)).isZero());
    CHECK(MatrixXcd(hf.block(-1, 1)).isZero());
}

TEST_CASE("Floquet operator is Hermitian and block-Toeplitz") {
    auto p = reference_params();
    p.n_floquet = 4;
    for (Position r : {Position{0.0, 0.0}, Position{-2.7, 1.3}, Position{1.9, -4.4}}) {
        auto hf = build_floquet_operator(model_harmonics(r, p), p);
        CHECK(hf.hermiticity_error() <= 1e-12);
        const int n = p.n_floquet;
        auto stripped = [&](int m, int k) {
            MatrixXcd b = hf.block(m, k);
            if (m == k) b -= m * p.drive_freq * MatrixXcd::Identity(2, 2);
            return b;
        };
        for (int m = -n; m <= n; ++m)
            for (int k = -n; k <= n; ++k) {
                // compare against the same diagonal anchored at the lowest block
                const int lag = m - k;
                const int m0 = lag >= 0 ? -n + lag : -n;
                CHECK((stripped(m, k) - stripped(m0, m0 - lag)).cwiseAbs().maxCoeff() == 0.0);
            }
    }
}

TEST_CASE("harmonics beyond the truncation are dropped") {
    HarmonicSeries h(1);
    h.set(0, MatrixXcd::Zero(1, 1));
    h.set(3, MatrixXcd::Constant(1, 1, cplx(0.2, 0.1)));
    auto hf = build_floquet_operator(h, 1.0, 1);
    CHECK(hf.size() == 3);
    CHECK(hf.matrix().isApprox(MatrixXcd(Eigen::Vector3cd(-1, 0, 1).asDiagonal())));

    auto wide = build_floquet_operator(h, 1.0, 2);
    CHECK(wide.matrix()(wide.index(2, 0), wide.index(-1, 0)) == cplx(0.2, 0.1));
    CHECK(wide.matrix()(wide.index(-1, 0), wide.index(2, 0)) == cplx(0.2, -0.1));
}

TEST_CASE("derivative operators") {
    auto p = reference_params();
    p.n_floquet = 3;
    auto dx = dh_floquet(Direction::x, {1.0, 1.0}, p);
    auto dy = dh_floquet(Direction::y, {1.0, 1.0}, p);
    CHECK(dx.size() == 14);
    for (int m = -3; m <= 3; ++m) {
        CHECK(MatrixXcd(dx.block(m, m)).isApprox(mat2(1, 0, 0, -1)));
        CHECK(MatrixXcd(dy.block(m, m)).isApprox(mat2(0, 1, 1, 0)));
        if (m < 3) CHECK(MatrixXcd(dx.block(m, m + 1)).isZero());
    }
    p.coupling_slope = 0.0;
    CHECK(dh_floquet(Direction::y, {1.0, 1.0}, p).matrix().isZero());

    p.coupling_slope = 2.5;
    auto dy2 = dh_floquet(Direction::y, {0.0, 0.0}, p);
    CHECK(MatrixXcd(dy2.block(0, 0)).isApprox(mat2(0, 2.5, 2.5, 0)));
}

TEST_CASE("derivative operators match finite differences of H_F") {
    auto p = reference_params();
    p.n_floquet = 2;
    const Position r{-1.2, 0.8};
    const double h = 1e-4;
    auto hf = [&](double x, double y) { return build_floquet_operator(model_harmonics({x, y}, p), p).matrix(); };
    MatrixXcd fdx = (hf(r.x + h, r.y) - hf(r.x - h, r.y)) / (2 * h);
    MatrixXcd fdy = (hf(r.x, r.y + h) - hf(r.x, r.y - h)) / (2 * h);
    CHECK((fdx - dh_floquet(Direction::x, r, p).matrix()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((fdy - dh_floquet(Direction::y, r, p).matrix()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("ladder and number operators commute to n L_n on interior blocks") {
    const int d = 2;
    for (int big_n : {2, 3, 5}) {
        auto num = number_operator(d, big_n).matrix();
        for (int shift : {-1, 0, 1}) {
            auto ladder = ladder_operator(d, big_n, shift);
            MatrixXcd comm = num * ladder.matrix() - ladder.matrix() * num;
            MatrixXcd expect = double(shift) * ladder.matrix();
            FloquetOperator diff(d, big_n, comm - expect);
            for (int m = -big_n + 1; m <= big_n - 1; ++m)
                for (int k = -big_n + 1; k <= big_n - 1; ++k)
                    CHECK(MatrixXcd(diff.block(m, k)).isZero(0.0));
        }
    }
}

TEST_CASE("ladder operator placement") {
    auto l = ladder_operator(1, 2, 1);
    CHECK(l.matrix()(l.index(1, 0), l.index(0, 0)) == cplx(1.0));
    CHECK(l.matrix()(l.index(0, 0), l.index(1, 0)) == cplx(0.0));
    CHECK(l.matrix().cwiseAbs().sum() == doctest::Approx(4.0));
    CHECK(ladder_operator(2, 2, 0).matrix().isIdentity());
}

TEST_CASE("block_diagonal replicates") {
    MatrixXcd m = mat2(1, cplx(0, 2), cplx(0, -2), 3);
    auto b = block_diagonal(m, 2);
    CHECK(b.size() == 10);
    for (int k = -2; k <= 2; ++k) CHECK(MatrixXcd(b.block(k, k)) == m);
    CHECK(MatrixXcd(b.block(0, 1)).isZero());
}
