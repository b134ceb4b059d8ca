#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <limits>
#include <numbers>
#include <random>

#include "floqfric/greens.hpp"

using namespace floqfric;
using Eigen::MatrixXcd;
using cplx = std::complex<double>;

namespace {

struct Scalar {
    FloquetOperator hf;
    SelfEnergy se;
};

Scalar scalar_level(double h, double gamma, double beta = 2.0, double mu = 0.0) {
    HarmonicSeries hs(1);
    hs.set(0, MatrixXcd::Constant(1, 1, h));
    return {build_floquet_operator(hs, 1.0, 0), SelfEnergy(LeadModel{{gamma}, {0}, {mu}}, beta, 1.0, 0)};
}

ModelParams driven(int n) {
    ModelParams p;
    p.gamma = 1.0;
    p.beta = 2.0;
    p.coupling_slope = 1.0;
    p.level_shift = 3.0;
    p.drive_amp = 1.0;
    p.drive_freq = 0.5;
    p.n_floquet = n;
    return p;
}

double rel(const MatrixXcd& a, const MatrixXcd& b) {
    return (a - b).cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff(), 1e-300);
}

}  // namespace

TEST_CASE("fermi function") {
    CHECK(fermi(0.0, 3.0) == 0.5);
    CHECK(fermi(1.0, 2.0) == doctest::Approx(0.119202922).epsilon(1e-9));
    CHECK(fermi(1e6, 10.0) == 0.0);
    CHECK(fermi(-1e6, 10.0) == 1.0);
    CHECK(std::isfinite(fermi(800.0, 1.0)));
    CHECK(fermi(-2.0, 1.5) + fermi(2.0, 1.5) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("scalar retarded Green's function") {
    auto a = scalar_level(0.0, 1.0);
    auto g = g_retarded(0.0, a.hf, a.se);
    CHECK(std::abs(g(0, 0) - cplx(0, -2)) < 1e-15);

    auto b = scalar_level(2.0, 1.0);
    CHECK(std::abs(g_retarded(2.0, b.hf, b.se)(0, 0) - cplx(0, -2)) < 1e-15);
}

TEST_CASE("closed system needs eta") {
    auto a = scalar_level(0.0, 0.0);
    CHECK_THROWS_AS(g_retarded(0.0, a.hf, a.se), std::runtime_error);
    auto g = g_retarded(0.0, a.hf, a.se, 1e-3);
    CHECK(std::abs(g(0, 0) - cplx(0, -1e3)) < 1e-9);
}

TEST_CASE("resolvent residual for the driven model") {
    auto p = driven(1);
    auto hf = build_floquet_operator(model_harmonics({0.0, 0.0}, p), p);
    auto se = model_self_energy(p);
    auto g = g_retarded(0.0, hf, se);
    MatrixXcd a = -hf.matrix() - se.retarded().matrix();
    CHECK((a * g - MatrixXcd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("energy derivative") {
    MatrixXcd s = MatrixXcd::Constant(1, 1, cplx(0, -2));
    CHECK(std::abs(dgr_deps(s)(0, 0) - 4.0) < 1e-15);
    MatrixXcd c = MatrixXcd::Identity(3, 3) * cplx(0.3, -0.7);
    CHECK((dgr_deps(c) + c * c).isZero(1e-15));

    auto p = driven(3);
    auto hf = build_floquet_operator(model_harmonics({-2.1, 0.6}, p), p);
    auto se = model_self_energy(p);
    const double h = 1e-5;
    for (double eps : {-3.0, 0.2, 2.9}) {
        MatrixXcd fd = (g_retarded(eps + h, hf, se) - g_retarded(eps - h, hf, se)) / (2 * h);
        CHECK(rel(fd, dgr_deps(g_retarded(eps, hf, se))) < 1e-6);
    }
}

TEST_CASE("self-energy layout") {
    auto p = driven(2);
    p.mu_left = 0.3;
    p.mu_right = -0.2;
    auto se = model_self_energy(p);
    CHECK(se.uniform_broadening());
    CHECK(se.retarded().matrix().isApprox(MatrixXcd::Identity(10, 10) * cplx(0, -0.5)));
    auto less = se.lesser_at(0.1);
    CHECK(less.matrix().isDiagonal());
    CHECK((less.matrix() + less.matrix().adjoint()).isZero(0.0));
    for (int m = -2; m <= 2; ++m) {
        CHECK(less.matrix()(less.index(m, 0), less.index(m, 0)).imag() ==
              doctest::Approx(fermi(0.1 - m * 0.5 - 0.3, 2.0)));
        CHECK(less.matrix()(less.index(m, 1), less.index(m, 1)).imag() ==
              doctest::Approx(fermi(0.1 - m * 0.5 + 0.2, 2.0)));
    }
    auto far = se.lesser_diagonal(0.3 + 2 * 0.5 + 10.0 / 2.0 + 500.0);
    CHECK(far.cwiseAbs().maxCoeff() < 1e-200);

    SelfEnergy uneven(LeadModel{{1.0, 0.5}, {0, 0}, {0.0}}, 1.0, 1.0, 1);
    CHECK_FALSE(uneven.uniform_broadening());
    CHECK_THROWS_AS(SelfEnergy(LeadModel{{1.0}, {1}, {0.0}}, 1.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("scalar equilibrium lesser function") {
    auto a = scalar_level(0.7, 1.0, 2.0);
    for (double eps : {-2.0, 0.0, 0.5, 3.0}) {
        auto b = evaluate_greens(eps, a.hf, a.se);
        cplx gr = b.gr(0, 0);
        cplx expect = cplx(0, 1.0 * fermi(eps, 2.0)) * std::norm(gr);
        CHECK(std::abs(b.glesser(0, 0) - expect) < 1e-14);
        CHECK(std::abs(b.glesser(0, 0) - fermi(eps, 2.0) * (b.ga(0, 0) - b.gr(0, 0))) < 1e-14);
    }
}

TEST_CASE("scalar occupation against an independent quadrature") {
    const double h = 2.0, gamma = 1.0, beta = 2.0;
    auto a = scalar_level(h, gamma, beta);
    auto from_lesser = [&](double e) { return (cplx(0, -1) * evaluate_greens(e, a.hf, a.se).glesser(0, 0)).real(); };
    auto lorentz = [&](double e) {
        return gamma * fermi(e, beta) / (2 * std::numbers::pi * ((e - h) * (e - h) + 0.25 * gamma * gamma));
    };
    using boost::math::quadrature::gauss_kronrod;
    const double inf = std::numeric_limits<double>::infinity();
    double n_lesser = gauss_kronrod<double, 61>::integrate(from_lesser, -inf, inf, 15, 1e-12) / (2 * std::numbers::pi);
    double n_oracle = gauss_kronrod<double, 61>::integrate(lorentz, -inf, inf, 15, 1e-12);
    CHECK(n_lesser == doctest::Approx(n_oracle).epsilon(1e-9));
    // closed form at zero temperature: 1/2 - atan(2h/Gamma)/pi; finite beta lies above it
    CHECK(n_oracle > 0.5 - std::atan(2 * h / gamma) / std::numbers::pi);
}

TEST_CASE("Green's function identities at random samples") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ux(-8.0, 2.0), uy(-5.0, 5.0), ue(-12.0, 12.0);
    for (int n : {0, 2, 5}) {
        auto p = driven(n);
        auto se = model_self_energy(p);
        MatrixXcd sigma_diff = se.retarded().matrix() - se.retarded().matrix().adjoint();
        for (int s = 0; s < 20; ++s) {
            Position r{ux(rng), uy(rng)};
            auto hf = build_floquet_operator(model_harmonics(r, p), p);
            auto b = evaluate_greens(ue(rng), hf, se);
            CHECK((b.ga - b.gr.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK(rel(b.gr - b.ga, b.gr * sigma_diff * b.ga) < 1e-10);
            CHECK((b.glesser + b.glesser.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
            MatrixXcd spectral = cplx(0, 1) * (b.gr - b.ga);
            spectral = 0.5 * (spectral + spectral.adjoint());
            CHECK(Eigen::SelfAdjointEigenSolver<MatrixXcd>(spectral).eigenvalues().minCoeff() >= -1e-10);
        }
    }
}

TEST_CASE("undriven equilibrium fluctuation-dissipation") {
    auto p = driven(0);
    p.drive_amp = 0.0;
    p.mu_left = p.mu_right = 0.4;
    auto se = model_self_energy(p);
    for (double eps : {-4.0, 0.4, 1.3}) {
        auto hf = build_floquet_operator(model_harmonics({-2.5, 0.8}, p), p);
        auto b = evaluate_greens(eps, hf, se);
        MatrixXcd fdt = fermi(eps - 0.4, p.beta) * (b.ga - b.gr);
        CHECK((b.glesser - fdt).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, fdt.cwiseAbs().maxCoeff()));
    }
}
