#include <doctest.h>

#include <numbers>

#include "floqfric/langevin.hpp"

using namespace floqfric;
using Eigen::Matrix2d;
using Eigen::Vector2d;

namespace {

double energy(const TrajectoryState& s, double k, double m) {
    return 0.5 * s.momentum.squaredNorm() / m + 0.5 * k * s.position.squaredNorm();
}

// Grid snapshot of a harmonic field with constant friction.
GridResult harmonic_grid(const HarmonicConstantField& field, double half, int n) {
    GridResult g;
    g.x_axis = linspace(-half, half, n);
    g.y_axis = linspace(-half, half, n);
    for (double x : g.x_axis)
        for (double y : g.y_axis) {
            FrictionResult r;
            r.position = {x, y};
            auto s = field.sample(r.position);
            r.gamma = s.gamma;
            r.mean_force = s.force;
            g.points.push_back(r);
        }
    return g;
}

}  // namespace

TEST_CASE("frictionless noiseless dynamics conserves energy") {
    HarmonicConstantField field(Vector2d(1.0, 1.0), Matrix2d::Zero());
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    cfg.noise = false;
    cfg.n_steps = static_cast<long>(2 * std::numbers::pi / cfg.dt);
    auto s0 = TrajectoryState::make(Vector2d(1.0, -0.5), Vector2d(0.2, 0.3), 1);
    auto traj = simulate(s0, cfg, field, 1.0);
    const double e0 = energy(s0, 1.0, 1.0);
    CHECK(std::abs(energy(traj.final_state, 1.0, 1.0) - e0) / e0 < 1e-3);
}

TEST_CASE("zero steps returns the initial state") {
    HarmonicConstantField field(Vector2d(1.0, 1.0), Matrix2d::Identity());
    IntegratorConfig cfg;
    cfg.n_steps = 0;
    auto s0 = TrajectoryState::make(Vector2d(0.3, 0.1), Vector2d(-1.0, 0.0), 9);
    auto traj = simulate(s0, cfg, field, 1.0);
    REQUIRE(traj.samples.size() == 1);
    CHECK(traj.final_state.position == s0.position);
    CHECK(traj.final_state.momentum == s0.momentum);
    CHECK(traj.final_state.t == 0.0);
}

TEST_CASE("antisymmetric friction does no work") {
    Matrix2d asym;
    asym << 0.0, 0.8, -0.8, 0.0;
    HarmonicConstantField field(Vector2d::Zero(), asym);

    std::mt19937_64 rng(5);
    std::normal_distribution<double> n;
    for (int k = 0; k < 1000; ++k) {
        Vector2d p(n(rng), n(rng));
        CHECK(std::abs(p.dot(asym * p)) <= 1e-15 * p.squaredNorm());
    }

    // kinetic energy drift over a fixed time shrinks linearly with dt
    auto drift = [&](double dt) {
        IntegratorConfig cfg;
        cfg.dt = dt;
        cfg.noise = false;
        cfg.n_steps = static_cast<long>(std::lround(2.0 / dt));
        auto s0 = TrajectoryState::make(Vector2d::Zero(), Vector2d(1.0, 0.5), 0);
        auto s = simulate(s0, cfg, field, 1.0).final_state;
        return std::abs(s.momentum.squaredNorm() - s0.momentum.squaredNorm());
    };
    const double d1 = drift(1e-2), d2 = drift(5e-3), d3 = drift(2.5e-3);
    CHECK(d1 > d2);
    CHECK(d2 > d3);
    CHECK(std::log2(d1 / d2) == doctest::Approx(1.0).epsilon(0.05));
    CHECK(std::log2(d2 / d3) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("equipartition in a damped harmonic well") {
    Matrix2d gamma = Matrix2d::Zero();
    gamma(0, 0) = 1.0;
    HarmonicConstantField field(Vector2d(1.0, 1.0), gamma);
    IntegratorConfig cfg;
    cfg.dt = 1e-2;
    cfg.temperature = 0.5;
    cfg.n_steps = 1'000'000;
    cfg.sample_stride = 1;
    auto traj = simulate(TrajectoryState::make(Vector2d::Zero(), Vector2d::Zero(), 2024), cfg, field, 1.0);
    double sum = 0.0, idle = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 1000; k < traj.samples.size(); ++k, ++count) {
        sum += traj.samples[k].momentum(0) * traj.samples[k].momentum(0);
        idle = std::max(idle, std::abs(traj.samples[k].momentum(1)));
    }
    CHECK(idle == 0.0);
    CHECK(sum / double(count) == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("noise covariance matches the fluctuation-dissipation closure") {
    Matrix2d gs;
    gs << 1.0, 0.3, 0.3, 0.5;
    const double temperature = 0.5, dt = 0.01;
    const long draws = 1'000'000;
    auto state = TrajectoryState::make(Vector2d::Zero(), Vector2d::Zero(), 77);
    Matrix2d acc = Matrix2d::Zero();
    for (long k = 0; k < draws; ++k) {
        Vector2d w = noise_increment(state, gs, temperature, dt);
        acc += w * w.transpose();
    }
    Matrix2d cov = acc / double(draws);
    Matrix2d expect = 2.0 * temperature * dt * gs;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double sigma = std::sqrt((expect(i, i) * expect(j, j) + expect(i, j) * expect(i, j)) / draws);
            CHECK(std::abs(cov(i, j) - expect(i, j)) < 3 * sigma);
        }
}

TEST_CASE("identical seeds give identical trajectories") {
    Matrix2d gamma;
    gamma << 0.7, 0.2, -0.1, 0.4;
    HarmonicConstantField field(Vector2d(1.0, 2.0), gamma);
    IntegratorConfig cfg;
    cfg.dt = 1e-2;
    cfg.n_steps = 2000;
    cfg.sample_stride = 7;
    auto a = simulate(TrajectoryState::make(Vector2d(0.1, 0.2), Vector2d::Zero(), 11), cfg, field, 1.5);
    auto b = simulate(TrajectoryState::make(Vector2d(0.1, 0.2), Vector2d::Zero(), 11), cfg, field, 1.5);
    auto c = simulate(TrajectoryState::make(Vector2d(0.1, 0.2), Vector2d::Zero(), 12), cfg, field, 1.5);
    REQUIRE(a.samples.size() == b.samples.size());
    CHECK(a.samples.size() == 1 + 2000 / 7);
    bool same = true;
    for (std::size_t k = 0; k < a.samples.size(); ++k)
        same = same && a.samples[k].position == b.samples[k].position && a.samples[k].momentum == b.samples[k].momentum;
    CHECK(same);
    CHECK(a.final_state.momentum != c.final_state.momentum);
}

TEST_CASE("cached grid reproduces a field it interpolates exactly") {
    HarmonicConstantField field(Vector2d(1.0, 1.0), Matrix2d::Identity());
    CachedForceField cached(harmonic_grid(field, 8.0, 17));
    for (Position r : {Position{0.3, -1.7}, Position{-7.9, 7.9}, Position{8.0, -8.0}}) {
        auto a = cached.sample(r), b = field.sample(r);
        CHECK((a.force - b.force).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((a.gamma - b.gamma).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK_THROWS_AS(cached.sample({8.5, 0.0}), std::out_of_range);
    CHECK(interpolation_error(cached, field, 3) < 1e-12);

    IntegratorConfig cfg;
    cfg.dt = 1e-2;
    cfg.temperature = 0.5;
    cfg.n_steps = 200'000;
    cfg.sample_stride = 1;
    auto s0 = TrajectoryState::make(Vector2d::Zero(), Vector2d::Zero(), 4);
    auto every = simulate(s0, cfg, field, 1.0);
    auto grid = simulate(s0, cfg, cached, 1.0);
    auto mean_p2 = [](const Trajectory& t) {
        double s = 0.0;
        for (const auto& smp : t.samples) s += smp.momentum.squaredNorm();
        return s / double(t.samples.size());
    };
    CHECK(mean_p2(grid) == doctest::Approx(mean_p2(every)).epsilon(0.02));
}

TEST_CASE("bilinear interpolation between grid nodes") {
    GridResult g;
    g.x_axis = {0.0, 1.0};
    g.y_axis = {0.0, 2.0};
    for (double x : g.x_axis)
        for (double y : g.y_axis) {
            FrictionResult r;
            r.position = {x, y};
            r.gamma = Matrix2d::Constant(x + 10 * y);
            r.mean_force = Vector2d(x * y, 1.0);
            g.points.push_back(r);
        }
    CachedForceField f(g);
    auto s = f.sample({0.25, 0.5});
    CHECK(s.gamma(0, 0) == doctest::Approx(5.25));
    CHECK(s.force(0) == doctest::Approx(0.125));
    CHECK(s.force(1) == doctest::Approx(1.0));
}

TEST_CASE("stability guard") {
    HarmonicConstantField field(Vector2d(1.0, 1.0), Matrix2d::Identity() * 10.0);
    IntegratorConfig cfg;
    cfg.dt = 0.05;
    auto s0 = TrajectoryState::make(Vector2d::Zero(), Vector2d::Zero(), 0);
    CHECK_THROWS_AS(langevin_step(s0, cfg, field, 1.0), std::domain_error);
    cfg.dt = 0.049;
    CHECK_NOTHROW(langevin_step(s0, cfg, field, 1.0));
}

TEST_CASE("symmetric square root") {
    Matrix2d m;
    m << 2.0, 0.5, 0.5, 1.0;
    Matrix2d r = symmetric_sqrt(m);
    CHECK((r * r - m).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((r - r.transpose()).cwiseAbs().maxCoeff() == 0.0);

    Matrix2d fuzz;
    fuzz << 1.0, 0.0, 0.0, -1e-12;
    CHECK(symmetric_sqrt(fuzz)(1, 1) == 0.0);

    Matrix2d bad;
    bad << 1.0, 0.0, 0.0, -1e-3;
    CHECK_THROWS_AS(symmetric_sqrt(bad), std::domain_error);
}

TEST_CASE("dt halving shows first-order convergence") {
    Matrix2d gamma;
    gamma << 0.5, 0.2, -0.2, 0.3;
    HarmonicConstantField field(Vector2d(1.0, 1.5), gamma);
    IntegratorConfig cfg;
    cfg.dt = 1e-2;
    cfg.n_steps = 300;
    auto report = dt_halving_report(TrajectoryState::make(Vector2d(1.0, -1.0), Vector2d(0.0, 0.5), 0), cfg,
                                    field, 1.0);
    CHECK(report.final_difference > report.halved_difference);
    CHECK(report.observed_order == doctest::Approx(1.0).epsilon(0.1));
}
