#include "floqfric/friction.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

namespace floqfric {

using cplx = std::complex<double>;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Fermi weights below this are dropped from the lesser self-energy sum.
constexpr double kNegligibleWeight = 1e-17;

std::string describe(Position p) {
    std::ostringstream os;
    os.precision(12);
    os << "(x=" << p.x << ", y=" << p.y << ")";
    return os.str();
}

double spectral_norm(const Eigen::MatrixXcd& m) {
    return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

int auto_initial_panels(const EnergyWindow& w, const SelfEnergy& se) {
    const double gamma_min = se.broadening().minCoeff();
    double scale = 1.0 / se.beta();
    if (gamma_min > 0.0) scale = std::min(scale, gamma_min);
    const double panels = std::ceil((w.hi - w.lo) / (4.0 * scale));
    return static_cast<int>(std::clamp(panels, 8.0, 512.0));
}

QuadratureOptions options_for(const ModelParams& params, const EnergyWindow& w,
                              const SelfEnergy& se) {
    QuadratureOptions opt;
    opt.rel_tol = params.quad.rel_tol;
    opt.abs_tol = params.quad.abs_tol;
    opt.max_subdivisions = params.quad.max_subdivisions;
    opt.initial_panels =
        params.quad.initial_panels > 0 ? params.quad.initial_panels : auto_initial_panels(w, se);
    return opt;
}

struct EnergyIntegral {
    QuadratureResult total;
    Eigen::VectorXd lower_tail;
};

// Window integral plus the semi-infinite lower tail, mapped by
// eps = lo - (1 - u) / u onto u in (0, 1]. The tail is held to the absolute
// tolerance implied by the window result so it costs few evaluations.
EnergyIntegral integrate_energy(const VectorIntegrand& f, const EnergyWindow& w,
                                const QuadratureOptions& opt) {
    EnergyIntegral out;
    QuadratureResult main = integrate_adaptive(f, w.lo, w.hi, opt);

    QuadratureOptions tail_opt = opt;
    tail_opt.initial_panels = 4;
    std::vector<double> scale;
    for (Eigen::Index c = 0; c < main.value.size(); ++c) {
        const auto g = opt.groups.empty() ? std::size_t{0} : static_cast<std::size_t>(opt.groups[static_cast<std::size_t>(c)]);
        if (scale.size() <= g) scale.resize(g + 1, 0.0);
        scale[g] = std::max(scale[g], std::abs(main.value(c)));
    }
    double tol = std::numeric_limits<double>::infinity();
    for (double s : scale) {
        if (s > 0.0) tol = std::min(tol, opt.rel_tol * s);
    }
    tail_opt.abs_tol = std::isfinite(tol) ? std::max(opt.abs_tol, tol) : opt.abs_tol;
    const double lo = w.lo;
    const QuadratureResult tail = integrate_adaptive(
        [&](double u) -> Eigen::VectorXd {
            const double s = 1.0 / u;
            return f(lo - (1.0 - u) * s) * (s * s);
        },
        0.0, 1.0, tail_opt);

    out.lower_tail = tail.value;
    out.total.value = main.value + tail.value;
    out.total.error = main.error + tail.error;
    out.total.evaluations = main.evaluations + tail.evaluations;
    out.total.panels = main.panels + tail.panels;
    out.total.converged = main.converged && tail.converged;
    return out;
}

}  // namespace

FrictionError::FrictionError(Position position, const std::string& what)
    : std::runtime_error(describe(position) + ": " + what), position_(position) {}

GridError::GridError(std::vector<Failure> failures)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << failures.size() << " grid point(s) failed";
          if (!failures.empty()) os << "; first at " << describe(failures.front().position) << ": "
                                    << failures.front().message;
          return os.str();
      }()),
      failures_(std::move(failures)) {}

EnergyWindow energy_window(const HarmonicSeries& h, const SelfEnergy& se, const ModelParams& params) {
    const auto& mu = se.leads().lead_mu;
    const double mu_min = *std::min_element(mu.begin(), mu.end());
    const double mu_max = *std::max_element(mu.begin(), mu.end());
    const double replica = se.n_floquet() * se.omega();

    double half_width = params.quad.window_half_width;
    if (!(half_width > 0.0)) {
        double h_norm = 0.0;
        for (const auto& [n, hn] : h.harmonics()) h_norm += spectral_norm(hn);
        half_width = std::max({10.0 / se.beta(), 10.0 * se.broadening().maxCoeff(), 2.0 * h_norm + 2.0});
    }
    return {mu_min - replica - half_width, mu_max + replica + half_width};
}

FrictionIntegrand::FrictionIntegrand(const FloquetOperator& hf, const FloquetOperator& dhx,
                                     const FloquetOperator& dhy, const SelfEnergy& se,
                                     bool force_dense)
    : hf_(hf), dhx_(dhx), dhy_(dhy), se_(se),
      spectral_(!force_dense && se.uniform_broadening()) {
    if (hf.size() != dhx.size() || hf.size() != dhy.size() ||
        hf.dim_level() != se.dim_level() || hf.n_floquet() != se.n_floquet()) {
        throw std::invalid_argument("FrictionIntegrand: operator shapes differ");
    }
    if (!spectral_) return;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hf.matrix());
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("FrictionIntegrand: eigendecomposition of h_F failed");
    }
    energies_ = solver.eigenvalues();
    const Eigen::MatrixXcd& u = solver.eigenvectors();
    ax_ = u.adjoint() * dhx.matrix() * u;
    ay_ = u.adjoint() * dhy.matrix() * u;
    const Eigen::MatrixXcd u0 = u.middleRows(hf.index(0, 0), hf.dim_level());
    const Eigen::MatrixXcd central = u0.adjoint() * u0;
    cax_ = central * ax_;
    cay_ = central * ay_;
    half_gamma_ = 0.5 * se.broadening()(0);

    // Group flat indices by Fermi offset so Sigma^< needs one weight per group.
    const Eigen::VectorXd& shift = se.fermi_shift();
    std::vector<std::vector<Eigen::Index>> members;
    for (Eigen::Index k = 0; k < shift.size(); ++k) {
        std::size_t g = 0;
        while (g < group_shift_.size() && std::abs(group_shift_[g] - shift(k)) > 1e-12) ++g;
        if (g == group_shift_.size()) {
            group_shift_.push_back(shift(k));
            members.emplace_back();
        }
        members[g].push_back(k);
    }
    for (const auto& rows : members) {
        Eigen::MatrixXcd ug(static_cast<Eigen::Index>(rows.size()), u.cols());
        for (std::size_t r = 0; r < rows.size(); ++r) ug.row(static_cast<Eigen::Index>(r)) = u.row(rows[r]);
        projectors_.push_back(ug.adjoint() * ug);
    }
}

Eigen::VectorXd FrictionIntegrand::operator()(double eps) const {
    return spectral_ ? eval_spectral(eps) : eval_dense(eps);
}

Eigen::VectorXd FrictionIntegrand::eval_spectral(double eps) const {
    const Eigen::Index n = energies_.size();
    const double beta = se_.beta();

    // S = U^dagger Sigma^< U / (i Gamma); the projectors sum to the identity,
    // so fill from whichever side has fewer non-negligible weights.
    std::size_t filled = 0;
    std::size_t empty = 0;
    std::vector<double> occ(group_shift_.size());
    for (std::size_t g = 0; g < group_shift_.size(); ++g) {
        occ[g] = fermi(eps - group_shift_[g], beta);
        if (occ[g] >= kNegligibleWeight) ++filled;
        if (fermi(group_shift_[g] - eps, beta) >= kNegligibleWeight) ++empty;
    }
    Eigen::MatrixXcd s;
    if (filled <= empty) {
        s = Eigen::MatrixXcd::Zero(n, n);
        for (std::size_t g = 0; g < occ.size(); ++g) {
            if (occ[g] >= kNegligibleWeight) s += occ[g] * projectors_[g];
        }
    } else {
        s = Eigen::MatrixXcd::Identity(n, n);
        for (std::size_t g = 0; g < occ.size(); ++g) {
            const double hole = fermi(group_shift_[g] - eps, beta);
            if (hole >= kNegligibleWeight) s -= hole * projectors_[g];
        }
    }

    const Eigen::VectorXcd g =
        (Eigen::VectorXcd::Constant(n, cplx(eps, half_gamma_)) - energies_.cast<cplx>()).cwiseInverse();
    const cplx i_gamma(0.0, 2.0 * half_gamma_);

    // Y = g S g^*, i.e. U^dagger G^< U
    const Eigen::MatrixXcd y = i_gamma * (g.asDiagonal() * s * g.conjugate().asDiagonal());
    const Eigen::VectorXcd gsq = g.cwiseProduct(g);

    const Eigen::MatrixXcd kx = ax_ * y;
    const Eigen::MatrixXcd ky = ay_ * y;

    // Tr[P_0 D_a (-G^R G^R) D_b G^<] = -sum_{a',b'} g_{a'}^2 (C_a)_{b'a'} (A_b Y)_{a'b'}
    auto trace_term = [&](const Eigen::MatrixXcd& c_left, const Eigen::MatrixXcd& k_right) {
        return -(gsq.asDiagonal() * c_left.transpose().cwiseProduct(k_right)).sum();
    };

    const cplx txx = trace_term(cax_, kx);
    const cplx txy = trace_term(cax_, ky);
    const cplx tyx = trace_term(cay_, kx);
    const cplx tyy = trace_term(cay_, ky);
    const cplx fx = cax_.transpose().cwiseProduct(y).sum();
    const cplx fy = cay_.transpose().cwiseProduct(y).sum();

    Eigen::VectorXd out(kSize);
    out << txx.real(), txy.real(), tyx.real(), tyy.real(), fx.real(), fx.imag(), fy.real(), fy.imag();
    return out;
}

Eigen::VectorXd FrictionIntegrand::eval_dense(double eps) const {
    const Eigen::MatrixXcd gr = g_retarded(eps, hf_, se_);
    const Eigen::MatrixXcd gl = g_lesser(eps, gr, gr.adjoint(), se_);
    const Eigen::MatrixXcd dg = dgr_deps(gr);

    const Eigen::MatrixXcd nx = dhx_.matrix() * dg;
    const Eigen::MatrixXcd ny = dhy_.matrix() * dg;
    const Eigen::MatrixXcd mx = dhx_.matrix() * gl;
    const Eigen::MatrixXcd my = dhy_.matrix() * gl;
    const Eigen::Index c0 = hf_.index(0, 0), d = hf_.dim_level();
    // trace of a * b over the central block
    auto tr = [&](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
        return a.middleRows(c0, d).transpose().cwiseProduct(b.middleCols(c0, d)).sum();
    };

    const cplx txx = tr(nx, mx);
    const cplx txy = tr(nx, my);
    const cplx tyx = tr(ny, mx);
    const cplx tyy = tr(ny, my);
    const cplx fx = mx.block(c0, c0, d, d).trace();
    const cplx fy = my.block(c0, c0, d, d).trace();

    Eigen::VectorXd out(kSize);
    out << txx.real(), txy.real(), tyx.real(), tyy.real(), fx.real(), fx.imag(), fy.real(), fy.imag();
    return out;
}

Eigen::Vector2d potential_force(Position position, const ModelParams& params) {
    return {-params.pot_kx * position.x, -params.pot_ky * position.y};
}

FrictionResult friction_tensor(Position position, const ModelParams& params) {
    validate(params);
    const HarmonicSeries h = model_harmonics(position, params);
    const FloquetOperator hf = build_floquet_operator(h, params);
    const FloquetOperator dhx = dh_floquet(Direction::x, position, params);
    const FloquetOperator dhy = dh_floquet(Direction::y, position, params);
    const SelfEnergy se = model_self_energy(params);
    const FrictionIntegrand integrand(hf, dhx, dhy, se);

    const EnergyWindow window = energy_window(h, se, params);
    QuadratureOptions opt = options_for(params, window, se);
    opt.groups = {0, 0, 0, 0, 1, 1, 1, 1};

    const EnergyIntegral energy =
        integrate_energy([&](double e) { return integrand(e); }, window, opt);
    const QuadratureResult& q = energy.total;
    if (!q.converged) {
        std::ostringstream os;
        os << "energy quadrature did not converge after " << q.evaluations
           << " evaluations (max error " << q.error.maxCoeff() << ")";
        throw FrictionError(position, os.str());
    }

    // T + conj(T) = 2 Re T
    const double scale = 2.0 / kTwoPi;

    FrictionResult r;
    r.position = position;
    r.gamma << q.value(0), q.value(1), q.value(2), q.value(3);
    r.gamma *= scale;
    r.gamma_sym = 0.5 * (r.gamma + r.gamma.transpose());
    r.gamma_asym = 0.5 * (r.gamma - r.gamma.transpose());
    r.quad_error = scale * q.error.head<4>().maxCoeff();
    r.evaluations = q.evaluations;

    // Tr[D sigma] = -i/(2 pi) int Tr[D G^<]
    const double force_scale = 1.0 / kTwoPi;
    const cplx tr_x = cplx(0.0, -1.0) * cplx(q.value(4), q.value(5)) * force_scale;
    const cplx tr_y = cplx(0.0, -1.0) * cplx(q.value(6), q.value(7)) * force_scale;
    r.mean_force = potential_force(position, params) - Eigen::Vector2d(tr_x.real(), tr_y.real());
    r.imag_residual = std::max(std::abs(tr_x.imag()), std::abs(tr_y.imag()));

    r.lower_tail = scale * energy.lower_tail.head<4>().cwiseAbs().maxCoeff();
    // Above the window the integrand carries a Fermi factor, so its mass is
    // at most the edge value times 1/beta.
    r.tail_estimate = scale * integrand(window.hi).head<4>().cwiseAbs().maxCoeff() / se.beta();

    const double tol = params.imag_tol * std::max(r.gamma.cwiseAbs().maxCoeff(), 1.0);
    if (r.imag_residual > tol) {
        std::ostringstream os;
        os << "imaginary residual " << r.imag_residual << " exceeds tolerance " << tol;
        throw FrictionError(position, os.str());
    }
    return r;
}

Eigen::MatrixXcd steady_state_density(Position position, const ModelParams& params) {
    validate(params);
    const HarmonicSeries h = model_harmonics(position, params);
    const FloquetOperator hf = build_floquet_operator(h, params);
    const SelfEnergy se = model_self_energy(params);
    const EnergyWindow window = energy_window(h, se, params);
    const Eigen::Index n = hf.size();

    auto integrand = [&](double eps) {
        const Eigen::MatrixXcd gr = g_retarded(eps, hf, se);
        const Eigen::MatrixXcd gl = g_lesser(eps, gr, gr.adjoint(), se);
        Eigen::VectorXd out(2 * n * n);
        for (Eigen::Index k = 0; k < n * n; ++k) {
            const cplx v = gl(k % n, k / n);
            out(2 * k) = v.real();
            out(2 * k + 1) = v.imag();
        }
        return out;
    };

    const QuadratureResult q = integrate_energy(integrand, window, options_for(params, window, se)).total;
    if (!q.converged) throw FrictionError(position, "density quadrature did not converge");

    Eigen::MatrixXcd sigma(n, n);
    for (Eigen::Index k = 0; k < n * n; ++k) {
        sigma(k % n, k / n) = cplx(0.0, -1.0) * cplx(q.value(2 * k), q.value(2 * k + 1)) / kTwoPi;
    }
    return sigma;
}

Eigen::MatrixXcd period_averaged_density(const FloquetOperator& sigma) {
    return sigma.block(0, 0);
}

Eigen::Vector2d mean_force(Position position, const ModelParams& params) {
    return friction_tensor(position, params).mean_force;
}

std::vector<FrictionResult> friction_points(const std::vector<Position>& positions,
                                            const ModelParams& params, unsigned workers) {
    validate(params);
    const std::size_t total = positions.size();
    std::vector<FrictionResult> results(total);
    std::vector<std::string> errors(total);
    std::vector<char> failed(total, 0);
    std::atomic<std::size_t> next{0};

    auto work = [&]() {
        for (std::size_t k = next.fetch_add(1); k < total; k = next.fetch_add(1)) {
            try {
                results[k] = friction_tensor(positions[k], params);
            } catch (const std::exception& e) {
                failed[k] = 1;
                errors[k] = e.what();
            }
        }
    };

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(total, 1)));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    std::vector<GridError::Failure> failures;
    for (std::size_t k = 0; k < total; ++k) {
        if (failed[k]) failures.push_back({positions[k], errors[k]});
    }
    if (!failures.empty()) throw GridError(std::move(failures));
    return results;
}

GridResult friction_grid(const std::vector<double>& x_axis, const std::vector<double>& y_axis,
                         const ModelParams& params, unsigned workers) {
    auto strictly_increasing = [](const std::vector<double>& v) {
        return !v.empty() && std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
    };
    if (!strictly_increasing(x_axis)) throw std::invalid_argument("friction_grid: x axis must be strictly increasing");
    if (!strictly_increasing(y_axis)) throw std::invalid_argument("friction_grid: y axis must be strictly increasing");

    std::vector<Position> positions;
    positions.reserve(x_axis.size() * y_axis.size());
    for (double x : x_axis) {
        for (double y : y_axis) positions.push_back({x, y});
    }

    GridResult grid;
    grid.x_axis = x_axis;
    grid.y_axis = y_axis;
    grid.params = params;
    grid.points = friction_points(positions, params, workers);
    return grid;
}

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 1) throw std::invalid_argument("linspace: need at least one point");
    std::vector<double> v(static_cast<std::size_t>(n));
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    const double step = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + i * step;
    v.back() = hi;
    return v;
}

}  // namespace floqfric
