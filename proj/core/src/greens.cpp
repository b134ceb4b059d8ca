#include "floqfric/greens.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace floqfric {

using cplx = std::complex<double>;

double fermi(double e, double beta) noexcept {
    const double x = beta * e;
    if (x > 0.0) {
        const double t = std::exp(-x);
        return t / (1.0 + t);
    }
    return 1.0 / (1.0 + std::exp(x));
}

LeadModel model_leads(const ModelParams& params) {
    return LeadModel{{params.gamma, params.gamma}, {0, 1}, {params.mu_left, params.mu_right}};
}

SelfEnergy::SelfEnergy(LeadModel leads, double beta, double omega, int n_floquet)
    : leads_(std::move(leads)), beta_(beta), omega_(omega), n_floquet_(n_floquet) {
    const auto d = leads_.level_gamma.size();
    if (d == 0) throw std::invalid_argument("SelfEnergy: no levels");
    if (leads_.level_lead.size() != d) {
        throw std::invalid_argument("SelfEnergy: level_lead size differs from level_gamma");
    }
    for (std::size_t i = 0; i < d; ++i) {
        if (leads_.level_gamma[i] < 0.0) throw std::invalid_argument("SelfEnergy: negative Gamma");
        const int lead = leads_.level_lead[i];
        if (lead < 0 || static_cast<std::size_t>(lead) >= leads_.lead_mu.size()) {
            throw std::invalid_argument("SelfEnergy: level mapped to unknown lead");
        }
    }
    if (!(beta > 0.0)) throw std::invalid_argument("SelfEnergy: beta must be > 0");
    if (n_floquet < 0) throw std::invalid_argument("SelfEnergy: truncation must be >= 0");

    const int blocks = floquet_blocks(n_floquet);
    shift_.resize(static_cast<Eigen::Index>(d) * blocks);
    broadening_.resize(shift_.size());
    Eigen::Index k = 0;
    for (int m = -n_floquet; m <= n_floquet; ++m) {
        for (std::size_t i = 0; i < d; ++i, ++k) {
            shift_(k) = m * omega + leads_.lead_mu[static_cast<std::size_t>(leads_.level_lead[i])];
            broadening_(k) = leads_.level_gamma[i];
        }
    }
}

FloquetOperator SelfEnergy::retarded() const {
    FloquetOperator op(dim_level(), n_floquet_);
    op.matrix().diagonal() = retarded_diagonal();
    return op;
}

Eigen::VectorXcd SelfEnergy::retarded_diagonal() const {
    return broadening_.cast<cplx>() * cplx(0.0, -0.5);
}

Eigen::VectorXcd SelfEnergy::lesser_diagonal(double eps) const {
    Eigen::VectorXcd out(shift_.size());
    for (Eigen::Index k = 0; k < shift_.size(); ++k) {
        out(k) = cplx(0.0, broadening_(k) * fermi(eps - shift_(k), beta_));
    }
    return out;
}

FloquetOperator SelfEnergy::lesser_at(double eps) const {
    FloquetOperator op(dim_level(), n_floquet_);
    op.matrix().diagonal() = lesser_diagonal(eps);
    return op;
}

bool SelfEnergy::uniform_broadening() const noexcept {
    return (broadening_.array() == broadening_(0)).all();
}

SelfEnergy model_self_energy(const ModelParams& params) {
    return SelfEnergy(model_leads(params), params.beta, params.drive_freq, params.n_floquet);
}

Eigen::MatrixXcd g_retarded(double eps, const FloquetOperator& hf, const SelfEnergy& se,
                            double eta) {
    if (hf.dim_level() != se.dim_level() || hf.n_floquet() != se.n_floquet()) {
        throw std::invalid_argument("g_retarded: Hamiltonian and self-energy shapes differ");
    }
    const Eigen::Index n = hf.size();
    Eigen::MatrixXcd a = -hf.matrix();
    a.diagonal() += Eigen::VectorXcd::Constant(n, cplx(eps, eta)) - se.retarded_diagonal();

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    if (!(lu.rcond() > 1e-14)) {
        throw std::runtime_error("g_retarded: singular resolvent; supply eta > 0 for closed systems");
    }
    return lu.inverse();
}

Eigen::MatrixXcd dgr_deps(const Eigen::MatrixXcd& gr) { return -(gr * gr); }

Eigen::MatrixXcd g_lesser(double eps, const Eigen::MatrixXcd& gr, const Eigen::MatrixXcd& ga,
                          const SelfEnergy& se) {
    return gr * se.lesser_diagonal(eps).asDiagonal() * ga;
}

GreensBundle evaluate_greens(double eps, const FloquetOperator& hf, const SelfEnergy& se,
                             double eta) {
    GreensBundle b;
    b.energy = eps;
    b.gr = g_retarded(eps, hf, se, eta);
    b.ga = b.gr.adjoint();
    b.dgr_deps = dgr_deps(b.gr);
    b.glesser = g_lesser(eps, b.gr, b.ga, se);
    return b;
}

}  // namespace floqfric
