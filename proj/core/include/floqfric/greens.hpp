// greens.hpp: wide-band Floquet self-energies and Green's functions of the dot
//
// Each dot level i couples to one lead zeta(i) with an energy-independent
// broadening Gamma_i. In Floquet block m the lead is shifted by m*omega, so
//   Sigma^R = -(i/2) diag(Gamma_i)                         (all blocks)
//   Sigma^<(eps) = i diag(Gamma_i f(eps - m omega - mu_zeta(i)))

#pragma once

#include <Eigen/Dense>

#include <vector>

#include "floqfric/floquet.hpp"

namespace floqfric {

/// Fermi function 1 / (1 + exp(beta e)), safe for large |beta e|.
double fermi(double e, double beta) noexcept;

/// Level -> lead assignment with per-level broadening.
struct LeadModel {
    std::vector<double> level_gamma;   // Gamma_i, one per dot level
    std::vector<int> level_lead;       // zeta(i), index into lead_mu
    std::vector<double> lead_mu;       // chemical potential per lead
};

/// Level 0 on the left lead, level 1 on the right lead, both with Gamma.
LeadModel model_leads(const ModelParams& params);

class SelfEnergy {
public:
    SelfEnergy(LeadModel leads, double beta, double omega, int n_floquet);

    int dim_level() const noexcept { return static_cast<int>(leads_.level_gamma.size()); }
    int n_floquet() const noexcept { return n_floquet_; }
    double omega() const noexcept { return omega_; }
    double beta() const noexcept { return beta_; }
    const LeadModel& leads() const noexcept { return leads_; }

    /// Block-diagonal, energy independent.
    FloquetOperator retarded() const;
    /// Diagonal of Sigma^R (flat Floquet ordering).
    Eigen::VectorXcd retarded_diagonal() const;

    /// Diagonal of Sigma^<(eps) (flat Floquet ordering).
    Eigen::VectorXcd lesser_diagonal(double eps) const;
    FloquetOperator lesser_at(double eps) const;

    /// Fermi-function argument offset m*omega + mu for every flat index.
    const Eigen::VectorXd& fermi_shift() const noexcept { return shift_; }
    /// Gamma for every flat index.
    const Eigen::VectorXd& broadening() const noexcept { return broadening_; }

    /// True when Sigma^R is a multiple of the identity (equal Gamma on every level).
    bool uniform_broadening() const noexcept;

private:
    LeadModel leads_;
    double beta_;
    double omega_;
    int n_floquet_;
    Eigen::VectorXd shift_;
    Eigen::VectorXd broadening_;
};

SelfEnergy model_self_energy(const ModelParams& params);

struct GreensBundle {
    double energy{0.0};
    Eigen::MatrixXcd gr;
    Eigen::MatrixXcd ga;
    Eigen::MatrixXcd dgr_deps;
    Eigen::MatrixXcd glesser;
};

/// (eps - Sigma^R - h_F + i eta)^{-1}. With Gamma > 0 everywhere eta = 0 is
/// exact; a singular system throws std::runtime_error.
Eigen::MatrixXcd g_retarded(double eps, const FloquetOperator& hf, const SelfEnergy& se,
                            double eta = 0.0);

/// d G^R / d eps = -G^R G^R (Sigma^R energy independent).
Eigen::MatrixXcd dgr_deps(const Eigen::MatrixXcd& gr);

/// G^R Sigma^<(eps) G^A.
Eigen::MatrixXcd g_lesser(double eps, const Eigen::MatrixXcd& gr, const Eigen::MatrixXcd& ga,
                          const SelfEnergy& se);

GreensBundle evaluate_greens(double eps, const FloquetOperator& hf, const SelfEnergy& se,
                             double eta = 0.0);

}  // namespace floqfric
