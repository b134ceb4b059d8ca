// quadrature.hpp: globally adaptive Gauss-Kronrod (7/15) for vector integrands
//
// All components share one subdivision of the interval, so entries of a
// tensor-valued integral are integrated on identical nodes. Components are
// organised in groups; each group must satisfy
//   max_c err_c <= max(abs_tol, rel_tol * max_c |I_c|)
// independently, so small groups are not swamped by large ones.

#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace floqfric {

using VectorIntegrand = std::function<Eigen::VectorXd(double)>;

struct QuadratureOptions {
    double rel_tol{1e-7};
    double abs_tol{1e-14};
    int max_subdivisions{4000};
    int initial_panels{1};
    /// Group id per component; empty means a single group.
    std::vector<int> groups;
};

struct QuadratureResult {
    Eigen::VectorXd value;
    Eigen::VectorXd error;     // estimated absolute error per component
    int evaluations{0};
    int panels{0};
    bool converged{false};
};

/// Single 15-point Kronrod panel; error is the QUADPACK-style estimate.
void gauss_kronrod_15(const VectorIntegrand& f, double a, double b, Eigen::VectorXd& value,
                      Eigen::VectorXd& error);

QuadratureResult integrate_adaptive(const VectorIntegrand& f, double a, double b,
                                    const QuadratureOptions& options);

}  // namespace floqfric
