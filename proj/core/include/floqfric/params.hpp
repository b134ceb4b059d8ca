// params.hpp: physical and numerical parameters of the driven dot-lead model
//
// Units: hbar = 1, k_B = 1. Energies, frequencies and temperatures share one
// scale (the lead broadening is the natural unit).

#pragma once

#include <stdexcept>
#include <string>

namespace floqfric {

/// Nuclear configuration (x, y).
struct Position {
    double x{0.0};
    double y{0.0};

    friend bool operator==(const Position&, const Position&) = default;
};

/// Thrown when a parameter violates its constraint; key() names the field.
class ParamError : public std::invalid_argument {
public:
    ParamError(std::string key, const std::string& what)
        : std::invalid_argument(key + ": " + what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Energy quadrature controls.
struct QuadratureSettings {
    double window_half_width{0.0};   // W; <= 0 selects the automatic window
    double rel_tol{1e-7};
    double abs_tol{1e-14};
    int max_subdivisions{4000};
    int initial_panels{0};           // <= 0 selects a count from the feature scale

    friend bool operator==(const QuadratureSettings&, const QuadratureSettings&) = default;
};

struct ModelParams {
    // lead coupling and thermodynamics
    double gamma{1.0};          // wide-band broadening, Gamma_11 = Gamma_22
    double mu_left{0.0};
    double mu_right{0.0};
    double beta{1.0};           // inverse temperature

    // two-level, two-mode dot Hamiltonian
    double drive_amp{0.0};      // B in B cos(omega t)
    double drive_freq{1.0};     // omega
    double coupling_slope{1.0}; // A in A*y
    double level_shift{0.0};    // Delta
    int n_floquet{0};           // Floquet indices -N..N

    // nuclei: U = kx x^2 / 2 + ky y^2 / 2, equal masses
    double pot_kx{1.0};
    double pot_ky{1.0};
    double mass{1.0};

    QuadratureSettings quad{};
    double eta{1e-8};           // resolvent regulator, used only when gamma == 0
    double imag_tol{1e-8};      // allowed imaginary residual relative to max|gamma|

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Throws ParamError naming the first violated constraint.
void validate(const ModelParams& p);

/// Floquet truncation dimension 2N + 1.
inline int floquet_blocks(int n_floquet) { return 2 * n_floquet + 1; }

}  // namespace floqfric
