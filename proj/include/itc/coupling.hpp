#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace itc {

/// Atom positions along the cavity axis and their dimensionless couplings
/// kappa_j = g_j / w. Immutable once built.
class CouplingProfile {
public:
    CouplingProfile(std::vector<double> positions, double length, std::vector<double> kappas);

    std::size_t n_atoms() const noexcept { return kappas_.size(); }
    double length() const noexcept { return length_; }
    std::span<const double> positions() const noexcept { return positions_; }
    std::span<const double> kappas() const noexcept { return kappas_; }
    double kappa(std::size_t j) const { return kappas_.at(j); }

    /// Sum of kappa_j^2 (the squared single-excitation norm).
    double sum_squares() const noexcept;

    /// Same positions, every coupling multiplied by `factor` (> 0).
    CouplingProfile scaled(double factor) const;

private:
    std::vector<double> positions_;
    double length_;
    std::vector<double> kappas_;
};

/// Equally spaced positions x_j = j L / (N + 1), j = 1..N.
std::vector<double> equally_spaced_positions(std::size_t n_atoms, double length);

/// Standing-wave profile kappa_j = amplitude * sin(pi x_j / L).
CouplingProfile build_sine_profile(std::size_t n_atoms, double length, double amplitude);

/// Homogeneous limit: every atom couples with `amplitude`.
CouplingProfile build_uniform_profile(std::size_t n_atoms, double amplitude);

/// Explicit couplings on unit length with synthesized equal spacing.
CouplingProfile from_explicit(std::vector<double> kappas);

}  // namespace itc
