#include "itc/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace itc {

CouplingProfile::CouplingProfile(std::vector<double> positions, double length,
                                 std::vector<double> kappas)
    : positions_(std::move(positions)), length_(length), kappas_(std::move(kappas)) {
    if (kappas_.empty()) {
        throw std::invalid_argument("coupling profile needs at least one atom");
    }
    if (positions_.size() != kappas_.size()) {
        throw std::invalid_argument("positions and couplings differ in length");
    }
    if (!(length_ > 0.0)) {
        throw std::invalid_argument("cavity length must be positive");
    }
    for (std::size_t j = 0; j < kappas_.size(); ++j) {
        if (!(kappas_[j] > 0.0) || !std::isfinite(kappas_[j])) {
            throw std::invalid_argument("coupling of atom " + std::to_string(j + 1) +
                                        " must be positive and finite");
        }
        if (!(positions_[j] > 0.0 && positions_[j] < length_)) {
            throw std::invalid_argument("atom position outside (0, L)");
        }
        if (j > 0 && !(positions_[j] > positions_[j - 1])) {
            throw std::invalid_argument("atom positions must be strictly increasing");
        }
    }
}

double CouplingProfile::sum_squares() const noexcept {
    double s = 0.0;
    for (double k : kappas_) s += k * k;
    return s;
}

CouplingProfile CouplingProfile::scaled(double factor) const {
    if (!(factor > 0.0)) throw std::invalid_argument("scale factor must be positive");
    std::vector<double> k = kappas_;
    for (double& v : k) v *= factor;
    return CouplingProfile(positions_, length_, std::move(k));
}

std::vector<double> equally_spaced_positions(std::size_t n_atoms, double length) {
    if (n_atoms == 0) throw std::invalid_argument("n_atoms must be at least 1");
    if (!(length > 0.0)) throw std::invalid_argument("cavity length must be positive");
    std::vector<double> x(n_atoms);
    const double step = length / static_cast<double>(n_atoms + 1);
    for (std::size_t j = 0; j < n_atoms; ++j) x[j] = static_cast<double>(j + 1) * step;
    return x;
}

CouplingProfile build_sine_profile(std::size_t n_atoms, double length, double amplitude) {
    if (!(amplitude > 0.0)) throw std::invalid_argument("coupling amplitude must be positive");
    auto x = equally_spaced_positions(n_atoms, length);
    std::vector<double> kappas(n_atoms);
    for (std::size_t j = 0; j < n_atoms; ++j) {
        // Evaluate on the mirrored index for the right half so the profile
        // is exactly palindromic in floating point.
        const std::size_t m = std::min(j, n_atoms - 1 - j);
        const double phase = std::numbers::pi * static_cast<double>(m + 1) /
                             static_cast<double>(n_atoms + 1);
        kappas[j] = amplitude * std::sin(phase);
    }
    return CouplingProfile(std::move(x), length, std::move(kappas));
}

CouplingProfile build_uniform_profile(std::size_t n_atoms, double amplitude) {
    if (!(amplitude > 0.0)) throw std::invalid_argument("coupling amplitude must be positive");
    auto x = equally_spaced_positions(n_atoms, 1.0);
    return CouplingProfile(std::move(x), 1.0, std::vector<double>(n_atoms, amplitude));
}

CouplingProfile from_explicit(std::vector<double> kappas) {
    if (kappas.empty()) throw std::invalid_argument("explicit coupling list is empty");
    auto x = equally_spaced_positions(kappas.size(), 1.0);
    return CouplingProfile(std::move(x), 1.0, std::move(kappas));
}

}  // namespace itc
