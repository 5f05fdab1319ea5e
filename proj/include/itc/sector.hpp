#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "itc/coupling.hpp"

namespace itc {

inline constexpr std::size_t kDefaultSectorCap = 200000;
inline constexpr std::size_t kDefaultRow2AtomCap = 24;
inline constexpr std::size_t kMaxAtoms = 63;

using AtomMask = std::uint64_t;

/// One basis ket |photons> |atoms>, bit j of `mask` set when atom j is excited.
struct SectorState {
    std::size_t photons;
    AtomMask mask;

    bool operator==(const SectorState&) const = default;
};

/// Number of states with k excitations over n atoms, saturating at SIZE_MAX.
std::size_t sector_dimension(std::size_t n_atoms, std::size_t k);

/// All kets with photons + popcount(mask) == k, ordered by atomic excitation
/// count and then by mask value.
class SectorBasis {
public:
    SectorBasis(std::size_t n_atoms, std::size_t k);

    std::size_t n_atoms() const noexcept { return n_atoms_; }
    std::size_t k() const noexcept { return k_; }
    std::size_t dimension() const noexcept { return states_.size(); }
    /// Largest atomic excitation count present, min(k, N).
    std::size_t max_atomic() const noexcept { return offsets_.size() - 2; }

    const SectorState& state(std::size_t index) const { return states_.at(index); }
    std::span<const SectorState> states() const noexcept { return states_; }

    /// First index of the block with `s` atomic excitations; block_end(s) is one past it.
    std::size_t block_begin(std::size_t s) const { return offsets_.at(s); }
    std::size_t block_end(std::size_t s) const { return offsets_.at(s + 1); }

    /// Position of `mask` in this sector (its photon count is implied).
    /// Throws std::invalid_argument when the mask has too many excitations.
    std::size_t index_of(AtomMask mask) const;
    std::size_t index_of(const SectorState& state) const;

    bool same_sector(const SectorBasis& other) const noexcept {
        return n_atoms_ == other.n_atoms_ && k_ == other.k_;
    }

private:
    std::size_t n_atoms_;
    std::size_t k_;
    std::vector<SectorState> states_;
    std::vector<std::size_t> offsets_;
    // binom_[n][r] for colex ranking of masks within a block
    std::vector<std::vector<std::size_t>> binom_;
};

std::shared_ptr<const SectorBasis> enumerate_sector(std::size_t n_atoms, std::size_t k);

/// Real amplitudes over a sector basis.
class StateVector {
public:
    explicit StateVector(std::shared_ptr<const SectorBasis> basis);
    StateVector(std::shared_ptr<const SectorBasis> basis, std::vector<double> amplitudes);

    const SectorBasis& basis() const noexcept { return *basis_; }
    const std::shared_ptr<const SectorBasis>& basis_ptr() const noexcept { return basis_; }
    std::size_t size() const noexcept { return amplitudes_.size(); }

    std::span<const double> amplitudes() const noexcept { return amplitudes_; }
    std::span<double> amplitudes() noexcept { return amplitudes_; }
    double operator[](std::size_t i) const { return amplitudes_[i]; }
    double& operator[](std::size_t i) { return amplitudes_[i]; }

    double norm() const noexcept;
    double dot(const StateVector& other) const;
    bool is_normalized(double tol = 1e-12) const noexcept;
    void normalize();

private:
    std::shared_ptr<const SectorBasis> basis_;
    std::vector<double> amplitudes_;
};

/// Collective state |s> with amplitudes proportional to the product of the
/// excited atoms' couplings, placed in `basis` with k - s photons.
StateVector collective_state(const CouplingProfile& profile, std::size_t s,
                             std::shared_ptr<const SectorBasis> basis);
/// Same, in the s-excitation sector with no photons.
StateVector collective_state(const CouplingProfile& profile, std::size_t s);

/// Hamiltonian restricted to the collective states |k - s>|s>, s = 0..min(k, N).
struct TruncatedTridiagonal {
    std::size_t k = 0;
    std::size_t n_atoms = 0;
    double diagonal_constant = 0.0;  // k - N/2
    std::vector<double> offdiag;     // t_1 .. t_{min(k,N)}

    std::size_t size() const noexcept { return offdiag.size() + 1; }
    Eigen::MatrixXd to_dense() const;
};

TruncatedTridiagonal build_row1_tridiagonal(const CouplingProfile& profile, std::size_t k);

/// Exact Hamiltonian on one excitation sector in CSR form. The free part is the
/// constant diagonal k - N/2; the stored entries are the interaction only.
class SparseSectorHamiltonian {
public:
    SparseSectorHamiltonian(std::shared_ptr<const SectorBasis> basis, double diagonal,
                            std::vector<std::size_t> row_ptr, std::vector<std::size_t> cols,
                            std::vector<double> values);

    const SectorBasis& basis() const noexcept { return *basis_; }
    const std::shared_ptr<const SectorBasis>& basis_ptr() const noexcept { return basis_; }
    std::size_t dimension() const noexcept { return basis_->dimension(); }
    double diagonal_constant() const noexcept { return diagonal_; }
    std::size_t nonzeros() const noexcept { return values_.size(); }

    std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
    std::span<const std::size_t> cols() const noexcept { return cols_; }
    std::span<const double> values() const noexcept { return values_; }

    /// out = H in; both of length dimension().
    void multiply(std::span<const double> in, std::span<double> out) const;
    double inf_norm() const;
    Eigen::MatrixXd to_dense() const;

private:
    std::shared_ptr<const SectorBasis> basis_;
    double diagonal_;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::size_t> cols_;
    std::vector<double> values_;
};

/// Throws ResourceLimitError when the sector is larger than `cap`.
SparseSectorHamiltonian build_full_sector_hamiltonian(const CouplingProfile& profile, std::size_t k,
                                                      std::size_t cap = kDefaultSectorCap);

StateVector apply_hamiltonian(const SparseSectorHamiltonian& h, const StateVector& v);

/// Perpendicular ("second row") states: for s = 1..min(k,N)-1 the part of
/// J_- |s+1> orthogonal to |s>, normalized, with k - s photons. States whose
/// residual norm falls below 1e-10 relative are dropped.
std::vector<StateVector> build_row2_states(const CouplingProfile& profile, std::size_t k,
                                           std::size_t sector_cap = kDefaultSectorCap);

/// Hamiltonian projected onto the collective states and their perpendicular
/// partners. The first `row1_count` basis vectors are the collective states in
/// order s = 0..min(k,N).
struct Row12Model {
    Eigen::MatrixXd matrix;
    std::vector<StateVector> basis_vectors;
    std::size_t row1_count = 0;
};

Row12Model build_row12_hamiltonian(const CouplingProfile& profile, std::size_t k,
                                   std::size_t atom_cap = kDefaultRow2AtomCap,
                                   std::size_t sector_cap = kDefaultSectorCap);

}  // namespace itc
