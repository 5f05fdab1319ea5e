#include "itc/sector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "itc/error.hpp"
#include "itc/symmetric_functions.hpp"

namespace itc {
namespace {

constexpr std::size_t kSaturated = std::numeric_limits<std::size_t>::max();

std::size_t saturating_add(std::size_t a, std::size_t b) {
    return (a > kSaturated - b) ? kSaturated : a + b;
}

// Pascal table binom[n][r] for r <= r_max, saturating.
std::vector<std::vector<std::size_t>> pascal(std::size_t n_max, std::size_t r_max) {
    std::vector<std::vector<std::size_t>> c(n_max + 1, std::vector<std::size_t>(r_max + 1, 0));
    for (std::size_t n = 0; n <= n_max; ++n) {
        c[n][0] = 1;
        for (std::size_t r = 1; r <= std::min(n, r_max); ++r) {
            c[n][r] = saturating_add(c[n - 1][r - 1], r <= n - 1 ? c[n - 1][r] : 0);
        }
    }
    return c;
}

// Next integer with the same popcount (Gosper).
AtomMask next_same_popcount(AtomMask x) {
    const AtomMask c = x & (~x + 1);
    const AtomMask r = x + c;
    return (((r ^ x) >> 2) / c) | r;
}

void check_atoms(std::size_t n_atoms) {
    if (n_atoms == 0) throw std::invalid_argument("sector needs at least one atom");
    if (n_atoms > kMaxAtoms) {
        throw std::invalid_argument("at most " + std::to_string(kMaxAtoms) + " atoms supported");
    }
}

void check_cap(std::size_t n_atoms, std::size_t k, std::size_t cap) {
    const std::size_t dim = sector_dimension(n_atoms, k);
    if (dim > cap) {
        throw ResourceLimitError("sector N=" + std::to_string(n_atoms) + ", k=" + std::to_string(k) +
                                 " has dimension " + std::to_string(dim) + " above cap " +
                                 std::to_string(cap));
    }
}

double product_of_couplings(const CouplingProfile& profile, AtomMask mask) {
    double p = 1.0;
    while (mask != 0) {
        const int j = std::countr_zero(mask);
        p *= profile.kappa(static_cast<std::size_t>(j));
        mask &= mask - 1;
    }
    return p;
}

}  // namespace

std::size_t sector_dimension(std::size_t n_atoms, std::size_t k) {
    const std::size_t top = std::min(k, n_atoms);
    const auto c = pascal(n_atoms, top);
    std::size_t dim = 0;
    for (std::size_t s = 0; s <= top; ++s) dim = saturating_add(dim, c[n_atoms][s]);
    return dim;
}

SectorBasis::SectorBasis(std::size_t n_atoms, std::size_t k) : n_atoms_(n_atoms), k_(k) {
    check_atoms(n_atoms);
    const std::size_t top = std::min(k, n_atoms);
    binom_ = pascal(n_atoms, top);
    offsets_.push_back(0);
    for (std::size_t s = 0; s <= top; ++s) {
        offsets_.push_back(saturating_add(offsets_.back(), binom_[n_atoms][s]));
    }
    if (offsets_.back() == kSaturated) throw ResourceLimitError("sector dimension overflows");
    states_.reserve(offsets_.back());

    for (std::size_t s = 0; s <= top; ++s) {
        if (s == 0) {
            states_.push_back({k, 0});
            continue;
        }
        AtomMask m = (AtomMask{1} << s) - 1;
        for (std::size_t r = 0; r < binom_[n_atoms][s]; ++r) {
            states_.push_back({k - s, m});
            if (r + 1 < binom_[n_atoms][s]) m = next_same_popcount(m);
        }
    }
}

std::size_t SectorBasis::index_of(AtomMask mask) const {
    const auto s = static_cast<std::size_t>(std::popcount(mask));
    if (s > max_atomic() || (mask >> n_atoms_) != 0) {
        throw std::invalid_argument("atomic configuration outside this sector");
    }
    // colex rank: sum over set bits (ascending position c_t, t = 1..s) of C(c_t, t)
    std::size_t rank = 0;
    std::size_t t = 1;
    while (mask != 0) {
        const auto c = static_cast<std::size_t>(std::countr_zero(mask));
        if (t <= c) rank += binom_[c][t];
        ++t;
        mask &= mask - 1;
    }
    return offsets_[s] + rank;
}

std::size_t SectorBasis::index_of(const SectorState& state) const {
    if (state.photons + static_cast<std::size_t>(std::popcount(state.mask)) != k_) {
        throw std::invalid_argument("state does not carry this sector's excitation number");
    }
    return index_of(state.mask);
}

std::shared_ptr<const SectorBasis> enumerate_sector(std::size_t n_atoms, std::size_t k) {
    return std::make_shared<const SectorBasis>(n_atoms, k);
}

StateVector::StateVector(std::shared_ptr<const SectorBasis> basis)
    : basis_(std::move(basis)), amplitudes_(basis_->dimension(), 0.0) {}

StateVector::StateVector(std::shared_ptr<const SectorBasis> basis, std::vector<double> amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != basis_->dimension()) {
        throw std::invalid_argument("amplitude count does not match basis dimension");
    }
}

double StateVector::norm() const noexcept {
    double s = 0.0;
    for (double a : amplitudes_) s += a * a;
    return std::sqrt(s);
}

double StateVector::dot(const StateVector& other) const {
    if (!basis_->same_sector(other.basis())) throw std::invalid_argument("state vectors live in different sectors");
    double s = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) s += amplitudes_[i] * other.amplitudes_[i];
    return s;
}

bool StateVector::is_normalized(double tol) const noexcept {
    const double n = norm();
    return std::abs(n * n - 1.0) <= tol;
}

void StateVector::normalize() {
    const double n = norm();
    if (n == 0.0) throw std::invalid_argument("cannot normalize the zero vector");
    for (double& a : amplitudes_) a /= n;
}

StateVector collective_state(const CouplingProfile& profile, std::size_t s,
                             std::shared_ptr<const SectorBasis> basis) {
    if (basis->n_atoms() != profile.n_atoms()) throw std::invalid_argument("basis and profile disagree on N");
    if (s > profile.n_atoms()) {
        throw std::invalid_argument("collective state with " + std::to_string(s) +
                                    " excitations exceeds the atom count");
    }
    if (s > basis->max_atomic()) throw std::invalid_argument("collective state does not fit this sector");
    StateVector v(std::move(basis));
    const auto& b = v.basis();
    for (std::size_t idx = b.block_begin(s); idx < b.block_end(s); ++idx) {
        v[idx] = product_of_couplings(profile, b.state(idx).mask);
    }
    v.normalize();
    return v;
}

StateVector collective_state(const CouplingProfile& profile, std::size_t s) {
    if (s > profile.n_atoms()) {
        throw std::invalid_argument("collective state with " + std::to_string(s) +
                                    " excitations exceeds the atom count");
    }
    return collective_state(profile, s, enumerate_sector(profile.n_atoms(), s));
}

Eigen::MatrixXd TruncatedTridiagonal::to_dense() const {
    const auto n = static_cast<Eigen::Index>(size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) * diagonal_constant;
    for (Eigen::Index s = 1; s < n; ++s) {
        m(s, s - 1) = offdiag[static_cast<std::size_t>(s - 1)];
        m(s - 1, s) = offdiag[static_cast<std::size_t>(s - 1)];
    }
    return m;
}

TruncatedTridiagonal build_row1_tridiagonal(const CouplingProfile& profile, std::size_t k) {
    const std::size_t n = profile.n_atoms();
    const std::size_t top = std::min(k, n);
    const SymTable table = coupling_table(profile, top);
    TruncatedTridiagonal t;
    t.k = k;
    t.n_atoms = n;
    t.diagonal_constant = static_cast<double>(k) - 0.5 * static_cast<double>(n);
    t.offdiag.reserve(top);
    // <k-s|<s| a J_+ |k-s+1>|s-1> = sqrt(k-s+1) N_s / N_{s-1}
    for (std::size_t s = 1; s <= top; ++s) {
        t.offdiag.push_back(std::sqrt(static_cast<double>(k - s + 1)) * norm_ratio(table, s));
    }
    return t;
}

SparseSectorHamiltonian::SparseSectorHamiltonian(std::shared_ptr<const SectorBasis> basis,
                                                 double diagonal, std::vector<std::size_t> row_ptr,
                                                 std::vector<std::size_t> cols,
                                                 std::vector<double> values)
    : basis_(std::move(basis)),
      diagonal_(diagonal),
      row_ptr_(std::move(row_ptr)),
      cols_(std::move(cols)),
      values_(std::move(values)) {
    if (row_ptr_.size() != basis_->dimension() + 1 || cols_.size() != values_.size() ||
        row_ptr_.back() != values_.size()) {
        throw std::invalid_argument("inconsistent CSR arrays");
    }
}

void SparseSectorHamiltonian::multiply(std::span<const double> in, std::span<double> out) const {
    const std::size_t dim = dimension();
    if (in.size() != dim || out.size() != dim) throw std::invalid_argument("vector length mismatch");
    for (std::size_t r = 0; r < dim; ++r) {
        double acc = diagonal_ * in[r];
        for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) acc += values_[p] * in[cols_[p]];
        out[r] = acc;
    }
}

double SparseSectorHamiltonian::inf_norm() const {
    double best = 0.0;
    for (std::size_t r = 0; r < dimension(); ++r) {
        double row = std::abs(diagonal_);
        for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) row += std::abs(values_[p]);
        best = std::max(best, row);
    }
    return best;
}

Eigen::MatrixXd SparseSectorHamiltonian::to_dense() const {
    const auto dim = static_cast<Eigen::Index>(dimension());
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(dim, dim) * diagonal_;
    for (std::size_t r = 0; r < dimension(); ++r) {
        for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cols_[p])) += values_[p];
        }
    }
    return m;
}

SparseSectorHamiltonian build_full_sector_hamiltonian(const CouplingProfile& profile, std::size_t k,
                                                      std::size_t cap) {
    const std::size_t n = profile.n_atoms();
    check_atoms(n);
    check_cap(n, k, cap);
    auto basis = enumerate_sector(n, k);
    const std::size_t dim = basis->dimension();

    std::vector<std::size_t> row_ptr;
    std::vector<std::size_t> cols;
    std::vector<double> values;
    row_ptr.reserve(dim + 1);
    cols.reserve(dim * n);
    values.reserve(dim * n);
    row_ptr.push_back(0);
    for (std::size_t r = 0; r < dim; ++r) {
        const SectorState st = basis->state(r);
        for (std::size_t i = 0; i < n; ++i) {
            const AtomMask bit = AtomMask{1} << i;
            if ((st.mask & bit) == 0) {
                // a sigma_+^i: |n, A> -> sqrt(n) |n-1, A + i>
                if (st.photons == 0) continue;
                cols.push_back(basis->index_of(st.mask | bit));
                values.push_back(std::sqrt(static_cast<double>(st.photons)) * profile.kappa(i));
            } else {
                // a^dag sigma_-^i: |n, A> -> sqrt(n+1) |n+1, A - i>
                cols.push_back(basis->index_of(st.mask & ~bit));
                values.push_back(std::sqrt(static_cast<double>(st.photons + 1)) * profile.kappa(i));
            }
        }
        row_ptr.push_back(values.size());
    }
    const double diag = static_cast<double>(k) - 0.5 * static_cast<double>(n);
    return SparseSectorHamiltonian(std::move(basis), diag, std::move(row_ptr), std::move(cols),
                                   std::move(values));
}

StateVector apply_hamiltonian(const SparseSectorHamiltonian& h, const StateVector& v) {
    if (!h.basis().same_sector(v.basis())) {
        throw std::invalid_argument("state and Hamiltonian belong to different sectors");
    }
    StateVector out(h.basis_ptr());
    h.multiply(v.amplitudes(), out.amplitudes());
    return out;
}

std::vector<StateVector> build_row2_states(const CouplingProfile& profile, std::size_t k,
                                           std::size_t sector_cap) {
    const std::size_t n = profile.n_atoms();
    const std::size_t top = std::min(k, n);
    std::vector<StateVector> out;
    if (top < 2) return out;
    check_cap(n, k, sector_cap);
    auto basis = enumerate_sector(n, k);

    for (std::size_t s = 1; s + 1 <= top; ++s) {
        const StateVector upper = collective_state(profile, s + 1, basis);
        const StateVector lower = collective_state(profile, s, basis);

        // Phi_s = J_- |s+1>, landing in the s-excitation block
        StateVector phi(basis);
        for (std::size_t idx = basis->block_begin(s + 1); idx < basis->block_end(s + 1); ++idx) {
            const double c = upper[idx];
            AtomMask m = basis->state(idx).mask;
            for (AtomMask rest = m; rest != 0; rest &= rest - 1) {
                const int i = std::countr_zero(rest);
                const AtomMask bit = AtomMask{1} << i;
                phi[basis->index_of(m & ~bit)] += profile.kappa(static_cast<std::size_t>(i)) * c;
            }
        }
        const double phi_norm = phi.norm();
        const double overlap = lower.dot(phi);
        for (std::size_t idx = basis->block_begin(s); idx < basis->block_end(s); ++idx) {
            phi[idx] -= overlap * lower[idx];
        }
        // second pass keeps orthogonality at roundoff level
        const double again = lower.dot(phi);
        for (std::size_t idx = basis->block_begin(s); idx < basis->block_end(s); ++idx) {
            phi[idx] -= again * lower[idx];
        }
        if (phi.norm() < 1e-10 * phi_norm) continue;
        phi.normalize();
        out.push_back(std::move(phi));
    }
    return out;
}

Row12Model build_row12_hamiltonian(const CouplingProfile& profile, std::size_t k,
                                   std::size_t atom_cap, std::size_t sector_cap) {
    const std::size_t n = profile.n_atoms();
    if (n > atom_cap) {
        throw ResourceLimitError("second-row construction limited to " + std::to_string(atom_cap) +
                                 " atoms, got " + std::to_string(n));
    }
    const SparseSectorHamiltonian h = build_full_sector_hamiltonian(profile, k, sector_cap);
    const std::size_t top = std::min(k, n);

    Row12Model model;
    for (std::size_t s = 0; s <= top; ++s) {
        model.basis_vectors.push_back(collective_state(profile, s, h.basis_ptr()));
    }
    model.row1_count = model.basis_vectors.size();
    for (auto& v : build_row2_states(profile, k, sector_cap)) model.basis_vectors.push_back(std::move(v));

    const auto m = static_cast<Eigen::Index>(model.basis_vectors.size());
    model.matrix = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index b = 0; b < m; ++b) {
        const StateVector hv = apply_hamiltonian(h, model.basis_vectors[static_cast<std::size_t>(b)]);
        for (Eigen::Index a = 0; a < m; ++a) {
            model.matrix(a, b) = model.basis_vectors[static_cast<std::size_t>(a)].dot(hv);
        }
    }
    // exact symmetry for the dense solver
    model.matrix = 0.5 * (model.matrix + model.matrix.transpose()).eval();
    return model;
}

}  // namespace itc
