#include "itc/entanglement.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "itc/eigensolver.hpp"
#include "itc/symmetric_functions.hpp"

namespace itc {
namespace {

constexpr double kDensityTol = 1e-10;
// Eigenvalues of rho below this are treated as exact zeros before the square root.
constexpr double kNullEigenvalue = 1e-14;

void check_pair(const CouplingProfile& profile, std::size_t i, std::size_t j) {
    if (i >= profile.n_atoms() || j >= profile.n_atoms()) throw std::invalid_argument("atom index out of range");
    if (i == j) throw std::invalid_argument("concurrence needs two distinct atoms");
}

double sum_squares(std::span<const double> a) {
    double s = 0.0;
    for (double x : a) s += x * x;
    return s;
}

void check_coefficients(std::span<const double> a, const CouplingProfile& profile) {
    if (a.empty()) throw std::invalid_argument("empty coefficient list");
    if (a.size() > profile.n_atoms() + 1) {
        throw std::invalid_argument("more collective states than atoms allow");
    }
    if (std::abs(sum_squares(a) - 1.0) > 1e-10) {
        throw std::invalid_argument("collective-state coefficients are not normalized");
    }
}

// Weighted sums over the collective-state mixture. With w_s = A_s^2 / e_s,
//   ee  = k_i^2 k_j^2 sum w_s ex_{s-2}
//   ge  = k_j^2       sum w_s ex_{s-1}   (eg has k_i^2, coherence k_i k_j)
//   gg  =             sum w_s ex_s
struct MixtureSums {
    double lower2 = 0.0;  // sum w_s ex_{s-2}
    double lower1 = 0.0;  // sum w_s ex_{s-1}
    double same = 0.0;    // sum w_s ex_s
};

MixtureSums mixture_sums(std::span<const double> a, const CouplingProfile& profile, std::size_t i,
                         std::size_t j, ExclusionWeighting weighting) {
    const std::size_t top = a.size() - 1;
    const SymTable full = coupling_table(profile, top);
    const SymTable ex = excl_table(profile, i, j, top);
    MixtureSums m;
    for (std::size_t s = 0; s <= top; ++s) {
        const double w = a[s] * a[s] / full.e(static_cast<long>(s));
        const auto ls = static_cast<long>(s);
        double f1 = 1.0;
        double f2 = 1.0;
        if (weighting == ExclusionWeighting::kOwnOrder) {
            // ((s-1)!/s!)^2 and ((s-2)!/s!)^2
            const auto ds = static_cast<double>(s);
            f1 = s >= 1 ? 1.0 / (ds * ds) : 0.0;
            f2 = s >= 2 ? 1.0 / (ds * ds * (ds - 1.0) * (ds - 1.0)) : 0.0;
        }
        m.lower2 += w * f2 * ex.e(ls - 2);
        m.lower1 += w * f1 * ex.e(ls - 1);
        m.same += w * ex.e(ls);
    }
    return m;
}

// Relabel (i, j) -> (j, i): exchange the ge and eg rows and columns.
Eigen::Matrix4d swap_qubits(const Eigen::Matrix4d& m) {
    constexpr int perm[4] = {0, 2, 1, 3};
    Eigen::Matrix4d out;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) out(r, c) = m(perm[r], perm[c]);
    }
    return out;
}

}  // namespace

TwoQubitDensity::TwoQubitDensity(const Eigen::Matrix4d& matrix) : matrix_(matrix) {
    if ((matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff() > kDensityTol) {
        throw std::invalid_argument("two-qubit density matrix is not symmetric");
    }
    if (std::abs(matrix_.trace() - 1.0) > kDensityTol) {
        throw std::invalid_argument("two-qubit density matrix trace is " + std::to_string(matrix_.trace()));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(matrix_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -kDensityTol) {
        throw std::invalid_argument("two-qubit density matrix is not positive semidefinite");
    }
}

std::string_view to_string(ConcurrenceMethod m) {
    switch (m) {
        case ConcurrenceMethod::kAnalyticK1: return "analytic_k1";
        case ConcurrenceMethod::kAnalyticK2: return "analytic_k2";
        case ConcurrenceMethod::kAnalyticGeneral: return "analytic_general";
        case ConcurrenceMethod::kWoottersOracle: return "wootters_oracle";
    }
    return "unknown";
}

TwoQubitDensity reduce_pair_from_sector_state(const StateVector& v, std::size_t i, std::size_t j) {
    const SectorBasis& basis = v.basis();
    if (i >= basis.n_atoms() || j >= basis.n_atoms()) throw std::invalid_argument("atom index out of range");
    if (i == j) throw std::invalid_argument("pair reduction needs two distinct atoms");
    if (!v.is_normalized(1e-10)) throw std::invalid_argument("state vector is not normalized");

    const AtomMask bi = AtomMask{1} << i;
    const AtomMask bj = AtomMask{1} << j;
    const std::size_t top = basis.max_atomic();
    Eigen::Matrix4d rho = Eigen::Matrix4d::Zero();

    // Each ket with atoms i, j in the ground state fixes a "rest" configuration.
    // Partners with a different excitation count on (i, j) carry a different
    // photon number, so only the ge/eg block stays coherent.
    for (std::size_t idx = 0; idx < basis.dimension(); ++idx) {
        const AtomMask rest = basis.state(idx).mask;
        if ((rest & (bi | bj)) != 0) continue;
        const auto r = static_cast<std::size_t>(std::popcount(rest));
        Eigen::Vector4d amp;
        amp(0) = v[idx];
        amp(1) = r + 1 <= top ? v[basis.index_of(rest | bj)] : 0.0;
        amp(2) = r + 1 <= top ? v[basis.index_of(rest | bi)] : 0.0;
        amp(3) = r + 2 <= top ? v[basis.index_of(rest | bi | bj)] : 0.0;
        rho(0, 0) += amp(0) * amp(0);
        rho(1, 1) += amp(1) * amp(1);
        rho(2, 2) += amp(2) * amp(2);
        rho(1, 2) += amp(1) * amp(2);
        rho(3, 3) += amp(3) * amp(3);
    }
    rho(2, 1) = rho(1, 2);
    return TwoQubitDensity(rho);
}

TwoQubitDensity reduce_pair_from_row1_mixture(std::span<const double> a_coeffs,
                                              const CouplingProfile& profile, std::size_t i,
                                              std::size_t j) {
    check_pair(profile, i, j);
    check_coefficients(a_coeffs, profile);
    const MixtureSums m = mixture_sums(a_coeffs, profile, i, j, ExclusionWeighting::kStateOrder);
    const double ki = profile.kappa(i);
    const double kj = profile.kappa(j);

    Eigen::Matrix4d rho = Eigen::Matrix4d::Zero();
    rho(0, 0) = m.same;
    rho(1, 1) = kj * kj * m.lower1;
    rho(2, 2) = ki * ki * m.lower1;
    rho(1, 2) = rho(2, 1) = ki * kj * m.lower1;
    rho(3, 3) = (ki * ki) * (kj * kj) * m.lower2;
    return TwoQubitDensity(rho);
}

double wootters_concurrence(const TwoQubitDensity& rho) {
    // Evaluate on a swap-canonical representative so that exchanging the two
    // atoms gives a bit-identical result.
    Eigen::Matrix4d m = rho.matrix();
    const Eigen::Matrix4d swapped = swap_qubits(m);
    if (std::lexicographical_compare(swapped.data(), swapped.data() + 16, m.data(), m.data() + 16)) {
        m = swapped;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(m);
    Eigen::Vector4d root = es.eigenvalues();
    for (int c = 0; c < 4; ++c) root(c) = root(c) <= kNullEigenvalue ? 0.0 : std::sqrt(root(c));
    const Eigen::Matrix4d sqrt_rho = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();

    // sigma_y (x) sigma_y is real: anti-diagonal (-1, 1, 1, -1)
    Eigen::Matrix4d flip = Eigen::Matrix4d::Zero();
    flip(0, 3) = -1.0;
    flip(1, 2) = 1.0;
    flip(2, 1) = 1.0;
    flip(3, 0) = -1.0;

    // real rho: rho* == rho
    const Eigen::Matrix4d s = sqrt_rho * flip * sqrt_rho;
    Eigen::JacobiSVD<Eigen::Matrix4d> svd(s);
    const Eigen::Vector4d lam = svd.singularValues();  // decreasing
    const double c = lam(0) - lam(1) - lam(2) - lam(3);
    return std::clamp(c, 0.0, 1.0);
}

double wootters_concurrence(const Eigen::Matrix4d& rho) { return wootters_concurrence(TwoQubitDensity(rho)); }

ConcurrenceResult concurrence_analytic_k1(const CouplingProfile& profile, std::size_t i, std::size_t j) {
    check_pair(profile, i, j);
    const double c = std::abs(profile.kappa(i) * profile.kappa(j)) / profile.sum_squares();
    return {c, c, ConcurrenceMethod::kAnalyticK1, i, j, 1};
}

namespace {

struct K2Terms {
    double n1_sq, n2_sq, alpha, beta, m1_sq, m2_sq, pair;
};

K2Terms k2_terms(const CouplingProfile& profile, std::size_t i, std::size_t j) {
    check_pair(profile, i, j);
    const SymTable full = coupling_table(profile, 2);
    const SymTable ex = excl_table(profile, i, j, 2);
    K2Terms t{};
    t.n1_sq = full.e(1);
    t.n2_sq = 4.0 * full.e(2);
    const double d = std::sqrt(4.0 * t.n1_sq * t.n1_sq + 2.0 * t.n2_sq);
    t.alpha = std::sqrt(2.0) * t.n1_sq / d;
    t.beta = std::sqrt(t.n2_sq) / d;
    t.m1_sq = ex.e(1);
    t.m2_sq = ex.e(2);
    t.pair = 2.0 * std::abs(profile.kappa(i) * profile.kappa(j));
    return t;
}

}  // namespace

ConcurrenceResult concurrence_analytic_k2(const CouplingProfile& profile, std::size_t i, std::size_t j) {
    const K2Terms t = k2_terms(profile, i, j);
    // the |2> component weights its exclusion sums by (2!)^2
    const double w = 4.0 * t.beta * t.beta / t.n2_sq;
    const double inner = t.alpha * t.alpha + t.m1_sq / (2.0 * t.n1_sq) + w * t.m2_sq;
    const double raw = t.pair * (1.0 / (2.0 * t.n1_sq) + w * t.m1_sq -
                                 2.0 * t.beta / std::sqrt(t.n2_sq) * std::sqrt(inner));
    return {std::clamp(raw, 0.0, 1.0), raw, ConcurrenceMethod::kAnalyticK2, i, j, 2};
}

double concurrence_k2_unweighted(const CouplingProfile& profile, std::size_t i, std::size_t j) {
    const K2Terms t = k2_terms(profile, i, j);
    const double w = t.beta * t.beta / t.n2_sq;
    const double inner = t.alpha * t.alpha + t.m1_sq / (2.0 * t.n1_sq) + w * t.m2_sq;
    return t.pair * (1.0 / (2.0 * t.n1_sq) + w * t.m1_sq - t.beta / std::sqrt(t.n2_sq) * std::sqrt(inner));
}

ConcurrenceResult concurrence_analytic_general(const CouplingProfile& profile,
                                               std::span<const double> a_coeffs, std::size_t i,
                                               std::size_t j, std::size_t k,
                                               ExclusionWeighting weighting) {
    check_pair(profile, i, j);
    check_coefficients(a_coeffs, profile);
    if (a_coeffs.size() != std::min(k, profile.n_atoms()) + 1) {
        throw std::invalid_argument("coefficient count must be min(k, N) + 1");
    }
    const MixtureSums m = mixture_sums(a_coeffs, profile, i, j, weighting);
    const double raw = 2.0 * std::abs(profile.kappa(i) * profile.kappa(j)) *
                       (m.lower1 - std::sqrt(m.lower2 * m.same));
    return {std::clamp(raw, 0.0, 1.0), raw, ConcurrenceMethod::kAnalyticGeneral, i, j, k};
}

std::vector<double> row1_ground_coefficients(const CouplingProfile& profile, std::size_t k) {
    return row1_ground(profile, k).vector;
}

double FormulaAudit::general_error() const noexcept { return std::abs(general - oracle); }
double FormulaAudit::own_order_error() const noexcept { return std::abs(general_own_order - oracle); }

FormulaAudit audit_formulas(const CouplingProfile& profile, std::size_t i, std::size_t j, std::size_t k) {
    const auto a = row1_ground_coefficients(profile, k);
    FormulaAudit out;
    out.i = i;
    out.j = j;
    out.k = k;
    out.oracle = wootters_concurrence(reduce_pair_from_row1_mixture(a, profile, i, j));
    out.general = concurrence_analytic_general(profile, a, i, j, k).value;
    out.general_own_order =
        concurrence_analytic_general(profile, a, i, j, k, ExclusionWeighting::kOwnOrder).unclamped;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.k2_weighted = k == 2 ? concurrence_analytic_k2(profile, i, j).value : nan;
    out.k2_unweighted = k == 2 ? concurrence_k2_unweighted(profile, i, j) : nan;
    return out;
}

}  // namespace itc
