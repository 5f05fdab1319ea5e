#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "itc/coupling.hpp"
#include "itc/sector.hpp"

namespace itc {

/// Reduced state of atoms (i, j) in the basis (gg, ge, eg, ee), where the
/// first letter is atom i. Construction checks symmetry, unit trace and
/// positivity to 1e-10.
class TwoQubitDensity {
public:
    explicit TwoQubitDensity(const Eigen::Matrix4d& matrix);

    const Eigen::Matrix4d& matrix() const noexcept { return matrix_; }
    double operator()(int r, int c) const { return matrix_(r, c); }

private:
    Eigen::Matrix4d matrix_;
};

enum class ConcurrenceMethod { kAnalyticK1, kAnalyticK2, kAnalyticGeneral, kWoottersOracle };

std::string_view to_string(ConcurrenceMethod m);

struct ConcurrenceResult {
    double value = 0.0;      // clamped to [0, 1]
    double unclamped = 0.0;  // bare closed-form value before max(0, .)
    ConcurrenceMethod method = ConcurrenceMethod::kWoottersOracle;
    std::size_t i = 0;
    std::size_t j = 0;
    std::size_t k = 0;

    bool clamped() const noexcept { return unclamped < 0.0; }
};

/// Partial trace of a sector state over the field and all atoms but i and j.
TwoQubitDensity reduce_pair_from_sector_state(const StateVector& v, std::size_t i, std::size_t j);

/// Pair reduction of sum_s |A_s|^2 |s><s| built from exclusion symmetric
/// functions. `a_coeffs[s]` multiplies the collective state with s atomic
/// excitations; the list has min(k, N) + 1 entries.
TwoQubitDensity reduce_pair_from_row1_mixture(std::span<const double> a_coeffs,
                                              const CouplingProfile& profile, std::size_t i,
                                              std::size_t j);

/// Wootters concurrence max(0, l1 - l2 - l3 - l4). The l's are the square
/// roots of the eigenvalues of rho (Y x Y) rho* (Y x Y), obtained here as the
/// singular values of sqrt(rho) (Y x Y) sqrt(rho)*, which avoids taking square
/// roots of near-zero eigenvalues.
double wootters_concurrence(const TwoQubitDensity& rho);
double wootters_concurrence(const Eigen::Matrix4d& rho);

/// kappa_i kappa_j / sum kappa^2, the single-excitation ground state value.
ConcurrenceResult concurrence_analytic_k1(const CouplingProfile& profile, std::size_t i, std::size_t j);

/// Closed form for the two-excitation ground state (alpha, -1/sqrt2, beta).
/// The exclusion sums of the |2> component carry that state's 2! weight.
ConcurrenceResult concurrence_analytic_k2(const CouplingProfile& profile, std::size_t i, std::size_t j);

/// Same closed form with the exclusion sums left unweighted. Kept as an
/// audit diagnostic: it does not match the reduced state.
double concurrence_k2_unweighted(const CouplingProfile& profile, std::size_t i, std::size_t j);

/// How the exclusion sums M in the general formula are normalized.
///  kStateOrder: M inside the s-term carries (s!)^2, the order of the
///               collective state it came from. Matches the partial trace.
///  kOwnOrder:   M_p carries (p!)^2. Audit diagnostic only.
enum class ExclusionWeighting { kStateOrder, kOwnOrder };

/// General closed form for |Psi> = sum_s A_s |s>|k-s>.
ConcurrenceResult concurrence_analytic_general(const CouplingProfile& profile,
                                               std::span<const double> a_coeffs, std::size_t i,
                                               std::size_t j, std::size_t k,
                                               ExclusionWeighting weighting = ExclusionWeighting::kStateOrder);

/// Ground-state coefficients A_0..A_min(k,N) of the row-1 tridiagonal.
std::vector<double> row1_ground_coefficients(const CouplingProfile& profile, std::size_t k);

/// Side-by-side evaluation of every route for one pair and excitation number.
struct FormulaAudit {
    std::size_t i = 0;
    std::size_t j = 0;
    std::size_t k = 0;
    double oracle = 0.0;           // Wootters on the row-1 mixture reduction
    double general = 0.0;          // state-order weighting, clamped
    double general_own_order = 0;  // own-order weighting, unclamped
    double k2_weighted = 0.0;      // only meaningful for k == 2
    double k2_unweighted = 0.0;    // only meaningful for k == 2

    double general_error() const noexcept;
    double own_order_error() const noexcept;
};

FormulaAudit audit_formulas(const CouplingProfile& profile, std::size_t i, std::size_t j, std::size_t k);

}  // namespace itc
