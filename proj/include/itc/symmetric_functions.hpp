#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "itc/coupling.hpp"

namespace itc {

/// Elementary symmetric polynomials e_0..e_{max_order} of a list of
/// nonnegative values. For the couplings these are taken over kappa_j^2, so
/// that N_p^2 = (p!)^2 e_p and M_p^2 = (p!)^2 e_p(pair removed).
class SymTable {
public:
    SymTable(std::vector<double> values, std::size_t max_order);

    std::size_t max_order() const noexcept { return elems_.size() - 1; }
    std::span<const double> values() const noexcept { return values_; }
    std::span<const double> elems() const noexcept { return elems_; }

    /// e_p; zero for p past the number of values, and for negative p.
    double e(long p) const;

private:
    std::vector<double> values_;
    std::vector<double> elems_;
};

SymTable elem_sym_table(std::vector<double> values, std::size_t max_order);

/// Table over kappa_j^2 for all atoms.
SymTable coupling_table(const CouplingProfile& profile, std::size_t max_order);

/// N_p = p! sqrt(e_p). Overflows to inf for large p; prefer norm_ratio.
double norm_N(const SymTable& table, std::size_t p);

/// N_p / N_{p-1} = p sqrt(e_p / e_{p-1}).
/// Throws DegenerateSubspaceError when e_{p-1} == 0.
double norm_ratio(const SymTable& table, std::size_t p);

/// Table over kappa_m^2 with atoms i and j removed.
SymTable excl_table(const CouplingProfile& profile, std::size_t i, std::size_t j,
                    std::size_t max_order);

/// M_p = p! sqrt(e_p) over an exclusion table.
double m_quantity(const SymTable& excl, std::size_t p);

}  // namespace itc
