#include "itc/symmetric_functions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "itc/error.hpp"

namespace itc {

SymTable::SymTable(std::vector<double> values, std::size_t max_order)
    : values_(std::move(values)), elems_(max_order + 1, 0.0) {
    elems_[0] = 1.0;
    for (double v : values_) {
        if (!(v >= 0.0)) throw std::invalid_argument("symmetric table values must be nonnegative");
    }
    // One pass per value; descending p so e_{p-1} is still the old value.
    std::size_t seen = 0;
    for (double v : values_) {
        ++seen;
        const std::size_t top = std::min(seen, max_order);
        for (std::size_t p = top; p >= 1; --p) elems_[p] += v * elems_[p - 1];
    }
}

double SymTable::e(long p) const {
    if (p < 0) return 0.0;
    const auto up = static_cast<std::size_t>(p);
    if (up >= elems_.size()) {
        if (up > values_.size()) return 0.0;
        throw std::invalid_argument("order " + std::to_string(p) + " beyond table maximum");
    }
    return elems_[up];
}

SymTable elem_sym_table(std::vector<double> values, std::size_t max_order) {
    return SymTable(std::move(values), max_order);
}

SymTable coupling_table(const CouplingProfile& profile, std::size_t max_order) {
    std::vector<double> sq;
    sq.reserve(profile.n_atoms());
    for (double k : profile.kappas()) sq.push_back(k * k);
    return SymTable(std::move(sq), max_order);
}

double norm_N(const SymTable& table, std::size_t p) {
    if (p > table.max_order()) throw std::invalid_argument("norm order out of range");
    double f = 1.0;
    for (std::size_t q = 2; q <= p; ++q) f *= static_cast<double>(q);
    return f * std::sqrt(table.elems()[p]);
}

double norm_ratio(const SymTable& table, std::size_t p) {
    if (p == 0 || p > table.max_order()) throw std::invalid_argument("norm ratio order out of range");
    const double prev = table.elems()[p - 1];
    if (prev == 0.0) {
        throw DegenerateSubspaceError("no collective state with " + std::to_string(p - 1) +
                                      " excitations over " + std::to_string(table.values().size()) +
                                      " atoms");
    }
    return static_cast<double>(p) * std::sqrt(table.elems()[p] / prev);
}

SymTable excl_table(const CouplingProfile& profile, std::size_t i, std::size_t j,
                    std::size_t max_order) {
    const std::size_t n = profile.n_atoms();
    if (i >= n || j >= n) throw std::invalid_argument("atom index out of range");
    if (i == j) throw std::invalid_argument("exclusion pair must name two distinct atoms");
    std::vector<double> sq;
    sq.reserve(n - 2);
    for (std::size_t m = 0; m < n; ++m) {
        if (m == i || m == j) continue;
        sq.push_back(profile.kappa(m) * profile.kappa(m));
    }
    return SymTable(std::move(sq), max_order);
}

double m_quantity(const SymTable& excl, std::size_t p) { return norm_N(excl, p); }

}  // namespace itc
