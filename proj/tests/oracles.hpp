#pragma once

// Test-only reference computations. Nothing here calls into the library's
// recurrences, sector enumeration or reductions.

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

/// e_p by direct enumeration of all p-subsets.
inline double brute_elem_sym(const std::vector<double>& v, std::size_t p) {
    const std::size_t n = v.size();
    if (p > n) return 0.0;
    double total = 0.0;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
        if (static_cast<std::size_t>(std::popcount(m)) != p) continue;
        double prod = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (m >> j & 1) prod *= v[j];
        }
        total += prod;
    }
    return total;
}

inline double power_sum(const std::vector<double>& v, int m) {
    double s = 0.0;
    for (double x : v) s += std::pow(x, m);
    return s;
}

inline double factorial(std::size_t n) {
    double f = 1.0;
    for (std::size_t q = 2; q <= n; ++q) f *= static_cast<double>(q);
    return f;
}

inline Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
            out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
        }
    }
    return out;
}

/// Full Tavis-Cummings Hamiltonian H = a^dag a + S_z + a J_+ + a^dag J_- on
/// photons 0..n_max (x) N qubits, assembled from Kronecker products.
/// Index = photons * 2^N + mask, bit j of mask = atom j excited.
inline Eigen::MatrixXd kron_hamiltonian(const std::vector<double>& kappa, int n_max) {
    const auto n_atoms = static_cast<int>(kappa.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    Eigen::MatrixXd sp(2, 2);  // |e><g| with g = 0, e = 1
    sp << 0, 0, 1, 0;
    Eigen::MatrixXd sz(2, 2);
    sz << -1, 0, 0, 1;
    const Eigen::MatrixXd id2 = Eigen::MatrixXd::Identity(2, 2);

    // qubit j is bit j, i.e. the rightmost Kronecker factor is atom 0
    auto on_atom = [&](const Eigen::MatrixXd& op, int j) {
        Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
        for (int q = n_atoms - 1; q >= 0; --q) out = kron(out, q == j ? op : id2);
        return out;
    };
    const auto dim_atoms = static_cast<Eigen::Index>(1) << n_atoms;
    Eigen::MatrixXd jp = Eigen::MatrixXd::Zero(dim_atoms, dim_atoms);
    Eigen::MatrixXd szt = Eigen::MatrixXd::Zero(dim_atoms, dim_atoms);
    for (int j = 0; j < n_atoms; ++j) {
        jp += kappa[static_cast<std::size_t>(j)] * on_atom(sp, j);
        szt += 0.5 * on_atom(sz, j);
    }
    const Eigen::MatrixXd id_f = Eigen::MatrixXd::Identity(n_max + 1, n_max + 1);
    const Eigen::MatrixXd id_a = Eigen::MatrixXd::Identity(dim_atoms, dim_atoms);
    Eigen::MatrixXd h = kron(a.transpose() * a, id_a) + kron(id_f, szt) + kron(a, jp) +
                        kron(a.transpose(), jp.transpose());
    return h;
}

/// X-state concurrence 2 max(0, |r12| - sqrt(r00 r33), |r03| - sqrt(r11 r22)).
inline double x_state_concurrence(const Eigen::Matrix4d& r) {
    const double c1 = std::abs(r(1, 2)) - std::sqrt(std::max(0.0, r(0, 0) * r(3, 3)));
    const double c2 = std::abs(r(0, 3)) - std::sqrt(std::max(0.0, r(1, 1) * r(2, 2)));
    return 2.0 * std::max({0.0, c1, c2});
}

/// Seeded random positive couplings in [lo, hi).
inline std::vector<double> random_kappas(std::size_t n, std::uint64_t seed, double lo = 0.2, double hi = 2.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> k(n);
    for (double& x : k) x = u(rng);
    return k;
}

}  // namespace oracle
