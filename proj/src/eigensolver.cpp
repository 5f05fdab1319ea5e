#include "itc/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "itc/error.hpp"

namespace itc {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxQlSweeps = 100;
constexpr std::size_t kKrylovDim = 64;
constexpr int kMaxRestarts = 400;
constexpr double kResidualTol = 1e-10;

std::vector<EigenPair> sorted_pairs(const std::vector<double>& values,
                                    const std::vector<std::vector<double>>& vectors) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<EigenPair> out;
    out.reserve(values.size());
    for (std::size_t i : order) {
        EigenPair p{values[i], vectors[i]};
        fix_sign(p.vector);
        out.push_back(std::move(p));
    }
    return out;
}

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

SectorEigenPair dense_ground(const SparseSectorHamiltonian& h) {
    const Eigen::MatrixXd m = h.to_dense();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success) throw NumericFailure("dense eigensolver failed", 0.0);
    const Eigen::VectorXd& w = solver.eigenvalues();
    const double lowest = w(0);

    // Among numerically degenerate ground vectors take the lexicographically
    // largest after sign fixing.
    std::vector<double> best;
    for (Eigen::Index c = 0; c < w.size() && w(c) - lowest < 1e-10; ++c) {
        std::vector<double> v(solver.eigenvectors().col(c).data(),
                              solver.eigenvectors().col(c).data() + m.rows());
        fix_sign(v);
        if (best.empty() || std::lexicographical_compare(best.begin(), best.end(), v.begin(), v.end())) {
            best = std::move(v);
        }
    }
    SectorEigenPair out{lowest, StateVector(h.basis_ptr(), std::move(best)), 0.0};
    const StateVector hv = apply_hamiltonian(h, out.vector);
    double r = 0.0;
    for (std::size_t i = 0; i < hv.size(); ++i) {
        const double d = hv[i] - lowest * out.vector[i];
        r += d * d;
    }
    out.residual = std::sqrt(r);
    return out;
}

// Explicitly restarted Lanczos with full reorthogonalization; each cycle
// restarts from the current lowest Ritz vector.
SectorEigenPair lanczos_ground(const SparseSectorHamiltonian& h) {
    const std::size_t dim = h.dimension();
    const std::size_t m_max = std::min(dim, kKrylovDim);
    const double tol = kResidualTol * std::max(1.0, h.inf_norm());

    std::vector<double> start(dim);
    std::mt19937_64 rng(0x5eedULL);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (double& x : start) x = uni(rng);

    std::vector<std::vector<double>> basis;
    std::vector<double> w(dim);
    double residual = std::numeric_limits<double>::infinity();
    double theta = 0.0;
    std::vector<double> ritz(dim);

    for (int restart = 0; restart < kMaxRestarts; ++restart) {
        basis.clear();
        const double n0 = norm2(start);
        for (double& x : start) x /= n0;
        basis.push_back(start);
        std::vector<double> alpha;
        std::vector<double> beta;

        for (std::size_t j = 0; j < m_max; ++j) {
            h.multiply(basis[j], w);
            alpha.push_back(dot(basis[j], w));
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto& q : basis) {
                    const double c = dot(q, w);
                    for (std::size_t i = 0; i < dim; ++i) w[i] -= c * q[i];
                }
            }
            if (j + 1 == m_max) break;
            const double b = norm2(w);
            if (b <= 1e3 * kEps * std::max(1.0, std::abs(alpha.back()))) break;
            beta.push_back(b);
            std::vector<double> next(dim);
            for (std::size_t i = 0; i < dim; ++i) next[i] = w[i] / b;
            basis.push_back(std::move(next));
        }

        const auto pairs = eig_sym_tridiagonal(alpha, beta);
        theta = pairs.front().value;
        const auto& y = pairs.front().vector;
        std::fill(ritz.begin(), ritz.end(), 0.0);
        for (std::size_t c = 0; c < basis.size(); ++c) {
            for (std::size_t i = 0; i < dim; ++i) ritz[i] += y[c] * basis[c][i];
        }
        const double rn = norm2(ritz);
        for (double& x : ritz) x /= rn;

        h.multiply(ritz, w);
        double r = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double d = w[i] - theta * ritz[i];
            r += d * d;
        }
        residual = std::sqrt(r);
        if (residual <= tol) {
            fix_sign(ritz);
            return SectorEigenPair{theta, StateVector(h.basis_ptr(), ritz), residual};
        }
        start = ritz;
    }
    throw NumericFailure("Lanczos ground state did not converge (residual " + std::to_string(residual) +
                             ", tolerance " + std::to_string(tol) + ")",
                         residual);
}

}  // namespace

void fix_sign(std::span<double> v) {
    double scale = 0.0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    const double floor = 1e-13 * scale;
    for (double x : v) {
        if (std::abs(x) > floor) {
            if (x < 0.0) {
                for (double& y : v) y = -y;
            }
            return;
        }
    }
}

std::vector<EigenPair> eig_sym_tridiagonal(std::span<const double> diagonal,
                                           std::span<const double> offdiag) {
    const std::size_t n = diagonal.size();
    if (n == 0) return {};
    if (offdiag.size() + 1 != n) throw std::invalid_argument("tridiagonal needs n-1 off-diagonal entries");

    std::vector<double> d(diagonal.begin(), diagonal.end());
    std::vector<double> e(n, 0.0);
    std::copy(offdiag.begin(), offdiag.end(), e.begin());
    // z[col][row]: eigenvector columns
    std::vector<std::vector<double>> z(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) z[i][i] = 1.0;

    double f = 0.0;
    double tst1 = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        std::size_t m = l;
        while (m < n - 1 && std::abs(e[m]) > kEps * tst1) ++m;

        if (m > l) {
            int sweeps = 0;
            do {
                if (++sweeps > kMaxQlSweeps) {
                    throw NumericFailure("implicit QL did not converge for eigenvalue " + std::to_string(l),
                                         std::abs(e[l]));
                }
                // implicit Wilkinson-style shift from the leading 2x2
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double hh = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i) d[i] -= hh;
                f += hh;

                p = d[m];
                double c = 1.0, c2 = 1.0, c3 = 1.0;
                const double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (std::size_t ii = m; ii-- > l;) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[ii];
                    hh = c * p;
                    r = std::hypot(p, e[ii]);
                    e[ii + 1] = s * r;
                    s = e[ii] / r;
                    c = p / r;
                    p = c * d[ii] - s * g;
                    d[ii + 1] = hh + s * (c * g + s * d[ii]);
                    auto& zi = z[ii];
                    auto& zi1 = z[ii + 1];
                    for (std::size_t k = 0; k < n; ++k) {
                        hh = zi1[k];
                        zi1[k] = s * zi[k] + c * hh;
                        zi[k] = c * zi[k] - s * hh;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > kEps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }
    return sorted_pairs(d, z);
}

std::vector<EigenPair> eig_sym_tridiagonal(const TruncatedTridiagonal& t) {
    const std::vector<double> diag(t.size(), t.diagonal_constant);
    return eig_sym_tridiagonal(diag, t.offdiag);
}

std::vector<EigenPair> eig_sym_dense(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("matrix must be square");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw std::invalid_argument("matrix is not symmetric");
    }
    if (m.rows() == 0) return {};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success) throw NumericFailure("dense eigensolver failed", 0.0);
    std::vector<double> values(solver.eigenvalues().data(),
                               solver.eigenvalues().data() + solver.eigenvalues().size());
    std::vector<std::vector<double>> vectors;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        vectors.emplace_back(solver.eigenvectors().col(c).data(),
                             solver.eigenvectors().col(c).data() + m.rows());
    }
    return sorted_pairs(values, vectors);
}

SectorEigenPair ground_state(const SparseSectorHamiltonian& h, std::size_t dense_limit) {
    if (h.dimension() <= dense_limit) return dense_ground(h);
    return lanczos_ground(h);
}

EigenPair row1_ground(const CouplingProfile& profile, std::size_t k) {
    return eig_sym_tridiagonal(build_row1_tridiagonal(profile, k)).front();
}

}  // namespace itc
