#include "doctest.h"

#include <bit>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "itc/error.hpp"
#include "itc/sector.hpp"
#include "itc/symmetric_functions.hpp"
#include "oracles.hpp"

using namespace itc;

namespace {

// Sector block of the Kronecker-product Hamiltonian, rows in `basis` order.
Eigen::MatrixXd kron_sector_block(const std::vector<double>& kappa, const SectorBasis& basis) {
    const int k = static_cast<int>(basis.k());
    const Eigen::MatrixXd full = oracle::kron_hamiltonian(kappa, k);
    const auto dim = static_cast<Eigen::Index>(basis.dimension());
    const std::uint64_t atoms = std::uint64_t{1} << kappa.size();
    Eigen::MatrixXd out(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        const auto sr = basis.state(static_cast<std::size_t>(r));
        for (Eigen::Index c = 0; c < dim; ++c) {
            const auto sc = basis.state(static_cast<std::size_t>(c));
            out(r, c) = full(static_cast<Eigen::Index>(sr.photons * atoms + sr.mask),
                             static_cast<Eigen::Index>(sc.photons * atoms + sc.mask));
        }
    }
    return out;
}

}  // namespace

TEST_CASE("sector enumeration order and size") {
    const auto b = enumerate_sector(3, 1);
    REQUIRE(b->dimension() == 4);
    CHECK(b->state(0) == SectorState{1, 0b000});
    CHECK(b->state(1) == SectorState{0, 0b001});
    CHECK(b->state(2) == SectorState{0, 0b010});
    CHECK(b->state(3) == SectorState{0, 0b100});

    CHECK(enumerate_sector(2, 2)->dimension() == 4);
    CHECK(enumerate_sector(16, 3)->dimension() == 697);
    CHECK(sector_dimension(16, 3) == 697);
    CHECK(enumerate_sector(3, 7)->dimension() == 8);  // k > N caps at 2^N
    CHECK(enumerate_sector(5, 0)->dimension() == 1);
}

TEST_CASE("enumeration is complete, ordered, and ranked consistently") {
    for (std::size_t n = 1; n <= 10; ++n) {
        for (std::size_t k = 0; k <= 5; ++k) {
            const auto b = enumerate_sector(n, k);
            std::size_t expected = 0;
            for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
                if (static_cast<std::size_t>(std::popcount(m)) <= k) ++expected;
            }
            REQUIRE(b->dimension() == expected);
            for (std::size_t idx = 0; idx < b->dimension(); ++idx) {
                const auto st = b->state(idx);
                CHECK(st.photons + static_cast<std::size_t>(std::popcount(st.mask)) == k);
                CHECK(b->index_of(st) == idx);
                if (idx > 0) {
                    const auto prev = b->state(idx - 1);
                    const int pc = std::popcount(prev.mask), cc = std::popcount(st.mask);
                    CHECK((pc < cc || (pc == cc && prev.mask < st.mask)));
                }
            }
        }
    }
    const auto b = enumerate_sector(4, 2);
    CHECK_THROWS_AS(b->index_of(AtomMask{0b0111}), std::invalid_argument);
    CHECK_THROWS_AS(b->index_of(AtomMask{0b10000}), std::invalid_argument);
    CHECK_THROWS_AS(b->index_of(SectorState{0, 0b0001}), std::invalid_argument);
}

TEST_CASE("collective states") {
    const auto p = from_explicit({3.0, 4.0});
    const auto v = collective_state(p, 1);
    REQUIRE(v.size() == 3);
    CHECK(v[0] == 0.0);
    CHECK(v[1] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(v[2] == doctest::Approx(0.8).epsilon(1e-15));

    const auto g = collective_state(build_sine_profile(5, 1.0, 1.0), 0);
    CHECK(g[0] == 1.0);

    const auto d = collective_state(build_uniform_profile(3, 1.0), 2);
    const auto& b = d.basis();
    for (std::size_t idx = b.block_begin(2); idx < b.block_end(2); ++idx) {
        CHECK(d[idx] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    }
    CHECK_THROWS_AS(collective_state(p, 3), std::invalid_argument);
}

TEST_CASE("collective amplitudes equal n! prod(kappa) / N_n") {
    const auto kap = oracle::random_kappas(7, 42);
    const auto p = from_explicit(kap);
    std::vector<double> sq;
    for (double x : kap) sq.push_back(x * x);
    for (std::size_t n = 0; n <= 7; ++n) {
        const double nn = oracle::factorial(n) * std::sqrt(oracle::brute_elem_sym(sq, n));
        const auto v = collective_state(p, n, enumerate_sector(7, 9));
        for (std::size_t idx = v.basis().block_begin(n); idx < v.basis().block_end(n); ++idx) {
            double prod = 1.0;
            for (std::size_t j = 0; j < 7; ++j) {
                if (v.basis().state(idx).mask >> j & 1) prod *= kap[j];
            }
            CHECK(v[idx] == doctest::Approx(oracle::factorial(n) * prod / nn).epsilon(1e-13));
        }
    }
}

TEST_CASE("row-1 tridiagonal elements") {
    const auto p = from_explicit({3.0, 4.0});
    const auto t1 = build_row1_tridiagonal(p, 1);
    REQUIRE(t1.offdiag.size() == 1);
    CHECK(t1.offdiag[0] == doctest::Approx(5.0));
    CHECK(t1.diagonal_constant == 0.0);

    const auto s = build_sine_profile(6, 1.0, 1.0);
    const auto tab = coupling_table(s, 2);
    const double n1 = norm_N(tab, 1), n2 = norm_N(tab, 2);
    const auto t2 = build_row1_tridiagonal(s, 2);
    REQUIRE(t2.offdiag.size() == 2);
    CHECK(t2.offdiag[0] == doctest::Approx(std::sqrt(2.0) * n1).epsilon(1e-14));
    CHECK(t2.offdiag[1] == doctest::Approx(n2 / n1).epsilon(1e-14));
    CHECK(t2.diagonal_constant == -1.0);

    CHECK(build_row1_tridiagonal(from_explicit({1.0, 2.0}), 5).offdiag.size() == 2);
}

TEST_CASE("sparse Hamiltonian matches the Kronecker-product construction") {
    for (std::size_t n = 1; n <= 5; ++n) {
        for (std::size_t k = 0; k <= 3; ++k) {
            const auto kap = oracle::random_kappas(n, 100 * n + k);
            const auto h = build_full_sector_hamiltonian(from_explicit(kap), k);
            const Eigen::MatrixXd ref = kron_sector_block(kap, h.basis());
            CHECK((h.to_dense() - ref).cwiseAbs().maxCoeff() <= 1e-14);
        }
    }
}

TEST_CASE("sparse Hamiltonian structure") {
    const auto p = build_sine_profile(8, 1.0, 1.0);
    const auto h = build_full_sector_hamiltonian(p, 3);
    const auto& b = h.basis();
    const auto rp = h.row_ptr();
    for (std::size_t r = 0; r < h.dimension(); ++r) {
        CHECK(rp[r + 1] - rp[r] <= p.n_atoms());
        for (std::size_t q = rp[r]; q < rp[r + 1]; ++q) {
            const auto a = b.state(r), c = b.state(h.cols()[q]);
            const auto photon_gap = static_cast<long>(a.photons) - static_cast<long>(c.photons);
            CHECK(std::abs(photon_gap) == 1);
            CHECK(std::popcount(a.mask ^ c.mask) == 1);
        }
    }
    const Eigen::MatrixXd d = h.to_dense();
    CHECK((d - d.transpose()).cwiseAbs().maxCoeff() == 0.0);

    const auto jc = build_full_sector_hamiltonian(build_sine_profile(1, 1.0, 2.0), 1);
    const Eigen::MatrixXd m = jc.to_dense();
    CHECK(m(0, 1) == doctest::Approx(2.0));
    CHECK(m(0, 0) == doctest::Approx(0.5));
}

TEST_CASE("sector cap") {
    CHECK_THROWS_AS(build_full_sector_hamiltonian(build_sine_profile(30, 1.0, 1.0), 6), ResourceLimitError);
    CHECK_NOTHROW(build_full_sector_hamiltonian(build_sine_profile(10, 1.0, 1.0), 3, 176));
    CHECK_THROWS_AS(build_full_sector_hamiltonian(build_sine_profile(10, 1.0, 1.0), 3, 175), ResourceLimitError);
}

TEST_CASE("apply_hamiltonian") {
    const auto p = build_sine_profile(6, 1.0, 1.0);
    const auto h = build_full_sector_hamiltonian(p, 0);
    StateVector vac(h.basis_ptr(), {1.0});
    CHECK(apply_hamiltonian(h, vac)[0] == -3.0);

    const auto h3 = build_full_sector_hamiltonian(p, 3);
    const auto dim = h3.dimension();
    std::vector<double> x(dim), y(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        x[i] = std::sin(1.0 + static_cast<double>(i));
        y[i] = std::cos(0.3 * static_cast<double>(i));
    }
    StateVector vx(h3.basis_ptr(), x), vy(h3.basis_ptr(), y);
    std::vector<double> comb(dim);
    for (std::size_t i = 0; i < dim; ++i) comb[i] = 2.5 * x[i] - 0.7 * y[i];
    const auto lhs = apply_hamiltonian(h3, StateVector(h3.basis_ptr(), comb));
    const auto hx = apply_hamiltonian(h3, vx), hy = apply_hamiltonian(h3, vy);
    for (std::size_t i = 0; i < dim; ++i) CHECK(std::abs(lhs[i] - (2.5 * hx[i] - 0.7 * hy[i])) <= 1e-13);

    CHECK_THROWS_AS(apply_hamiltonian(h3, vac), std::invalid_argument);
}

TEST_CASE("k = 1 collective subspace is closed; projections reproduce the tridiagonal") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const auto p = from_explicit(oracle::random_kappas(7, seed));
        for (std::size_t k = 1; k <= 4; ++k) {
            const auto h = build_full_sector_hamiltonian(p, k);
            const auto t = build_row1_tridiagonal(p, k);
            const Eigen::MatrixXd tri = t.to_dense();
            std::vector<StateVector> row1;
            for (std::size_t s = 0; s < t.size(); ++s) row1.push_back(collective_state(p, s, h.basis_ptr()));
            for (std::size_t s = 0; s < row1.size(); ++s) {
                const auto hv = apply_hamiltonian(h, row1[s]);
                for (std::size_t r = 0; r < row1.size(); ++r) {
                    CHECK(std::abs(row1[r].dot(hv) - tri(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s))) <= 1e-12);
                }
                if (k == 1) {
                    StateVector resid = hv;
                    for (const auto& w : row1) {
                        const double c = w.dot(hv);
                        for (std::size_t i = 0; i < resid.size(); ++i) resid[i] -= c * w[i];
                    }
                    CHECK(resid.norm() <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("repeated a J_+ on |n>|0> lands on |0>|n>") {
    for (std::size_t n_atoms : {3u, 7u, 12u}) {
        const auto p = build_sine_profile(n_atoms, 1.0, 1.0);
        for (std::size_t n = 1; n <= std::min<std::size_t>(4, n_atoms); ++n) {
            const auto h = build_full_sector_hamiltonian(p, n);
            const auto& b = h.basis();
            StateVector v(h.basis_ptr());
            v[0] = 1.0;
            for (std::size_t step = 1; step <= n; ++step) {
                auto hv = apply_hamiltonian(h, v);
                // keep the raising part only: components with `step` atomic excitations
                for (std::size_t i = 0; i < hv.size(); ++i) {
                    const bool keep = i >= b.block_begin(step) && i < b.block_end(step);
                    if (!keep) hv[i] = 0.0;
                }
                v = hv;
            }
            const auto target = collective_state(p, n, h.basis_ptr());
            CHECK(v.dot(target) / v.norm() >= 1.0 - 1e-12);
        }
    }
}

TEST_CASE("perpendicular states") {
    CHECK(build_row2_states(build_uniform_profile(6, 1.3), 4).empty());
    CHECK(build_row2_states(build_sine_profile(6, 1.0, 1.0), 1).empty());

    // two atoms, kappa = (1, 2): Phi_1 ~ kappa_i sum_{j != i} kappa_j^2 = (4, 2),
    // its part orthogonal to (1, 2)/sqrt5 is along (2, -1)/sqrt5
    const auto p = from_explicit({1.0, 2.0});
    const auto perp = build_row2_states(p, 2);
    REQUIRE(perp.size() == 1);
    const auto one = collective_state(p, 1, perp[0].basis_ptr());
    CHECK(std::abs(perp[0].dot(one)) <= 1e-12);
    const auto& b = perp[0].basis();
    CHECK(perp[0][b.index_of(AtomMask{0b01})] == doctest::Approx(2.0 / std::sqrt(5.0)).epsilon(1e-14));
    CHECK(perp[0][b.index_of(AtomMask{0b10})] == doctest::Approx(-1.0 / std::sqrt(5.0)).epsilon(1e-14));

    const auto s = build_sine_profile(9, 1.0, 1.0);
    const auto row2 = build_row2_states(s, 4);
    CHECK(row2.size() == 3);
    for (const auto& v : row2) {
        CHECK(std::abs(v.norm() - 1.0) <= 1e-12);
        for (std::size_t q = 0; q <= 4; ++q) {
            CHECK(std::abs(v.dot(collective_state(s, q, v.basis_ptr()))) <= 1e-12);
        }
    }
}

TEST_CASE("row-1 plus row-2 projected Hamiltonian") {
    const auto s = build_sine_profile(7, 1.0, 1.0);
    const auto m1 = build_row12_hamiltonian(s, 1);
    CHECK(m1.matrix.rows() == 2);
    CHECK((m1.matrix - build_row1_tridiagonal(s, 1).to_dense()).cwiseAbs().maxCoeff() <= 1e-13);

    const auto u = build_uniform_profile(6, 0.8);
    const auto mu = build_row12_hamiltonian(u, 3);
    CHECK(mu.matrix.rows() == 4);
    CHECK((mu.matrix - build_row1_tridiagonal(u, 3).to_dense()).cwiseAbs().maxCoeff() <= 1e-13);

    const auto m3 = build_row12_hamiltonian(s, 3);
    CHECK(m3.row1_count == 4);
    CHECK(m3.matrix.rows() == 6);
    CHECK_THROWS_AS(build_row12_hamiltonian(build_sine_profile(25, 1.0, 1.0), 2), ResourceLimitError);
}
