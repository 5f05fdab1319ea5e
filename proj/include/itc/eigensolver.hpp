#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

#include "itc/sector.hpp"

namespace itc {

/// Sector dimension above which ground_state switches to Lanczos.
inline constexpr std::size_t kDenseCrossover = 2000;

/// Eigenvalue with a unit eigenvector whose first nonzero component is positive.
struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;
};

struct SectorEigenPair {
    double value = 0.0;
    StateVector vector;
    double residual = 0.0;  // ||H v - value v||_2
};

/// Flip the sign so the first component above roundoff is positive.
void fix_sign(std::span<double> v);

/// Implicit QL on a symmetric tridiagonal matrix. Eigenpairs ascending.
/// Throws NumericFailure if an eigenvalue needs more than 100 sweeps.
std::vector<EigenPair> eig_sym_tridiagonal(std::span<const double> diagonal,
                                           std::span<const double> offdiag);
std::vector<EigenPair> eig_sym_tridiagonal(const TruncatedTridiagonal& t);

/// Full decomposition of a small dense symmetric matrix, ascending.
std::vector<EigenPair> eig_sym_dense(const Eigen::MatrixXd& m);

/// Lowest eigenpair of a sector Hamiltonian: dense below `dense_limit`,
/// restarted Lanczos above it.
SectorEigenPair ground_state(const SparseSectorHamiltonian& h,
                             std::size_t dense_limit = kDenseCrossover);

/// Lowest eigenpair of the row-1 tridiagonal for k excitations.
EigenPair row1_ground(const CouplingProfile& profile, std::size_t k);

}  // namespace itc
