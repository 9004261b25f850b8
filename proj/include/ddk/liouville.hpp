#pragma once

#include <Eigen/Sparse>
#include <array>
#include <complex>
#include <vector>

#include "ddk/clifford.hpp"

namespace ddk {

/// Sparse matrix of the vectorized GKLS generator, acting on row-stacked
/// density matrices: W = H x 1 - 1 x H^T + i sum_a (L x L* - (1/2) L+L x 1
/// - (1/2) 1 x (L+L)^T).
struct VectorizedGenerator {
    SpMat w;
    long dim{0};
};

/// Jump operators are passed unscaled; every one is multiplied by
/// sqrt(gamma).
VectorizedGenerator build_vectorized_generator(const SpMat& h, const std::vector<SpMat>& jumps,
                                               double gamma);

/// Row-stacked flattening of a (sparse) matrix.
Eigen::VectorXcd vectorize(const SpMat& m);

/// ||W vec(P)||_2 / ||vec(P)||_2
double annihilation_residual(const VectorizedGenerator& gen, const SpMat& p);

/// Tr W^m for m = 1, 2, 3 without forming dense powers.
std::array<std::complex<double>, 3> generator_moments(const VectorizedGenerator& gen);

/// Dense eigenvalues of the generator (guarded to dim <= 4096).
std::vector<std::complex<double>> dense_generator_spectrum(const VectorizedGenerator& gen);

/// Spin-chain form of the two-leg ladder model: alternating XX / YY bonds on
/// a periodic chain of 2*cells spins, one Z jump per site.
SpMat sk_spin_hamiltonian(int cells, double jx, double jy);
std::vector<SpMat> sk_spin_jumps(int cells);

/// Compare two eigenvalue multisets whose degenerate clusters may be
/// resolved with very different accuracy: cluster each set (union-find with
/// the given merge radius), then pair clusters greedily by distance.
/// Returns the worst distance between matched cluster means, or a negative
/// value if the cluster sizes cannot be matched.
double cluster_spectrum_distance(std::vector<std::complex<double>> a,
                                 std::vector<std::complex<double>> b, double radius);

}  // namespace ddk
