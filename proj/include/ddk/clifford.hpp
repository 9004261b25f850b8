#pragma once

#include <Eigen/Sparse>
#include <complex>
#include <vector>

#include "ddk/lattice.hpp"
#include "ddk/spectrum.hpp"

namespace ddk {

using SpMat = Eigen::SparseMatrix<std::complex<double>>;

/// Hermitian generators of a Clifford algebra with 2k+1 elements in the
/// 2^k-dimensional representation: Gamma^(2j-1) = Z^(j-1) X 1..., plus the
/// product element Gamma^(2k+1) = (-i)^k Gamma^1 ... Gamma^(2k).
struct GammaSet {
    int k{0};
    int dim{1};
    std::vector<SpMat> gamma;  // size 2k+1, index mu-1
};

GammaSet build_gamma_set(int k);

/// Commutator generator Gamma^{mu nu} = i Gamma^mu Gamma^nu (mu != nu).
SpMat gamma_pair(const GammaSet& set, int mu, int nu);

/// Embed a single-site operator into the 4^n-dimensional chain, site 0 as the
/// leftmost Kronecker factor.
SpMat site_operator(const SpMat& op, int site, int nSites);

/// Spin-representation operators of the two-layer model: Hamiltonian, one
/// jump generator per site, all plaquette fluxes (labelled by their lower
/// left corner, row-major), the two Wilson loops and the global charge.
struct ModelOperators {
    LatticeGeometry geom;
    SpMat hamiltonian;
    std::vector<SpMat> jumps;  // Gamma^5 at each site (unscaled)
    std::vector<SpMat> plaquettes;
    SpMat wilsonX, wilsonY, charge;
};

ModelOperators build_model_operators(const LatticeGeometry& g, const CouplingParams& J);

/// Projectors onto the 2^(N+1) joint flux sectors (independent plaquettes
/// plus both Wilson loops). Each has rank 2^(N-1).
std::vector<SpMat> flux_projectors(const ModelOperators& ops);

}  // namespace ddk
