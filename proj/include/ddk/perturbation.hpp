#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

#include "ddk/gauge.hpp"
#include "ddk/lattice.hpp"
#include "ddk/spectrum.hpp"

namespace ddk {

/// Real antisymmetric hopping matrix J_{r,r'} of a single layer in a fixed
/// link configuration: J_{R,R+delta} = J_delta u^delta_R for A sites R.
Eigen::MatrixXd coupling_matrix(const LatticeGeometry& g, const CouplingParams& J,
                                const GaugeField& u);

/// Real orthogonal Q with Q^T J Q block diagonal, blocks [[0, eps], [-eps, 0]]
/// with eps sorted descending (zero blocks last).
struct OrthogonalBlockDecomposition {
    Eigen::MatrixXd q;
    std::vector<double> eps;  // one entry per 2x2 block
};

OrthogonalBlockDecomposition block_diagonalize(const Eigen::MatrixXd& j, double tol = 1e-10);

/// Weak-dissipation effective dynamics on the slow manifold: a classical
/// master matrix over pairs of mode-occupation patterns (m, n), each with one
/// bit per unit cell; index m + (n << cells).
struct ClassicalMasterMatrix {
    Eigen::MatrixXd m;
    Eigen::MatrixXd weights;  // transition weight w(S, R)
};

ClassicalMasterMatrix classical_master_matrix(const OrthogonalBlockDecomposition& dec,
                                              const LatticeGeometry& g);

/// Spectrum of the translation-invariant master matrix in closed form:
/// (4/N) a b - N over the spin sums a, b in {-Nc, -Nc+2, ..., Nc}.
std::vector<double> uniform_master_spectrum(const LatticeGeometry& g);

/// Rate assigned to one flipped occupation label, evaluated on occupation
/// sums: (4/N)(Nc-1)Nc - N = -2 for every size.
double single_flip_rate(const LatticeGeometry& g);

/// Sign tables of the conjugation action of the four bond generators on the
/// eight-dimensional adjoint label q in {1..8}.
struct DeltaTables {
    int delta[4][8];
};
DeltaTables delta_tables();

/// Strong-dissipation quadratic eigenvalue coefficient for a label
/// configuration q (one entry per site, values 1..8).
int s_eigenvalue(const LatticeGeometry& g, const std::vector<int>& q);

/// Smallest nonzero s over all 8^N label configurations (guarded).
int min_nonzero_s(const LatticeGeometry& g);

/// Decay rates in the strong-dissipation limit: roots of w^2 + 4 gamma w + 2s.
std::pair<std::complex<double>, std::complex<double>> large_gamma_rates(double s, double gamma);

/// Rate of a sector whose rung labels break k constraints.
double dissipator_sector_rate(int k, double gamma);

}  // namespace ddk
