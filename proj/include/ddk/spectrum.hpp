#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "ddk/gauge.hpp"
#include "ddk/lattice.hpp"

namespace ddk {

using cxd = std::complex<double>;

/// Bond couplings for the four directed bonds leaving an A site:
/// +x, +y, -x, -y.
struct CouplingParams {
    double j1{1.0}, j2{1.0}, j3{1.0}, j4{1.0};
    double operator[](int d) const {
        const double* v[] = {&j1, &j2, &j3, &j4};
        return *v[d];
    }
};

/// Antisymmetric matrix A of the quadratic Majorana form (i/2) theta^T A theta,
/// plus the scalar offset and the link-product parity of the underlying
/// configuration.
struct StructureMatrix {
    Eigen::MatrixXcd a;
    cxd offset{0.0, 0.0};
    int parity{1};
};

/// Canonical rapidities: the +/- paired eigenvalues of iA, with the branch
/// Im(beta) <= 0 (ties broken toward Re(beta) >= 0).
struct RapiditySet {
    std::vector<cxd> beta;
    cxd offset{0.0, 0.0};
    int parity{1};        // product of all gauge links
    int pfaffianSign{0};  // sign of Re(Pf(A)/prod beta); 0 if zero modes present
    double scale{0.0};    // max |beta|
    double pairingResidual{0.0};

    /// Classification tolerance for "zero": relative floor, widened when the
    /// eigensolve itself was ill-conditioned (defective pencils).
    double zeroTol() const;
};

/// Smallest nonzero decay rate and stationary-state count of one sector.
struct SectorResult {
    double minNonzeroRate{0.0};
    std::int64_t zeroModeCount{0};
};

/// Two-layer model on the torus: bond terms i J u theta theta on the bottom
/// layer, conjugated sign on top, rung terms at every site, constant offset
/// -i gamma N.
StructureMatrix assemble_structure_matrix(const LatticeGeometry& g, const CouplingParams& J,
                                          const GaugeField& u, double gamma);

/// Two-leg ladder variant: alternating x/y couplings along a periodic chain of
/// 2*cells sites per leg, one rung per site.
StructureMatrix assemble_sk_structure_matrix(int cells, double jx, double jy, double gamma,
                                             const std::vector<int>& bottom,
                                             const std::vector<int>& top,
                                             const std::vector<int>& rungs);

/// Representative ladder link configuration for one of the 2^(N+1) flux
/// sectors, N = 2*cells: tree links fixed to +1, the rest read from code bits.
struct LadderLinks {
    std::vector<int> bottom, top, rungs;
};
LadderLinks sk_sector_links(int cells, unsigned code);

/// Pfaffian of an even-dimensional antisymmetric matrix (Parlett-Reid
/// tridiagonalization with partial pivoting).
cxd pfaffian(Eigen::MatrixXcd a);

RapiditySet compute_rapidities(const StructureMatrix& m);

/// All 2^(n-1) many-body eigenvalues of the sector (n = number of rapidity
/// pairs), respecting the parity constraint / zero-mode multiplicities.
std::vector<cxd> sector_spectrum(const RapiditySet& r);

/// Same information as scanning sector_spectrum, but computed greedily without
/// enumerating the full spectrum.
SectorResult sector_gap(const RapiditySet& r);

/// Convenience: gap of a flux sector of the two-layer model.
SectorResult sector_gap(const LatticeGeometry& g, const CouplingParams& J, const GaugeField& u,
                        double gamma);

/// Relative tolerance used to classify rapidities and eigenvalues as zero.
inline constexpr double kZeroTol = 1e-9;

}  // namespace ddk
