#include "ddk/clifford.hpp"

#include <stdexcept>
#include <unsupported/Eigen/KroneckerProduct>

namespace ddk {

namespace {

SpMat pauli(char which) {
    SpMat m(2, 2);
    switch (which) {
        case 'i':
            m.insert(0, 0) = 1.0;
            m.insert(1, 1) = 1.0;
            break;
        case 'x':
            m.insert(0, 1) = 1.0;
            m.insert(1, 0) = 1.0;
            break;
        case 'y':
            m.insert(0, 1) = cxd(0.0, -1.0);
            m.insert(1, 0) = cxd(0.0, 1.0);
            break;
        case 'z':
            m.insert(0, 0) = 1.0;
            m.insert(1, 1) = -1.0;
            break;
    }
    m.makeCompressed();
    return m;
}

SpMat kronChain(const std::vector<SpMat>& factors) {
    SpMat out(1, 1);
    out.insert(0, 0) = 1.0;
    for (const SpMat& f : factors) {
        SpMat next = Eigen::kroneckerProduct(out, f).eval();
        out.swap(next);
    }
    return out;
}

}  // namespace

GammaSet build_gamma_set(int k) {
    if (k < 1 || k > 4) throw std::invalid_argument("gamma set supports 1 <= k <= 4");
    GammaSet set;
    set.k = k;
    set.dim = 1 << k;
    for (int j = 1; j <= k; ++j) {
        for (char c : {'x', 'y'}) {
            std::vector<SpMat> factors;
            for (int l = 1; l < j; ++l) factors.push_back(pauli('z'));
            factors.push_back(pauli(c));
            for (int l = j + 1; l <= k; ++l) factors.push_back(pauli('i'));
            set.gamma.push_back(kronChain(factors));
        }
    }
    SpMat prod = set.gamma[0];
    for (int m = 1; m < 2 * k; ++m) prod = (prod * set.gamma[m]).eval();
    cxd phase(1.0, 0.0);
    for (int j = 0; j < k; ++j) phase *= cxd(0.0, -1.0);
    set.gamma.push_back((phase * prod).pruned(1e-14));
    return set;
}

SpMat gamma_pair(const GammaSet& set, int mu, int nu) {
    if (mu == nu || mu < 1 || nu < 1 || mu > 2 * set.k + 1 || nu > 2 * set.k + 1) {
        throw std::invalid_argument("gamma_pair needs distinct indices in range");
    }
    return (cxd(0.0, 1.0) * set.gamma[mu - 1] * set.gamma[nu - 1]).pruned(1e-14);
}

SpMat site_operator(const SpMat& op, int site, int nSites) {
    int d = static_cast<int>(op.rows());
    std::vector<SpMat> factors;
    SpMat id(d, d);
    id.setIdentity();
    for (int s = 0; s < nSites; ++s) factors.push_back(s == site ? op : id);
    return kronChain(factors);
}

ModelOperators build_model_operators(const LatticeGeometry& g, const CouplingParams& J) {
    int n = g.sites();
    if (n > 10) throw std::invalid_argument("spin representation limited to 10 sites");
    GammaSet set = build_gamma_set(2);
    ModelOperators ops;
    ops.geom = g;
    long dim = 1l << (2 * n);
    SpMat h(dim, dim);
    for (int i = 0; i < g.cells(); ++i) {
        auto [x, y] = g.aSite(i);
        int nbr[4][2] = {{x + 1, y}, {x, y + 1}, {x - 1, y}, {x, y - 1}};
        for (int d = 0; d < 4; ++d) {
            int mu = d + 1;
            SpMat bond = site_operator(set.gamma[mu - 1], g.site(x, y), n) *
                         site_operator(set.gamma[mu - 1], g.site(nbr[d][0], nbr[d][1]), n);
            h += J[d] * bond;
        }
    }
    ops.hamiltonian = h.pruned(1e-14);
    for (int s = 0; s < n; ++s) {
        ops.jumps.push_back(site_operator(set.gamma[4], s, n));
    }
    // Plaquette flux with lower-left corner r, built from the commutator
    // generators at its four corners; the index pattern depends on the
    // sublattice of the corner.
    auto pairAt = [&](int mu, int nu, int x, int y) {
        return site_operator(gamma_pair(set, mu, nu), g.site(x, y), n);
    };
    for (int y = 1; y <= g.ny; ++y) {
        for (int x = 1; x <= g.nx; ++x) {
            SpMat phi;
            if (g.isA(x, y)) {
                phi = (-1.0 * pairAt(2, 1, x, y) * pairAt(1, 4, x + 1, y) *
                       pairAt(4, 3, x + 1, y + 1) * pairAt(3, 2, x, y + 1))
                          .pruned(1e-14);
            } else {
                phi = (-1.0 * pairAt(4, 3, x, y) * pairAt(3, 2, x + 1, y) *
                       pairAt(2, 1, x + 1, y + 1) * pairAt(1, 4, x, y + 1))
                          .pruned(1e-14);
            }
            ops.plaquettes.push_back(phi);
        }
    }
    SpMat wx = pairAt(1, 3, 1, 1);
    for (int x = 2; x <= g.nx; ++x) {
        wx = (wx * (g.isA(x, 1) ? pairAt(1, 3, x, 1) : pairAt(3, 1, x, 1))).eval();
    }
    ops.wilsonX = (-1.0 * wx).pruned(1e-14);
    SpMat wy = pairAt(2, 4, 1, 1);
    for (int y = 2; y <= g.ny; ++y) {
        wy = (wy * (g.isA(1, y) ? pairAt(2, 4, 1, y) : pairAt(4, 2, 1, y))).eval();
    }
    ops.wilsonY = (-1.0 * wy).pruned(1e-14);
    SpMat q = ops.jumps[0];
    for (int s = 1; s < n; ++s) q = (q * ops.jumps[s]).eval();
    ops.charge = q.pruned(1e-14);
    return ops;
}

std::vector<SpMat> flux_projectors(const ModelOperators& ops) {
    const LatticeGeometry& g = ops.geom;
    int n = g.sites();
    long dim = ops.hamiltonian.rows();
    SpMat id(dim, dim);
    id.setIdentity();
    // Independent commuting set: all plaquettes but the last, plus the two
    // Wilson loops (the dropped plaquette is fixed by the layer identity).
    std::vector<const SpMat*> gens;
    for (int p = 0; p + 1 < n; ++p) gens.push_back(&ops.plaquettes[p]);
    gens.push_back(&ops.wilsonX);
    gens.push_back(&ops.wilsonY);
    std::vector<SpMat> out;
    for (std::uint32_t mask = 0; mask < (1u << gens.size()); ++mask) {
        SpMat proj = id;
        for (std::size_t b = 0; b < gens.size(); ++b) {
            double eta = (mask & (1u << b)) ? -1.0 : 1.0;
            proj = (0.5 * (proj + eta * (proj * (*gens[b])).eval())).pruned(1e-14);
        }
        out.push_back(proj);
    }
    return out;
}

}  // namespace ddk
