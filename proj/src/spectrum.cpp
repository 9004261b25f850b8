#include "ddk/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <limits>
#include <stdexcept>

namespace ddk {

namespace {

void addBilinear(Eigen::MatrixXcd& a, int i, int j, cxd v) {
    a(i, j) += v;
    a(j, i) -= v;
}

}  // namespace

StructureMatrix assemble_structure_matrix(const LatticeGeometry& g, const CouplingParams& J,
                                          const GaugeField& u, double gamma) {
    StructureMatrix m;
    int n = g.sites();
    m.a = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    for (int i = 0; i < g.cells(); ++i) {
        auto [x, y] = g.aSite(i);
        int s0 = g.site(x, y);
        struct Bond {
            int sx, sy, ub, ut;
        };
        Bond bonds[4] = {
            {x + 1, y, u.h(0, x, y), u.h(1, x, y)},
            {x, y + 1, u.v(0, x, y), u.v(1, x, y)},
            {x - 1, y, u.h(0, x - 1, y), u.h(1, x - 1, y)},
            {x, y - 1, u.v(0, x, y - 1), u.v(1, x, y - 1)},
        };
        for (int d = 0; d < 4; ++d) {
            int s1 = g.site(bonds[d].sx, bonds[d].sy);
            addBilinear(m.a, 2 * s0, 2 * s1, J[d] * static_cast<double>(bonds[d].ub));
            addBilinear(m.a, 2 * s0 + 1, 2 * s1 + 1, -J[d] * static_cast<double>(bonds[d].ut));
        }
    }
    for (int s = 0; s < n; ++s) {
        addBilinear(m.a, 2 * s, 2 * s + 1, cxd(0.0, gamma * u.u5[s]));
    }
    m.offset = cxd(0.0, -gamma * n);
    m.parity = u.linkProduct();
    return m;
}

StructureMatrix assemble_sk_structure_matrix(int cells, double jx, double jy, double gamma,
                                             const std::vector<int>& bottom,
                                             const std::vector<int>& top,
                                             const std::vector<int>& rungs) {
    int n = 2 * cells;
    if (static_cast<int>(bottom.size()) != n || static_cast<int>(top.size()) != n ||
        static_cast<int>(rungs.size()) != n) {
        throw std::invalid_argument("ladder link arrays must have 2*cells entries");
    }
    StructureMatrix m;
    m.a = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    for (int j = 1; j <= n; ++j) {
        double coup = (j % 2 == 1) ? jx : jy;
        int s0 = j - 1, s1 = j % n;
        addBilinear(m.a, 2 * s0, 2 * s1, coup * bottom[j - 1]);
        addBilinear(m.a, 2 * s0 + 1, 2 * s1 + 1, -coup * top[j - 1]);
    }
    for (int j = 0; j < n; ++j) {
        addBilinear(m.a, 2 * j, 2 * j + 1, cxd(0.0, gamma * rungs[j]));
    }
    m.offset = cxd(0.0, -2.0 * gamma * cells);
    m.parity = 1;
    for (int j = 0; j < n; ++j) m.parity *= bottom[j] * top[j] * rungs[j];
    return m;
}

LadderLinks sk_sector_links(int cells, unsigned code) {
    int n = 2 * cells;
    LadderLinks l;
    l.bottom.assign(n, 1);
    l.top.assign(n, 1);
    l.rungs.assign(n, 1);
    // Free links: last leg link of each layer, rungs 2..n; code has n+1 bits.
    l.bottom[n - 1] = (code & 1u) ? -1 : 1;
    l.top[n - 1] = (code & 2u) ? -1 : 1;
    for (int j = 1; j < n; ++j) {
        l.rungs[j] = (code & (1u << (j + 1))) ? -1 : 1;
    }
    return l;
}

cxd pfaffian(Eigen::MatrixXcd a) {
    int n = static_cast<int>(a.rows());
    if (n % 2 != 0) return 0.0;
    cxd pf(1.0, 0.0);
    for (int k = 0; k + 1 < n; k += 2) {
        int p = k + 1;
        double best = std::abs(a(k + 1, k));
        for (int i = k + 2; i < n; ++i) {
            if (std::abs(a(i, k)) > best) {
                best = std::abs(a(i, k));
                p = i;
            }
        }
        if (best == 0.0) return 0.0;
        if (p != k + 1) {
            a.row(k + 1).swap(a.row(p));
            a.col(k + 1).swap(a.col(p));
            pf = -pf;
        }
        pf *= a(k, k + 1);
        if (k + 2 < n) {
            int rest = n - k - 2;
            Eigen::VectorXcd tau = a.row(k).segment(k + 2, rest) / a(k, k + 1);
            Eigen::VectorXcd col = a.col(k + 1).segment(k + 2, rest);
            a.block(k + 2, k + 2, rest, rest) += tau * col.transpose() - col * tau.transpose();
        }
    }
    return pf;
}

double RapiditySet::zeroTol() const {
    return std::max(kZeroTol * scale, 4.0 * pairingResidual);
}

RapiditySet compute_rapidities(const StructureMatrix& m) {
    RapiditySet r;
    r.offset = m.offset;
    r.parity = m.parity;
    int n = static_cast<int>(m.a.rows());
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(cxd(0.0, 1.0) * m.a, false);
    std::vector<cxd> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
    std::sort(ev.begin(), ev.end(), [](cxd a, cxd b) { return std::abs(a) > std::abs(b); });

    std::vector<bool> used(n, false);
    for (int i = 0; i < n; ++i) {
        if (used[i]) continue;
        used[i] = true;
        int match = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int j = i + 1; j < n; ++j) {
            if (used[j]) continue;
            double res = std::abs(ev[i] + ev[j]);
            if (res < best) {
                best = res;
                match = j;
            }
        }
        used[match] = true;
        r.pairingResidual = std::max(r.pairingResidual, best);
        cxd beta = (ev[i] - ev[match]) / 2.0;
        if (beta.imag() > 0.0 || (beta.imag() == 0.0 && beta.real() < 0.0)) beta = -beta;
        r.beta.push_back(beta);
    }
    for (cxd b : r.beta) r.scale = std::max(r.scale, std::abs(b));

    double tol = r.zeroTol();
    bool hasZero = false;
    cxd prod(1.0, 0.0);
    for (cxd b : r.beta) {
        if (std::abs(b) <= tol) hasZero = true;
        prod *= b;
    }
    if (!hasZero) {
        cxd ratio = pfaffian(m.a) / prod;
        r.pfaffianSign = ratio.real() >= 0.0 ? 1 : -1;
    }
    return r;
}

std::vector<cxd> sector_spectrum(const RapiditySet& r) {
    double tol = r.zeroTol();
    std::vector<cxd> nonzero;
    int z = 0;
    for (cxd b : r.beta) {
        if (std::abs(b) <= tol) {
            ++z;
        } else {
            nonzero.push_back(b);
        }
    }
    int n = static_cast<int>(nonzero.size());
    if (n > 24) throw std::invalid_argument("sector too large for full enumeration");
    std::vector<cxd> out;
    if (z == 0) {
        int peff = r.parity * r.pfaffianSign;
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            // product of signs: +1 for unset bits, -1 for set bits
            int prodSign = (std::popcount(mask) % 2 == 0) ? 1 : -1;
            if (prodSign != peff) continue;
            cxd e = r.offset;
            for (int j = 0; j < n; ++j) e += (mask & (1u << j)) ? -nonzero[j] : nonzero[j];
            out.push_back(e);
        }
    } else {
        std::int64_t mult = 1ll << (z - 1);
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            cxd e = r.offset;
            for (int j = 0; j < n; ++j) e += (mask & (1u << j)) ? -nonzero[j] : nonzero[j];
            for (std::int64_t c = 0; c < mult; ++c) out.push_back(e);
        }
    }
    return out;
}

SectorResult sector_gap(const RapiditySet& r) {
    double tol = r.zeroTol();
    std::vector<cxd> free_;   // damping-free, nonzero rapidities
    std::vector<double> pen;  // rate cost of flipping each damped mode
    int z = 0;
    cxd eBase = r.offset;
    for (cxd b : r.beta) {
        if (std::abs(b) <= tol) {
            ++z;
        } else if (std::abs(b.imag()) <= tol) {
            free_.push_back(b);
        } else {
            pen.push_back(-2.0 * b.imag());
            eBase -= b;
        }
    }
    std::sort(pen.begin(), pen.end());
    double r0 = std::max(0.0, -eBase.imag());
    int parD = (pen.size() % 2 == 0) ? 1 : -1;
    bool parityFree = z > 0 || !free_.empty();
    int peff = r.parity * r.pfaffianSign;

    SectorResult res;
    double best = std::numeric_limits<double>::infinity();
    auto consider = [&](double rate) {
        if (rate > tol && rate < best) best = rate;
    };
    if (parityFree) {
        consider(r0);
        if (!pen.empty()) consider(r0 + pen[0]);
    } else if (parD == peff) {
        consider(r0);
        if (pen.size() >= 2) consider(r0 + pen[0] + pen[1]);
    } else if (!pen.empty()) {
        consider(r0 + pen[0]);
    }
    // All modes stationary (the unitary limit): report a vanishing gap.
    res.minNonzeroRate = std::isinf(best) ? 0.0 : best;

    // Stationary states require the undamped level to sum to zero exactly.
    if (r0 <= tol) {
        int nf = static_cast<int>(free_.size());
        if (nf > 24) throw std::invalid_argument("too many undamped modes to enumerate");
        if (z == 0) {
            bool level0 = parD == peff || !free_.empty();
            if (level0) {
                int need = peff * parD;
                for (std::uint32_t mask = 0; mask < (1u << nf); ++mask) {
                    int prodSign = (std::popcount(mask) % 2 == 0) ? 1 : -1;
                    if (prodSign != need) continue;
                    cxd e = eBase;
                    for (int j = 0; j < nf; ++j) e += (mask & (1u << j)) ? -free_[j] : free_[j];
                    if (std::abs(e) <= tol) ++res.zeroModeCount;
                }
            }
        } else {
            std::int64_t mult = 1ll << (z - 1);
            for (std::uint32_t mask = 0; mask < (1u << nf); ++mask) {
                cxd e = eBase;
                for (int j = 0; j < nf; ++j) e += (mask & (1u << j)) ? -free_[j] : free_[j];
                if (std::abs(e) <= tol) res.zeroModeCount += mult;
            }
        }
    }
    return res;
}

SectorResult sector_gap(const LatticeGeometry& g, const CouplingParams& J, const GaugeField& u,
                        double gamma) {
    return sector_gap(compute_rapidities(assemble_structure_matrix(g, J, u, gamma)));
}

}  // namespace ddk
