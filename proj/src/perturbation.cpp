#include "ddk/perturbation.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ddk {

Eigen::MatrixXd coupling_matrix(const LatticeGeometry& g, const CouplingParams& J,
                                const GaugeField& u) {
    int n = g.sites();
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < g.cells(); ++i) {
        auto [x, y] = g.aSite(i);
        int s0 = g.site(x, y);
        struct Bond {
            int sx, sy, link;
        };
        Bond bonds[4] = {
            {x + 1, y, u.h(0, x, y)},
            {x, y + 1, u.v(0, x, y)},
            {x - 1, y, u.h(0, x - 1, y)},
            {x, y - 1, u.v(0, x, y - 1)},
        };
        for (int d = 0; d < 4; ++d) {
            int s1 = g.site(bonds[d].sx, bonds[d].sy);
            j(s0, s1) += J[d] * bonds[d].link;
            j(s1, s0) -= J[d] * bonds[d].link;
        }
    }
    return j;
}

OrthogonalBlockDecomposition block_diagonalize(const Eigen::MatrixXd& j, double tol) {
    int n = static_cast<int>(j.rows());
    if (n % 2 != 0) throw std::invalid_argument("matrix dimension must be even");
    if ((j + j.transpose()).norm() > 1e-12 * std::max(1.0, j.norm())) {
        throw std::invalid_argument("matrix must be antisymmetric");
    }
    Eigen::MatrixXcd herm = cxd(0.0, 1.0) * j;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);

    OrthogonalBlockDecomposition dec;
    dec.q = Eigen::MatrixXd::Zero(n, n);
    double scale = es.eigenvalues().cwiseAbs().maxCoeff();
    double cut = tol * std::max(1.0, scale);

    // Positive eigenvalues, largest first; w = x + i y with Jx = eps y.
    std::vector<int> pos;
    for (int k = n - 1; k >= 0; --k) {
        if (es.eigenvalues()[k] > cut) pos.push_back(k);
    }
    int col = 0;
    for (int k : pos) {
        Eigen::VectorXcd w = es.eigenvectors().col(k);
        dec.q.col(col) = std::sqrt(2.0) * w.imag();
        dec.q.col(col + 1) = std::sqrt(2.0) * w.real();
        dec.eps.push_back(es.eigenvalues()[k]);
        col += 2;
    }
    // Kernel: orthonormal real basis from the remaining eigenvectors.
    for (int k = 0; k < n && col < n; ++k) {
        if (std::abs(es.eigenvalues()[k]) > cut) continue;
        for (const Eigen::VectorXd& cand :
             {Eigen::VectorXd(es.eigenvectors().col(k).real()),
              Eigen::VectorXd(es.eigenvectors().col(k).imag())}) {
            Eigen::VectorXd v = cand;
            for (int c = 0; c < col; ++c) v -= dec.q.col(c).dot(v) * dec.q.col(c);
            if (v.norm() > 1e-6) {
                dec.q.col(col++) = v / v.norm();
                if (col == n) break;
            }
        }
    }
    if (col != n) throw std::runtime_error("failed to complete orthogonal basis");
    while (static_cast<int>(dec.eps.size()) < n / 2) dec.eps.push_back(0.0);
    return dec;
}

ClassicalMasterMatrix classical_master_matrix(const OrthogonalBlockDecomposition& dec,
                                              const LatticeGeometry& g) {
    int nc = g.cells();
    if (2 * nc > 12) throw std::invalid_argument("master matrix limited to 6 cells");
    int n = g.sites();

    ClassicalMasterMatrix out;
    out.weights = Eigen::MatrixXd::Zero(nc, nc);
    for (int s = 0; s < nc; ++s) {
        for (int r = 0; r < nc; ++r) {
            auto [x, y] = g.aSite(r);
            int ra = g.site(x, y);
            int rb = g.site(x + 1, y);
            double w = 0.0;
            for (int c : {2 * s, 2 * s + 1}) {
                w += dec.q(ra, c) * dec.q(ra, c) + dec.q(rb, c) * dec.q(rb, c);
            }
            out.weights(s, r) = w;
        }
    }

    long dim = 1l << (2 * nc);
    out.m = Eigen::MatrixXd::Zero(dim, dim);
    for (long idx = 0; idx < dim; ++idx) {
        int m = static_cast<int>(idx & ((1 << nc) - 1));
        int nn = static_cast<int>(idx >> nc);
        out.m(idx, idx) = -static_cast<double>(n);
        for (int s = 0; s < nc; ++s) {
            for (int r = 0; r < nc; ++r) {
                long jdx = static_cast<long>(m ^ (1 << s)) | (static_cast<long>(nn ^ (1 << r)) << nc);
                out.m(jdx, idx) += out.weights(s, r);
            }
        }
    }
    return out;
}

namespace {

double binom(int n, int k) {
    double b = 1.0;
    for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
    return b;
}

}  // namespace

std::vector<double> uniform_master_spectrum(const LatticeGeometry& g) {
    int nc = g.cells();
    int n = g.sites();
    std::vector<double> out;
    for (int ka = 0; ka <= nc; ++ka) {
        int a = 2 * ka - nc;
        long ma = static_cast<long>(binom(nc, ka));
        for (int kb = 0; kb <= nc; ++kb) {
            int b = 2 * kb - nc;
            long mb = static_cast<long>(binom(nc, kb));
            double lam = 4.0 / n * a * b - n;
            for (long c = 0; c < ma * mb; ++c) out.push_back(lam);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

double single_flip_rate(const LatticeGeometry& g) {
    int nc = g.cells();
    int n = g.sites();
    return 4.0 / n * (nc - 1) * nc - n;
}

DeltaTables delta_tables() {
    DeltaTables t{{
        {+1, +1, -1, -1, +1, +1, -1, -1},
        {+1, +1, -1, -1, -1, -1, +1, +1},
        {+1, -1, +1, -1, -1, +1, -1, +1},
        {+1, -1, +1, -1, +1, -1, +1, -1},
    }};
    return t;
}

int s_eigenvalue(const LatticeGeometry& g, const std::vector<int>& q) {
    if (static_cast<int>(q.size()) != g.sites()) {
        throw std::invalid_argument("label configuration needs one entry per site");
    }
    static const DeltaTables t = delta_tables();
    int s = 0;
    for (int i = 0; i < g.cells(); ++i) {
        auto [x, y] = g.aSite(i);
        int nbr[4][2] = {{x + 1, y}, {x, y + 1}, {x - 1, y}, {x, y - 1}};
        int qr = q[g.site(x, y)];
        for (int d = 0; d < 4; ++d) {
            int qn = q[g.site(nbr[d][0], nbr[d][1])];
            s += 1 - t.delta[d][qr - 1] * t.delta[d][qn - 1];
        }
    }
    return s;
}

int min_nonzero_s(const LatticeGeometry& g) {
    int n = g.sites();
    double count = std::pow(8.0, n);
    if (count > 1e7) throw std::invalid_argument("label space too large to enumerate");
    std::vector<int> q(n, 1);
    int best = -1;
    long total = static_cast<long>(count);
    for (long code = 0; code < total; ++code) {
        long c = code;
        for (int i = 0; i < n; ++i) {
            q[i] = static_cast<int>(c & 7) + 1;
            c >>= 3;
        }
        int s = s_eigenvalue(g, q);
        if (s > 0 && (best < 0 || s < best)) best = s;
    }
    return best;
}

std::pair<cxd, cxd> large_gamma_rates(double s, double gamma) {
    cxd disc = std::sqrt(cxd(4.0 * gamma * gamma - 2.0 * s, 0.0));
    return {-2.0 * gamma + disc, -2.0 * gamma - disc};
}

double dissipator_sector_rate(int k, double gamma) { return -2.0 * k * gamma; }

}  // namespace ddk
