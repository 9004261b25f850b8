#include "ddk/liouville.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unsupported/Eigen/KroneckerProduct>

namespace ddk {

VectorizedGenerator build_vectorized_generator(const SpMat& h, const std::vector<SpMat>& jumps,
                                               double gamma) {
    long d = h.rows();
    if (d * d > (1l << 20)) throw std::invalid_argument("vectorized generator limited to 2^20");
    SpMat id(d, d);
    id.setIdentity();
    VectorizedGenerator gen;
    gen.dim = d * d;
    SpMat ht = SpMat(h.transpose());
    gen.w = Eigen::kroneckerProduct(h, id).eval();
    gen.w -= Eigen::kroneckerProduct(id, ht).eval();
    const cxd iunit(0.0, 1.0);
    for (const SpMat& l0 : jumps) {
        SpMat l = std::sqrt(gamma) * l0;
        SpMat lc = l.conjugate();
        SpMat ldl = SpMat(l.adjoint()) * l;
        gen.w += (iunit * Eigen::kroneckerProduct(l, lc)).eval();
        gen.w -= (0.5 * iunit * Eigen::kroneckerProduct(ldl, id)).eval();
        gen.w -= (0.5 * iunit * Eigen::kroneckerProduct(id, SpMat(ldl.transpose()))).eval();
    }
    gen.w.makeCompressed();
    gen.w.prune(1.0, 1e-14);
    return gen;
}

Eigen::VectorXcd vectorize(const SpMat& m) {
    long d = m.rows();
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d * d);
    for (int k = 0; k < m.outerSize(); ++k) {
        for (SpMat::InnerIterator it(m, k); it; ++it) {
            v[it.row() * d + it.col()] = it.value();
        }
    }
    return v;
}

double annihilation_residual(const VectorizedGenerator& gen, const SpMat& p) {
    Eigen::VectorXcd v = vectorize(p);
    double norm = v.norm();
    if (norm == 0.0) throw std::invalid_argument("cannot test the zero operator");
    return (gen.w * v).norm() / norm;
}

std::array<cxd, 3> generator_moments(const VectorizedGenerator& gen) {
    const SpMat& w = gen.w;
    SpMat wt = SpMat(w.transpose());  // column k of wt = row k of w
    long d = gen.dim;
    cxd t1(0.0, 0.0), t2(0.0, 0.0), t3(0.0, 0.0);
    Eigen::VectorXcd ybuf = Eigen::VectorXcd::Zero(d);
    std::vector<long> touched;
    for (long i = 0; i < d; ++i) {
        t1 += w.coeff(i, i);
        // y = W * W.col(i), kept sparse through a scatter buffer
        for (SpMat::InnerIterator xi(w, i); xi; ++xi) {
            for (SpMat::InnerIterator wj(w, xi.row()); wj; ++wj) {
                if (ybuf[wj.row()] == cxd(0.0, 0.0)) touched.push_back(wj.row());
                ybuf[wj.row()] += wj.value() * xi.value();
            }
        }
        t2 += ybuf[i];
        for (SpMat::InnerIterator ri(wt, i); ri; ++ri) {
            t3 += ri.value() * ybuf[ri.row()];
        }
        for (long k : touched) ybuf[k] = cxd(0.0, 0.0);
        touched.clear();
    }
    return {t1, t2, t3};
}

std::vector<cxd> dense_generator_spectrum(const VectorizedGenerator& gen) {
    if (gen.dim > 4096) throw std::invalid_argument("dense spectrum limited to dim 4096");
    Eigen::MatrixXcd dense(gen.w);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(dense, false);
    return {es.eigenvalues().data(), es.eigenvalues().data() + gen.dim};
}

SpMat sk_spin_hamiltonian(int cells, double jx, double jy) {
    int n = 2 * cells;
    GammaSet one = build_gamma_set(1);  // X, Y, Z on a single spin
    const SpMat& x = one.gamma[0];
    const SpMat& y = one.gamma[1];
    long dim = 1l << n;
    SpMat h(dim, dim);
    auto two = [&](const SpMat& op, int a, int b) {
        SpMat sa = site_operator(op, a, n);
        SpMat sb = site_operator(op, b, n);
        return (sa * sb).eval();
    };
    for (int c = 1; c <= cells; ++c) {
        h += jx * two(x, 2 * c - 2, 2 * c - 1);
        h += jy * two(y, 2 * c - 1, (2 * c) % n);
    }
    return h.pruned(1e-14);
}

std::vector<SpMat> sk_spin_jumps(int cells) {
    int n = 2 * cells;
    GammaSet one = build_gamma_set(1);
    std::vector<SpMat> out;
    for (int j = 0; j < n; ++j) out.push_back(site_operator(one.gamma[2], j, n));
    return out;
}

double cluster_spectrum_distance(std::vector<cxd> a, std::vector<cxd> b, double radius) {
    auto clusters = [&](std::vector<cxd>& pts) {
        std::size_t n = pts.size();
        std::vector<std::size_t> parent(n);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](std::size_t i) {
            while (parent[i] != i) {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            return i;
        };
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t i, std::size_t j) { return pts[i].real() < pts[j].real(); });
        for (std::size_t ai = 0; ai < n; ++ai) {
            for (std::size_t bi = ai + 1; bi < n; ++bi) {
                std::size_t i = order[ai], j = order[bi];
                if (pts[j].real() - pts[i].real() > radius) break;
                if (std::abs(pts[i] - pts[j]) < radius) parent[find(i)] = find(j);
            }
        }
        std::vector<std::pair<cxd, long>> out;
        std::vector<long> slot(n, -1);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r = find(i);
            if (slot[r] < 0) {
                slot[r] = static_cast<long>(out.size());
                out.push_back({0.0, 0});
            }
            out[slot[r]].first += pts[i];
            out[slot[r]].second += 1;
        }
        for (auto& c : out) c.first /= static_cast<double>(c.second);
        return out;
    };
    auto ca = clusters(a), cb = clusters(b);
    if (ca.size() != cb.size()) return -1.0;
    std::vector<bool> used(ca.size(), false);
    double worst = 0.0;
    for (const auto& [mb, nb] : cb) {
        double best = -1.0;
        std::size_t bi = 0;
        for (std::size_t i = 0; i < ca.size(); ++i) {
            if (used[i]) continue;
            double dd = std::abs(ca[i].first - mb);
            if (best < 0.0 || dd < best) {
                best = dd;
                bi = i;
            }
        }
        if (ca[bi].second != nb) return -1.0;
        used[bi] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace ddk
