// End-to-end acceptance checks. Each criterion prints a single PASS/FAIL
// line; the exit status is the number of failures. Expected numbers are
// frozen from independent cross-checks (dense diagonalization of the
// vectorized generator, blocked by joint flux eigenspaces, agrees with the
// sector machinery on every one of them).
//
// Run with --slow to execute only the long stochastic search check on the
// larger lattices.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ddk/clifford.hpp"
#include "ddk/gap_search.hpp"
#include "ddk/gauge.hpp"
#include "ddk/lattice.hpp"
#include "ddk/liouville.hpp"
#include "ddk/perturbation.hpp"
#include "ddk/spectrum.hpp"

using namespace ddk;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::cout << "criterion " << criterion << ": " << (pass ? "PASS" : "FAIL") << " -- "
              << detail << "\n";
    if (!pass) ++failures;
}

SectorId sectorFromCode(const LatticeGeometry& g, long code) {
    int nb = SectorId::bitCount(g);
    SectorId id{g.nx, g.ny, std::vector<std::uint8_t>(nb, 0)};
    for (int b = 0; b < nb; ++b) id.bits[b] = static_cast<std::uint8_t>((code >> b) & 1);
    return id;
}

struct ZeroModeCensus {
    long total{0}, stationarySectors{0}, otherSectors{0};
};

ZeroModeCensus zeroModeCensus(const LatticeGeometry& g, const CouplingParams& J, double gamma) {
    ZeroModeCensus c;
    long sectors = 1l << SectorId::bitCount(g);
    for (long code = 0; code < sectors; ++code) {
        SectorId id = sectorFromCode(g, code);
        SectorResult r = sector_gap(g, J, gauge_from_sector(g, id), gamma);
        if (r.zeroModeCount == 0) continue;
        c.total += r.zeroModeCount;
        if (ness_flux_conditions(g, fluxes_from_sector(g, id))) {
            c.stationarySectors += r.zeroModeCount;
        } else {
            c.otherSectors += r.zeroModeCount;
        }
    }
    return c;
}

std::string fmt(double x) {
    std::ostringstream out;
    out.precision(10);
    out << x;
    return out.str();
}

void criterion1() {
    ZeroModeCensus c = zeroModeCensus(LatticeGeometry(2, 2), CouplingParams{3, 4, 1, 2}, 1.0);
    bool pass = c.total == 32 && c.stationarySectors == 32 && c.otherSectors == 0;
    report(1, pass,
           "J=(3,4,1,2): " + std::to_string(c.total) +
               " zero modes, all in stationary-flux sectors (expected 32)");
}

void criterion2() {
    ZeroModeCensus c = zeroModeCensus(LatticeGeometry(2, 2), CouplingParams{1, 1, 1, 1}, 1.0);
    bool pass = c.total == 162 && c.stationarySectors == 32 && c.otherSectors == 130;
    report(2, pass,
           "J=(1,1,1,1): " + std::to_string(c.total) + " zero modes = " +
               std::to_string(c.stationarySectors) + " in stationary-flux sectors + " +
               std::to_string(c.otherSectors) +
               " in sectors violating the stationarity conditions (expected 162 = 32 + 130)");
}

void criterion3() {
    LatticeGeometry g(2, 2);
    bool pass = true;

    std::vector<double> gridA{0.5, 1.0, 1.5, 1.9, 2.0, 2.1, 2.2, 2.3, 2.5, 3.0, 5.0, 10.0};
    GapCurve a = exhaustive_sweep(g, CouplingParams{1, 1, 1, 1}, gridA);
    double peakA = 0.0, bestA = -1.0;
    for (const GapPoint& p : a.points) {
        if (p.degeneracy != 16) pass = false;
        if (p.gap > bestA) {
            bestA = p.gap;
            peakA = p.gamma;
        }
    }
    if (std::abs(a.points[1].gap - 0.3592811155) > 1e-9) pass = false;
    if (peakA < 1.9 || peakA > 2.5) pass = false;

    std::vector<double> gridB{0.5, 1.0, 3.0, 5.0, 6.0, 7.0, 8.0, 10.0, 20.0};
    GapCurve b = exhaustive_sweep(g, CouplingParams{3, 4, 1, 2}, gridB);
    double peakB = 0.0, bestB = -1.0;
    for (const GapPoint& p : b.points) {
        if (p.degeneracy != 2) pass = false;
        if (p.gap > bestB) {
            bestB = p.gap;
            peakB = p.gamma;
        }
    }
    if (std::abs(b.points[3].gap - 0.1630175353) > 1e-9) pass = false;
    if (peakB < 5.0 || peakB > 9.0) pass = false;

    report(3, pass,
           "first-decay degeneracy 16 (J=1) / 2 (J=(3,4,1,2)) at every gamma; gap maxima at "
           "gamma = " +
               fmt(peakA) + " / " + fmt(peakB));
}

void criterion4() {
    LatticeGeometry g(2, 2);
    CouplingParams J{1, 1, 1, 1};
    GapCurve curve = exhaustive_sweep(
        g, J, {0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 0.1,
               5.0, 8.75, 12.5, 16.25, 20.0});
    AsymptoticFit fit = fit_asymptotics(curve);
    bool pass = std::abs(fit.smallGammaSlope - 0.42228) < 0.42228 * 0.02;
    for (const GapPoint& p : curve.points) {
        if (p.gamma > 0.1) continue;
        if (std::abs(p.gap - fit.smallGammaSlope * p.gamma) > 0.02 * p.gap) pass = false;
    }
    if (std::abs(fit.largeGammaExponent + 0.903) > 0.02) pass = false;
    GapCurve tail = exhaustive_sweep(g, J, {80.0});
    double coeff = tail.points[0].gap * 80.0;
    if (std::abs(coeff - 2.0) > 0.01) pass = false;
    report(4, pass,
           "small-gamma slope " + fmt(fit.smallGammaSlope) +
               " (linear within 2%); log-log slope over [5,20] " + fmt(fit.largeGammaExponent) +
               "; gamma*gap at gamma=80 is " + fmt(coeff) + " (limit 2)");
}

void criterion5() {
    struct Params {
        double jx, jy, g;
    };
    bool pass = true;
    double worstAll = 0.0;
    for (Params p : {Params{1, 1, 0}, {1, 1, 0.5}, {1, 2, 1}}) {
        VectorizedGenerator gen =
            build_vectorized_generator(sk_spin_hamiltonian(2, p.jx, p.jy), sk_spin_jumps(2), p.g);
        std::vector<cxd> dense = dense_generator_spectrum(gen);
        std::vector<cxd> assembled;
        for (unsigned code = 0; code < (1u << 5); ++code) {
            LadderLinks l = sk_sector_links(2, code);
            RapiditySet r = compute_rapidities(
                assemble_sk_structure_matrix(2, p.jx, p.jy, p.g, l.bottom, l.top, l.rungs));
            for (cxd e : sector_spectrum(r)) assembled.push_back(e);
        }
        if (assembled.size() != dense.size()) {
            pass = false;
            continue;
        }
        double worst = cluster_spectrum_distance(dense, assembled, 1e-3);
        if (worst < 0.0 || worst > 1e-8) pass = false;
        worstAll = std::max(worstAll, worst);
    }
    report(5, pass,
           "ladder dense diagonalization matches the sector assembly, worst cluster distance " +
               fmt(worstAll));
}

void criterion6() {
    LatticeGeometry g(2, 2);
    CouplingParams J{1, 1, 1, 1};
    double gamma = 1.0;
    ModelOperators ops = build_model_operators(g, J);
    VectorizedGenerator gen = build_vectorized_generator(ops.hamiltonian, ops.jumps, gamma);
    std::array<cxd, 3> moments = generator_moments(gen);

    std::array<cxd, 3> sums{};
    long sectors = 1l << SectorId::bitCount(g);
    for (long code = 0; code < sectors; ++code) {
        RapiditySet r = compute_rapidities(assemble_structure_matrix(
            g, J, gauge_from_sector(g, sectorFromCode(g, code)), gamma));
        for (cxd e : sector_spectrum(r)) {
            cxd p = e;
            for (int m = 0; m < 3; ++m) {
                sums[m] += p;
                p *= e;
            }
        }
    }
    bool pass = true;
    double worstRel = 0.0;
    for (int m = 0; m < 3; ++m) {
        double rel = std::abs(moments[m] - sums[m]) / std::max(1.0, std::abs(moments[m]));
        worstRel = std::max(worstRel, rel);
        if (rel > 1e-8) pass = false;
    }

    std::vector<SpMat> projectors = flux_projectors(ops);
    if (projectors.size() != 32) pass = false;
    double worstResidual = 0.0;
    for (const SpMat& p : projectors) {
        worstResidual = std::max(worstResidual, annihilation_residual(gen, p));
    }
    if (worstResidual > 1e-9) pass = false;
    report(6, pass,
           "trace moments match sector sums (worst rel " + fmt(worstRel) +
               "); all 32 flux projectors annihilated (worst residual " + fmt(worstResidual) +
               ")");
}

void criterion7() {
    LatticeGeometry g(2, 2);
    bool pass = true;

    GaugeField uniform(g);
    OrthogonalBlockDecomposition dec =
        block_diagonalize(coupling_matrix(g, CouplingParams{3, 4, 1, 2}, uniform));
    ClassicalMasterMatrix master = classical_master_matrix(dec, g);
    Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(master.m).eigenvalues();
    std::vector<double> closed = uniform_master_spectrum(g);
    std::sort(closed.begin(), closed.end());
    if (static_cast<long>(closed.size()) != ev.size()) pass = false;
    for (long i = 0; pass && i < ev.size(); ++i) {
        if (std::abs(ev[i] - closed[i]) > 1e-9) pass = false;
    }

    if (single_flip_rate(g) != -2.0) pass = false;

    int minS = min_nonzero_s(g);
    if (minS != 4) pass = false;

    LatticeGeometry big(4, 4);
    std::vector<int> q(big.sites(), 1);
    q[0] = 2;  // one defective site label
    if (s_eigenvalue(big, q) != 4) pass = false;

    for (double s : {2.0, 4.0, 8.0}) {
        for (double gamma : {0.5, 2.0, 10.0}) {
            auto [w1, w2] = large_gamma_rates(s, gamma);
            for (cxd w : {w1, w2}) {
                if (std::abs(w * w + 4.0 * gamma * w + 2.0 * s) > 1e-12) pass = false;
            }
        }
    }
    report(7, pass,
           "uniform master spectrum matches the closed form; single-flip rate -2; smallest "
           "nonzero label stiffness " +
               std::to_string(minS) + " (2x2) and 4 for a single 4x4 defect; strong-damping "
               "rates satisfy their quadratic");
}

void criterion8() {
    LatticeGeometry g(2, 2);
    CouplingParams J{1, 1, 1, 1};
    std::vector<double> gammas{0.2, 1.0, 2.5, 10.0};
    GapCurve exact = exhaustive_sweep(g, J, gammas);
    bool pass = true;
    int retries = 0;
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        bool hit = false;
        for (std::uint64_t seed = 1; seed <= 2 && !hit; ++seed) {
            GAConfig cfg;
            cfg.rngSeed = seed;
            double best = std::numeric_limits<double>::infinity();
            for (const RunRecord& rec : genetic_algorithm(g, J, gammas[i], cfg)) {
                best = std::min(best, rec.bestGap);
            }
            hit = std::abs(best - exact.points[i].gap) <= 1e-12;
            if (!hit) ++retries;
        }
        if (!hit) pass = false;
    }
    report(8, pass,
           "pooled GA minimum equals the exhaustive gap at " + std::to_string(gammas.size()) +
               " gammas (" + std::to_string(retries) + " retries)");
}

void criterion10() {
    bool pass = true;
    LatticeGeometry g(2, 2);
    std::mt19937_64 rng(11);

    // Sector chart round trip and constraint identities on random data.
    for (int trial = 0; trial < 200; ++trial) {
        long code = static_cast<long>(rng() & ((1l << SectorId::bitCount(g)) - 1));
        SectorId id = sectorFromCode(g, code);
        FluxData f = fluxes_from_sector(g, id);
        try {
            check_fluxes(g, f);
        } catch (...) {
            pass = false;
        }
        if (!(sector_from_fluxes(g, f) == id)) pass = false;

        GaugeField u = random_gauge(g, rng);
        FluxData fu = compute_fluxes(g, u);
        try {
            check_fluxes(g, fu);
        } catch (...) {
            pass = false;
        }
        if (!(compute_fluxes(g, fix_gauge(g, fu)) == fu)) pass = false;
    }

    // Structure matrix antisymmetry, spectrum closure under E -> -conj(E),
    // rate nonnegativity, greedy vs enumerative gap.
    for (CouplingParams J : {CouplingParams{1, 1, 1, 1}, CouplingParams{3, 4, 1, 2}}) {
        for (int trial = 0; trial < 128; ++trial) {
            double gamma = 0.1 + 0.01 * static_cast<double>(rng() % 300);
            GaugeField u = random_gauge(g, rng);
            StructureMatrix m = assemble_structure_matrix(g, J, u, gamma);
            if ((m.a + m.a.transpose()).norm() > 1e-13) pass = false;

            RapiditySet r = compute_rapidities(m);
            std::vector<cxd> spec = sector_spectrum(r);
            std::vector<cxd> mirrored;
            for (cxd e : spec) mirrored.push_back(-std::conj(e));
            if (cluster_spectrum_distance(spec, mirrored, 1e-6) > 1e-9) pass = false;

            double tol = r.zeroTol();
            double least = std::numeric_limits<double>::infinity();
            long zeros = 0;
            for (cxd e : spec) {
                double rate = -e.imag();
                if (rate < -1e-9) pass = false;
                if (std::abs(e) <= tol) {
                    ++zeros;
                } else if (rate < least) {
                    least = rate;
                }
            }
            SectorResult sr = sector_gap(r);
            double enumerated = std::isinf(least) ? 0.0 : least;
            if (std::abs(sr.minNonzeroRate - enumerated) > std::max(1e-9, 10.0 * tol)) {
                pass = false;
            }
            if (sr.zeroModeCount != zeros) pass = false;
        }
    }
    report(10, pass,
           "gauge round trips, closure identities, antisymmetry, spectral mirror symmetry, "
           "nonnegative rates, greedy gap == enumerated gap on random sectors");
}

// Long stochastic search on the larger lattices: pooled GA curves must place
// the change of the slowest-decay sector at the expected gamma, and the curve
// must rise linearly at small gamma and fall off as 1/gamma.
void criterion9() {
    struct Scale {
        int n;
        std::vector<double> grid;
        std::vector<std::pair<double, double>> windows;  // expected boundary +- tolerance
    };
    std::vector<Scale> scales{
        {4, parse_gamma_grid("0.21:0.61:0.05"), {{0.41, 0.05}}},
        {6, parse_gamma_grid("0.21:0.56:0.025"), {{0.36, 0.05}, {0.41, 0.05}}},
    };
    bool pass = true;
    for (const Scale& s : scales) {
        LatticeGeometry g(s.n, s.n);
        CouplingParams J{1, 1, 1, 1};
        std::vector<SectorId> pool;
        for (double gamma : s.grid) {
            GAConfig cfg;
            cfg.rngSeed = 1;
            double best = std::numeric_limits<double>::infinity();
            for (const RunRecord& rec : genetic_algorithm(g, J, gamma, cfg)) {
                pool.push_back(rec.bestSector);
                best = std::min(best, rec.bestGap);
            }
            std::cout << "  " << s.n << "x" << s.n << " gamma " << gamma << ": best gap " << best
                      << std::endl;
        }

        GapCurve curve = pooled_curve(g, J, s.grid, pool);
        std::ostringstream bounds;
        for (double b : curve.boundaries) bounds << " " << b;
        std::cout << "  " << s.n << "x" << s.n << " boundaries:" << bounds.str() << "\n";
        for (auto [center, tol] : s.windows) {
            bool found = false;
            for (double b : curve.boundaries) {
                if (std::abs(b - center) <= tol) found = true;
            }
            if (!found) pass = false;
        }

        GapCurve shape =
            pooled_curve(g, J, {0.02, 0.04, 0.06, 0.08, 0.1, 5.0, 10.0, 20.0}, pool);
        AsymptoticFit fit = fit_asymptotics(shape);
        std::cout << "  " << s.n << "x" << s.n << " small-gamma slope " << fit.smallGammaSlope
                  << ", large-gamma exponent " << fit.largeGammaExponent << "\n";
        if (fit.smallGammaSlope <= 0.0) pass = false;
        for (const GapPoint& p : shape.points) {
            if (p.gamma > 0.1) continue;
            if (std::abs(p.gap - fit.smallGammaSlope * p.gamma) > 0.1 * p.gap) pass = false;
        }
        if (std::abs(fit.largeGammaExponent + 1.0) > 0.15) pass = false;
    }
    report(9, pass, "pooled GA regime boundaries and curve shape at 4x4 / 6x6");
}

}  // namespace

int main(int argc, char** argv) {
    bool slow = argc > 1 && std::strcmp(argv[1], "--slow") == 0;
    std::cout.precision(12);
    if (slow) {
        criterion9();
    } else {
        criterion1();
        criterion2();
        criterion3();
        criterion4();
        criterion5();
        criterion6();
        criterion7();
        criterion8();
        std::cout << "criterion 9: SKIPPED -- long stochastic search; run with --slow\n";
        criterion10();
    }
    return failures;
}
