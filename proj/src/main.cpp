#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ddk/gap_search.hpp"
#include "ddk/gauge.hpp"
#include "ddk/lattice.hpp"
#include "ddk/liouville.hpp"
#include "ddk/perturbation.hpp"
#include "ddk/spectrum.hpp"

namespace {

using namespace ddk;

struct CommonOpts {
    std::string size{"2x2"};
    std::string couplings{"1,1,1,1"};
    std::string gammaSpec;
    bool gammaLog{false};
    std::uint64_t seed{1};
    int threads{1};
    std::string outDir{"."};
};

LatticeGeometry parseSize(const std::string& text) {
    int nx = 0, ny = 0;
    if (std::sscanf(text.c_str(), "%dx%d", &nx, &ny) != 2) {
        throw CLI::ValidationError("--size", "expected WxH, e.g. 2x2");
    }
    return LatticeGeometry(nx, ny);
}

CouplingParams parseCouplings(const std::string& text) {
    CouplingParams J;
    if (std::sscanf(text.c_str(), "%lf,%lf,%lf,%lf", &J.j1, &J.j2, &J.j3, &J.j4) != 4) {
        throw CLI::ValidationError("--J", "expected four comma-separated couplings");
    }
    return J;
}

std::vector<double> gammaGrid(const CommonOpts& o) {
    if (o.gammaSpec.empty()) return default_gamma_grid(o.gammaLog);
    std::vector<double> grid = parse_gamma_grid(o.gammaSpec);
    if (o.gammaLog) {
        for (double gamma : default_gamma_grid(true)) {
            if (gamma > grid.back() + 1e-12) grid.push_back(gamma);
        }
    }
    return grid;
}

void addCommon(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--size", o.size, "Lattice size WxH (both even)");
    cmd->add_option("--J", o.couplings, "Bond couplings J1,J2,J3,J4");
    cmd->add_option("--gamma", o.gammaSpec, "Gamma grid start:stop:step");
    cmd->add_flag("--gamma-log", o.gammaLog, "Append a log-spaced tail up to gamma=20");
    cmd->add_option("--seed", o.seed, "Random seed");
    cmd->add_option("--threads", o.threads, "Maximum worker count");
    cmd->add_option("--out", o.outDir, "Output directory");
}

std::ofstream openOutput(const CommonOpts& o, const std::string& name) {
    std::filesystem::create_directories(o.outDir);
    std::ofstream out(std::filesystem::path(o.outDir) / name);
    if (!out) throw std::runtime_error("cannot open output file " + name);
    return out;
}

void writeCurveFiles(const CommonOpts& o, const LatticeGeometry& g, const GapCurve& curve) {
    {
        std::ofstream csv = openOutput(o, "gap_curve.csv");
        write_gap_curve_csv(curve, csv);
    }
    std::ofstream defects = openOutput(o, "defects.txt");
    FluxData ref = fiducial_fluxes(g);
    char buf[64];
    for (const GapPoint& p : curve.points) {
        std::snprintf(buf, sizeof(buf), "%.17g", p.gamma);
        defects << "gamma=" << buf << " sector=" << p.argmin.hex() << " gap=";
        std::snprintf(buf, sizeof(buf), "%.17g", p.gap);
        defects << buf << "\n";
        std::vector<std::string> list = report_defects(g, fluxes_from_sector(g, p.argmin), ref);
        if (list.empty()) {
            defects << "  (no +1 defects)\n";
        } else {
            for (const std::string& d : list) defects << "  +1 " << d << "\n";
        }
    }
    std::cout << "wrote " << curve.points.size() << " gap samples to " << o.outDir
              << "/gap_curve.csv\n";
    if (!curve.boundaries.empty()) {
        std::cout << "regime boundaries:";
        for (double b : curve.boundaries) {
            std::snprintf(buf, sizeof(buf), " %.4g", b);
            std::cout << buf;
        }
        std::cout << "\n";
    }
}

void writeRecords(const CommonOpts& o, const std::vector<RunRecord>& records) {
    std::ofstream json = openOutput(o, "runs.json");
    json << run_records_json(records);
    std::cout << "wrote " << records.size() << " run records to " << o.outDir << "/runs.json\n";
}

int runSweep(const CommonOpts& o) {
    LatticeGeometry g = parseSize(o.size);
    GapCurve curve = exhaustive_sweep(g, parseCouplings(o.couplings), gammaGrid(o));
    writeCurveFiles(o, g, curve);
    return 0;
}

int runNv(const CommonOpts& o, int nv) {
    LatticeGeometry g = parseSize(o.size);
    GapCurve curve =
        nv_limited_search(g, parseCouplings(o.couplings), gammaGrid(o), nv, fiducial_fluxes(g));
    writeCurveFiles(o, g, curve);
    return 0;
}

int runGa(const CommonOpts& o, GAConfig cfg) {
    LatticeGeometry g = parseSize(o.size);
    CouplingParams J = parseCouplings(o.couplings);
    std::vector<double> grid = gammaGrid(o);
    std::vector<RunRecord> all;
    std::vector<SectorId> pool;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        cfg.rngSeed = o.seed + 0x51ed270b7a14f0ffull * i;
        for (RunRecord& rec : genetic_algorithm(g, J, grid[i], cfg)) {
            pool.push_back(rec.bestSector);
            all.push_back(std::move(rec));
        }
    }
    writeRecords(o, all);
    writeCurveFiles(o, g, pooled_curve(g, J, grid, pool));
    return 0;
}

int runSa(const CommonOpts& o, SAConfig cfg, int runs) {
    LatticeGeometry g = parseSize(o.size);
    CouplingParams J = parseCouplings(o.couplings);
    std::vector<double> grid = gammaGrid(o);
    std::vector<RunRecord> all;
    std::vector<SectorId> pool;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (int r = 0; r < runs; ++r) {
            cfg.rngSeed = o.seed + 0x51ed270b7a14f0ffull * i + 0x9e3779b97f4a7c15ull * r;
            RunRecord rec = simulated_annealing(g, J, grid[i], cfg);
            pool.push_back(rec.bestSector);
            all.push_back(std::move(rec));
        }
    }
    writeRecords(o, all);
    writeCurveFiles(o, g, pooled_curve(g, J, grid, pool));
    return 0;
}

int runPerturb(const CommonOpts& o, bool minS, bool singleFlip, bool spectrum) {
    LatticeGeometry g = parseSize(o.size);
    if (minS) std::cout << "min nonzero s: " << min_nonzero_s(g) << "\n";
    if (singleFlip) std::cout << "single flip rate: " << single_flip_rate(g) << "\n";
    if (spectrum) {
        std::cout << "uniform-sector master spectrum:";
        for (double v : uniform_master_spectrum(g)) std::cout << ' ' << v;
        std::cout << "\n";
    }
    if (!minS && !singleFlip && !spectrum) {
        std::cout << "nothing to do: pass --min-s, --single-flip or --spectrum\n";
    }
    return 0;
}

int runEdCheck(const std::string& model, int cells, const CommonOpts& o, double jx, double jy,
               double gammaValue) {
    if (model == "sk-ladder") {
        VectorizedGenerator gen = build_vectorized_generator(sk_spin_hamiltonian(cells, jx, jy),
                                                             sk_spin_jumps(cells), gammaValue);
        std::vector<cxd> dense = dense_generator_spectrum(gen);
        int n = 2 * cells;
        std::vector<cxd> assembled;
        for (unsigned code = 0; code < (1u << (n + 1)); ++code) {
            LadderLinks l = sk_sector_links(cells, code);
            RapiditySet r = compute_rapidities(
                assemble_sk_structure_matrix(cells, jx, jy, gammaValue, l.bottom, l.top, l.rungs));
            for (cxd e : sector_spectrum(r)) assembled.push_back(e);
        }
        if (assembled.size() != dense.size()) {
            std::cout << "multiset size mismatch: " << dense.size() << " vs " << assembled.size()
                      << "\nFAIL\n";
            return 1;
        }
        double worst = cluster_spectrum_distance(dense, assembled, 1e-3);
        std::array<cxd, 3> moments = generator_moments(gen);
        bool ok = worst >= 0.0 && worst < 1e-8;
        std::cout << "eigenvalue multiset: " << dense.size()
                  << " values, worst cluster distance " << worst << "\n";
        for (int m = 0; m < 3; ++m) {
            cxd fromSpectrum(0.0, 0.0);
            for (cxd e : dense) {
                cxd p = e;
                for (int k = 0; k < m; ++k) p *= e;
                fromSpectrum += p;
            }
            double rel = std::abs(moments[m] - fromSpectrum) /
                         std::max(1.0, std::abs(moments[m]));
            std::cout << "Tr W^" << m + 1 << ": sparse " << moments[m] << ", spectrum sum "
                      << fromSpectrum << ", rel err " << rel << "\n";
            ok = ok && rel < 1e-8;
        }
        std::cout << (ok ? "PASS" : "FAIL") << "\n";
        return ok ? 0 : 1;
    }
    if (model == "bilayer") {
        LatticeGeometry g = parseSize(o.size);
        CouplingParams J = parseCouplings(o.couplings);
        ModelOperators ops = build_model_operators(g, J);
        VectorizedGenerator gen =
            build_vectorized_generator(ops.hamiltonian, ops.jumps, gammaValue);
        std::array<cxd, 3> moments = generator_moments(gen);

        std::array<cxd, 3> sums{};
        int nb = SectorId::bitCount(g);
        for (long code = 0; code < (1l << nb); ++code) {
            SectorId id{g.nx, g.ny, std::vector<std::uint8_t>(nb, 0)};
            for (int b = 0; b < nb; ++b) id.bits[b] = static_cast<std::uint8_t>((code >> b) & 1);
            RapiditySet r = compute_rapidities(
                assemble_structure_matrix(g, J, gauge_from_sector(g, id), gammaValue));
            for (cxd e : sector_spectrum(r)) {
                cxd p = e;
                for (int m = 0; m < 3; ++m) {
                    sums[m] += p;
                    p *= e;
                }
            }
        }
        bool ok = true;
        for (int m = 0; m < 3; ++m) {
            double rel =
                std::abs(moments[m] - sums[m]) / std::max(1.0, std::abs(moments[m]));
            std::cout << "Tr W^" << m + 1 << ": sparse " << moments[m] << ", sector sum "
                      << sums[m] << ", rel err " << rel << "\n";
            ok = ok && rel < 1e-8;
        }
        std::cout << (ok ? "PASS" : "FAIL") << "\n";
        return ok ? 0 : 1;
    }
    throw CLI::ValidationError("--model", "expected sk-ladder or bilayer");
}

int runReport(const CommonOpts& o, const std::string& sectorHex, const std::string& jsonFile) {
    LatticeGeometry g = parseSize(o.size);
    FluxData f;
    if (!jsonFile.empty()) {
        std::ifstream in(jsonFile);
        if (!in) throw std::runtime_error("cannot read " + jsonFile);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        f = flux_from_json(text);
    } else if (!sectorHex.empty()) {
        f = fluxes_from_sector(g, SectorId::fromHex(g, sectorHex));
    } else {
        throw CLI::ValidationError("report", "pass --sector HEX or --json FILE");
    }
    std::vector<std::string> list = report_defects(g, f, fiducial_fluxes(g));
    if (list.empty()) {
        std::cout << "(no +1 defects)\n";
    } else {
        for (const std::string& d : list) std::cout << "+1 " << d << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dissipative gauge-sector gap explorer"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a key=value file");

    CommonOpts o;
    int nv = 2;
    GAConfig gaCfg;
    SAConfig saCfg;
    int saRuns = 1;
    bool minS = false, singleFlip = false, spectrum = false;
    std::string model{"sk-ladder"};
    int cells = 2;
    double jx = 1.0, jy = 1.0, gammaValue = 0.5;
    std::string sectorHex, jsonFile;

    CLI::App* sweep = app.add_subcommand("sweep", "Exhaustive sector sweep (2x2 only)");
    addCommon(sweep, o);

    CLI::App* nvCmd = app.add_subcommand("nv", "Defect-limited sector search");
    addCommon(nvCmd, o);
    nvCmd->add_option("--nv", nv, "Maximum number of +1 defects");

    CLI::App* ga = app.add_subcommand("ga", "Genetic-algorithm search");
    addCommon(ga, o);
    ga->add_option("--pop", gaCfg.populationSize, "Population size");
    ga->add_option("--runs", gaCfg.runs, "Independent runs per gamma");
    ga->add_option("--generations", gaCfg.generations, "Generations per run");
    ga->add_option("--mutation", gaCfg.mutationRate, "Per-bit mutation rate");
    ga->add_option("--crossover", gaCfg.crossoverRate, "Crossover rate");
    ga->add_option("--elitism", gaCfg.elitism, "Elite count");

    CLI::App* sa = app.add_subcommand("sa", "Simulated-annealing search");
    addCommon(sa, o);
    sa->add_option("--steps", saCfg.steps, "Annealing steps");
    sa->add_option("--t0", saCfg.startTemperature, "Start temperature");
    sa->add_option("--cooling", saCfg.cooling, "Geometric cooling factor");
    sa->add_option("--runs", saRuns, "Independent runs per gamma");

    CLI::App* perturb = app.add_subcommand("perturb", "Perturbative limits");
    addCommon(perturb, o);
    perturb->add_flag("--min-s", minS, "Smallest nonzero label stiffness (exhaustive)");
    perturb->add_flag("--single-flip", singleFlip, "Single-flip master-matrix rate");
    perturb->add_flag("--spectrum", spectrum, "Uniform-sector master spectrum");

    CLI::App* edCheck = app.add_subcommand("ed-check", "Dense diagonalization crosscheck");
    addCommon(edCheck, o);
    edCheck->add_option("--model", model, "sk-ladder or bilayer");
    edCheck->add_option("--cells", cells, "Unit cells of the ladder");
    edCheck->add_option("--jx", jx, "Ladder X coupling");
    edCheck->add_option("--jy", jy, "Ladder Y coupling");
    edCheck->add_option("--gamma-value", gammaValue, "Dissipation strength");

    CLI::App* report = app.add_subcommand("report", "List +1 defects of a sector");
    addCommon(report, o);
    report->add_option("--sector", sectorHex, "Sector id in hex");
    report->add_option("--json", jsonFile, "Flux record JSON file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) return runSweep(o);
        if (nvCmd->parsed()) return runNv(o, nv);
        if (ga->parsed()) return runGa(o, gaCfg);
        if (sa->parsed()) return runSa(o, saCfg, saRuns);
        if (perturb->parsed()) return runPerturb(o, minS, singleFlip, spectrum);
        if (edCheck->parsed()) return runEdCheck(model, cells, o, jx, jy, gammaValue);
        if (report->parsed()) return runReport(o, sectorHex, jsonFile);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
