#include <sstream>

#include "ddk/gap_search.hpp"
#include "doctest.h"

using namespace ddk;

namespace {

double evalSector(const LatticeGeometry& g, const CouplingParams& J, const SectorId& id,
                  double gamma) {
    return sector_gap(g, J, gauge_from_sector(g, id), gamma).minNonzeroRate;
}

}  // namespace

TEST_CASE("gamma grid parsing") {
    std::vector<double> grid = parse_gamma_grid("0.5:1.5:0.25");
    REQUIRE(grid.size() == 5);
    CHECK(grid.front() == doctest::Approx(0.5));
    CHECK(grid.back() == doctest::Approx(1.5));
    CHECK_THROWS(parse_gamma_grid("1:0:0.1"));
    CHECK_THROWS(parse_gamma_grid("nonsense"));

    std::vector<double> dflt = default_gamma_grid();
    CHECK(dflt.front() == doctest::Approx(0.01));
    CHECK(dflt.back() == doctest::Approx(20.0));
    int nSmall = 0, nLarge = 0;
    for (double gamma : dflt) {
        if (gamma <= 0.1) ++nSmall;
        if (gamma >= 5.0) ++nLarge;
    }
    CHECK(nSmall >= 2);
    CHECK(nLarge >= 4);
}

TEST_CASE("asymptotic fits recover synthetic laws") {
    GapCurve curve;
    for (double gamma : default_gamma_grid()) {
        GapPoint p;
        p.gamma = gamma;
        p.gap = gamma <= 1.0 ? 3.0 * gamma : 7.0 / gamma;
        curve.points.push_back(p);
    }
    AsymptoticFit fit = fit_asymptotics(curve);
    CHECK(fit.smallGammaSlope == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(fit.largeGammaExponent == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(fit.largeGammaCoefficient == doctest::Approx(7.0).epsilon(1e-10));

    GapCurve tooNarrow;
    tooNarrow.points.push_back({0.05, 0.05, {}, 1});
    CHECK_THROWS(fit_asymptotics(tooNarrow));
}

TEST_CASE("exhaustive sweep reports realizable minima") {
    LatticeGeometry g(2, 2);
    CouplingParams J{3, 4, 1, 2};
    GapCurve curve = exhaustive_sweep(g, J, {0.0, 0.2, 2.0});
    REQUIRE(curve.points.size() == 3);
    CHECK(curve.points[0].gap == doctest::Approx(0.0));
    for (const GapPoint& p : curve.points) {
        CHECK(p.gap >= 0.0);
        CHECK(p.degeneracy >= 1);
        CHECK(evalSector(g, J, p.argmin, p.gamma) == doctest::Approx(p.gap).epsilon(1e-12));
    }
    CHECK(curve.points[1].gap > 0.0);
    CHECK_THROWS(exhaustive_sweep(LatticeGeometry(4, 4), J, {0.5}));
}

TEST_CASE("defect-limited search refines toward the exhaustive sweep") {
    LatticeGeometry g(2, 2);
    CouplingParams J{3, 4, 1, 2};
    FluxData ref = fiducial_fluxes(g);
    std::vector<double> gammas{0.3, 1.0};

    GapCurve zero = nv_limited_search(g, J, gammas, 0, ref);
    SectorId refSector = sector_from_fluxes(g, ref);
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        CHECK(zero.points[i].argmin == refSector);
        CHECK(zero.points[i].gap ==
              doctest::Approx(evalSector(g, J, refSector, gammas[i])).epsilon(1e-12));
    }

    GapCurve one = nv_limited_search(g, J, gammas, 1, ref);
    GapCurve two = nv_limited_search(g, J, gammas, 2, ref);
    GapCurve full = nv_limited_search(g, J, gammas, 14, ref);
    GapCurve exact = exhaustive_sweep(g, J, gammas);
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        CHECK(one.points[i].gap <= zero.points[i].gap + 1e-12);
        CHECK(two.points[i].gap <= one.points[i].gap + 1e-12);
        CHECK(full.points[i].gap == doctest::Approx(exact.points[i].gap).epsilon(1e-12));
        CHECK(full.points[i].degeneracy == exact.points[i].degeneracy);
    }
}

TEST_CASE("genetic algorithm is deterministic and respects elitism") {
    LatticeGeometry g(2, 2);
    CouplingParams J{1, 1, 1, 1};
    GAConfig cfg;
    cfg.populationSize = 12;
    cfg.runs = 2;
    cfg.generations = 8;
    cfg.rngSeed = 7;
    std::vector<RunRecord> a = genetic_algorithm(g, J, 0.4, cfg);
    std::vector<RunRecord> b = genetic_algorithm(g, J, 0.4, cfg);
    REQUIRE(a.size() == 2);
    CHECK(a[0].seed != a[1].seed);
    for (std::size_t r = 0; r < a.size(); ++r) {
        CHECK(a[r].trace == b[r].trace);
        CHECK(a[r].bestSector == b[r].bestSector);
        CHECK(a[r].bestGap == b[r].bestGap);
        for (std::size_t i = 1; i < a[r].trace.size(); ++i) {
            CHECK(a[r].trace[i] <= a[r].trace[i - 1] + 1e-15);
        }
        CHECK(evalSector(g, J, a[r].bestSector, 0.4) ==
              doctest::Approx(a[r].bestGap).epsilon(1e-12));
    }
}

TEST_CASE("simulated annealing finds the exhaustive minimum on the small lattice") {
    LatticeGeometry g(2, 2);
    CouplingParams J{1, 1, 1, 1};
    double gamma = 0.4;
    SAConfig cfg;
    cfg.steps = 20000;
    cfg.rngSeed = 3;
    RunRecord rec = simulated_annealing(g, J, gamma, cfg);
    RunRecord again = simulated_annealing(g, J, gamma, cfg);
    CHECK(rec.bestGap == again.bestGap);
    CHECK(rec.bestSector == again.bestSector);

    GapCurve exact = exhaustive_sweep(g, J, {gamma});
    CHECK(rec.bestGap == doctest::Approx(exact.points[0].gap).epsilon(1e-10));
}

TEST_CASE("pooled curve over the exhaustive argmins reproduces the exhaustive curve") {
    LatticeGeometry g(2, 2);
    CouplingParams J{3, 4, 1, 2};
    std::vector<double> gammas{0.2, 0.6, 1.4};
    GapCurve exact = exhaustive_sweep(g, J, gammas);
    std::vector<SectorId> pool;
    for (const GapPoint& p : exact.points) pool.push_back(p.argmin);
    pool.push_back(pool.front());  // duplicates must be tolerated
    GapCurve pooled = pooled_curve(g, J, gammas, pool);
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        CHECK(pooled.points[i].gap == doctest::Approx(exact.points[i].gap).epsilon(1e-12));
    }
    CHECK_THROWS(pooled_curve(g, J, gammas, {}));
}

TEST_CASE("gap curve serialization") {
    GapCurve curve;
    GapPoint p;
    p.gamma = 0.25;
    p.gap = 1.0 / 3.0;
    p.argmin = SectorId{2, 2, std::vector<std::uint8_t>(13, 0)};
    p.argmin.bits[0] = 1;
    p.degeneracy = 4;
    curve.points.push_back(p);
    std::ostringstream out;
    write_gap_curve_csv(curve, out);
    CHECK(out.str() ==
          "gamma,gap,argmin_sector_hex,degeneracy\n"
          "0.25,0.33333333333333331,0001,4\n");

    RunRecord rec;
    rec.gamma = 0.25;
    rec.seed = 9;
    rec.trace = {0.5, 0.25};
    rec.bestSector = p.argmin;
    rec.bestGap = 0.25;
    std::string json = run_records_json({rec});
    CHECK(json.find("\"best_sector\": \"0001\"") != std::string::npos);
    CHECK(json.find("\"seed\": 9") != std::string::npos);
}
