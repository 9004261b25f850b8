#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ddk/gauge.hpp"
#include "ddk/lattice.hpp"
#include "ddk/spectrum.hpp"

namespace ddk {

/// One sample of the gap curve: the smallest nonzero relaxation rate over the
/// searched sectors, the first sector attaining it, and how many do.
struct GapPoint {
    double gamma{0.0};
    double gap{0.0};
    SectorId argmin;
    std::int64_t degeneracy{0};
};

struct GapCurve {
    std::vector<GapPoint> points;
    /// Midpoints between adjacent grid gammas whose argmin flux data differ.
    std::vector<double> boundaries;
};

/// Parse "start:stop:step" into an inclusive grid.
std::vector<double> parse_gamma_grid(const std::string& text);

/// 0.01 .. 1.01 in steps of 0.05, optionally followed by a log-spaced tail
/// up to gamma = 20 for asymptotic fits.
std::vector<double> default_gamma_grid(bool logTail = true);

/// Exact minimum over all 2^(3N+1) flux sectors at every gamma. Guarded to
/// at most 16 sector bits (the 2x2 lattice).
GapCurve exhaustive_sweep(const LatticeGeometry& g, const CouplingParams& J,
                          const std::vector<double>& gammas);

/// Minimum over all sectors whose gauge-invariant data differ from the
/// reference in at most nv coordinates (subsets guarded to 1e8).
GapCurve nv_limited_search(const LatticeGeometry& g, const CouplingParams& J,
                           const std::vector<double>& gammas, int nv, const FluxData& reference);

struct GAConfig {
    int populationSize{100};
    int runs{10};
    int generations{200};
    double mutationRate{-1.0};  // negative: use 2 / (bit count)
    double crossoverRate{0.7};
    int elitism{2};
    int tournament{2};
    std::uint64_t rngSeed{1};
};

struct RunRecord {
    double gamma{0.0};
    std::uint64_t seed{0};
    std::vector<double> trace;  // best gap after each generation
    SectorId bestSector;
    double bestGap{0.0};
};

/// Independent tournament-selection GA runs over sector bit strings at a
/// fixed gamma; deterministic given the seed.
std::vector<RunRecord> genetic_algorithm(const LatticeGeometry& g, const CouplingParams& J,
                                         double gamma, const GAConfig& cfg);

struct SAConfig {
    int steps{20000};
    double startTemperature{0.5};
    double cooling{0.9995};  // geometric
    int traceEvery{100};
    std::uint64_t rngSeed{1};
};

/// Single-bit-flip annealing over sector bit strings at a fixed gamma.
RunRecord simulated_annealing(const LatticeGeometry& g, const CouplingParams& J, double gamma,
                              const SAConfig& cfg);

/// Evaluate every pooled sector at every gamma and keep the minimum.
GapCurve pooled_curve(const LatticeGeometry& g, const CouplingParams& J,
                      const std::vector<double>& gammas, const std::vector<SectorId>& pool);

struct AsymptoticFit {
    double smallGammaSlope{0.0};      // least squares through the origin, gamma <= 0.1
    double largeGammaExponent{0.0};   // log-log slope, gamma >= 5
    double largeGammaCoefficient{0.0};
};

AsymptoticFit fit_asymptotics(const GapCurve& curve);

void write_gap_curve_csv(const GapCurve& curve, std::ostream& out);
std::string run_records_json(const std::vector<RunRecord>& records);

}  // namespace ddk
