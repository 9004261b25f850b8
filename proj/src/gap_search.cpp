#include "ddk/gap_search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

namespace ddk {

namespace {

constexpr double kGapTol = 1e-9;

double evaluate(const LatticeGeometry& g, const CouplingParams& J, const SectorId& id,
                double gamma) {
    return sector_gap(g, J, gauge_from_sector(g, id), gamma).minNonzeroRate;
}

/// Minimum over a fixed pool of sectors at every gamma, with exact degeneracy
/// counts and regime boundaries from argmin changes.
GapCurve sweep_pool(const LatticeGeometry& g, const CouplingParams& J,
                    const std::vector<double>& gammas, const std::vector<SectorId>& pool) {
    if (pool.empty()) throw std::invalid_argument("sector pool is empty");
    GapCurve curve;
    std::vector<double> gaps(pool.size());
    for (double gamma : gammas) {
        for (std::size_t i = 0; i < pool.size(); ++i) gaps[i] = evaluate(g, J, pool[i], gamma);
        GapPoint p;
        p.gamma = gamma;
        std::size_t arg = 0;
        for (std::size_t i = 1; i < pool.size(); ++i) {
            if (gaps[i] < gaps[arg]) arg = i;
        }
        p.gap = gaps[arg];
        double band = kGapTol * std::max(1.0, std::abs(p.gap));
        // Among ties, keep the first pool entry: the argmin stays stable
        // across gamma when the minimizing set is degenerate.
        std::size_t first = arg;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (gaps[i] <= p.gap + band) {
                if (i < first) first = i;
                ++p.degeneracy;
            }
        }
        p.argmin = pool[first];
        curve.points.push_back(std::move(p));
    }
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        if (!(curve.points[i - 1].argmin == curve.points[i].argmin)) {
            curve.boundaries.push_back(0.5 *
                                       (curve.points[i - 1].gamma + curve.points[i].gamma));
        }
    }
    return curve;
}

std::vector<std::uint8_t> random_bits(int n, std::mt19937_64& rng) {
    std::vector<std::uint8_t> bits(n);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int i = 0; i < n; ++i) bits[i] = static_cast<std::uint8_t>(coin(rng));
    return bits;
}

struct FitnessMemo {
    const LatticeGeometry& g;
    const CouplingParams& J;
    double gamma;
    std::unordered_map<std::string, double> cache;

    double operator()(const std::vector<std::uint8_t>& bits) {
        std::string key(bits.begin(), bits.end());
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        SectorId id{g.nx, g.ny, bits};
        double v = evaluate(g, J, id, gamma);
        cache.emplace(std::move(key), v);
        return v;
    }
};

}  // namespace

std::vector<double> parse_gamma_grid(const std::string& text) {
    double start = 0.0, stop = 0.0, step = 0.0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 || step <= 0.0 ||
        stop < start) {
        throw std::invalid_argument("gamma grid must be start:stop:step with positive step");
    }
    std::vector<double> grid;
    for (int k = 0;; ++k) {
        double gamma = start + k * step;
        if (gamma > stop + 1e-12) break;
        grid.push_back(gamma);
    }
    return grid;
}

std::vector<double> default_gamma_grid(bool logTail) {
    std::vector<double> grid = parse_gamma_grid("0.01:1.01:0.05");
    if (logTail) {
        const int n = 12;
        double lo = std::log(1.5), hi = std::log(20.0);
        for (int k = 0; k < n; ++k) grid.push_back(std::exp(lo + (hi - lo) * k / (n - 1)));
    }
    return grid;
}

GapCurve exhaustive_sweep(const LatticeGeometry& g, const CouplingParams& J,
                          const std::vector<double>& gammas) {
    int nb = SectorId::bitCount(g);
    if (nb > 16) throw std::invalid_argument("exhaustive sweep limited to 16 sector bits");
    long total = 1l << nb;
    std::vector<SectorId> pool(total);
    for (long code = 0; code < total; ++code) {
        pool[code].nx = g.nx;
        pool[code].ny = g.ny;
        pool[code].bits.resize(nb);
        for (int b = 0; b < nb; ++b) pool[code].bits[b] = static_cast<std::uint8_t>((code >> b) & 1);
    }
    return sweep_pool(g, J, gammas, pool);
}

GapCurve nv_limited_search(const LatticeGeometry& g, const CouplingParams& J,
                           const std::vector<double>& gammas, int nv, const FluxData& reference) {
    check_fluxes(g, reference);
    int nc = g.cells();
    int m = 6 * nc + 2;  // free coordinates: Phi, Psi, Omega blocks + two Wilson signs
    int nPhi = 2 * nc;   // leading block, constrained to an even number of flips
    if (nv < 0 || nv > m) throw std::invalid_argument("defect budget out of range");

    double estimate = 0.0, choose = 1.0;
    for (int k = 0; k <= nv; ++k) {
        estimate += choose;
        choose = choose * (m - k) / (k + 1);
    }
    if (estimate > 1e8) throw std::invalid_argument("defect enumeration too large");

    std::vector<SectorId> pool;
    std::vector<int> subset;
    auto emit = [&]() {
        int phiFlips = 0;
        for (int c : subset) {
            if (c < nPhi) ++phiFlips;
        }
        if (phiFlips % 2 != 0) return;
        FluxData f = reference;
        std::vector<int>* arrays[] = {&f.phiP, &f.phiM, &f.psiP, &f.psiM, &f.omP, &f.omM};
        for (int c : subset) {
            if (c < 6 * nc) {
                (*arrays[c / nc])[c % nc] *= -1;
            } else if (c == 6 * nc) {
                f.wx *= -1;
            } else {
                f.wy *= -1;
            }
        }
        pool.push_back(sector_from_fluxes(g, complete_fluxes(g, f)));
    };
    auto recurse = [&](auto&& self, int next) -> void {
        emit();
        if (static_cast<int>(subset.size()) == nv) return;
        for (int c = next; c < m; ++c) {
            subset.push_back(c);
            self(self, c + 1);
            subset.pop_back();
        }
    };
    recurse(recurse, 0);
    return sweep_pool(g, J, gammas, pool);
}

std::vector<RunRecord> genetic_algorithm(const LatticeGeometry& g, const CouplingParams& J,
                                         double gamma, const GAConfig& cfg) {
    if (cfg.populationSize < 2) throw std::invalid_argument("population size must be at least 2");
    int nb = SectorId::bitCount(g);
    double mrate = cfg.mutationRate >= 0.0 ? cfg.mutationRate : 2.0 / nb;

    std::vector<RunRecord> records;
    for (int run = 0; run < cfg.runs; ++run) {
        std::uint64_t seed = cfg.rngSeed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(run);
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::uniform_int_distribution<int> pick(0, cfg.populationSize - 1);
        FitnessMemo fitness{g, J, gamma, {}};

        std::vector<std::vector<std::uint8_t>> pop(cfg.populationSize);
        std::vector<double> score(cfg.populationSize);
        for (auto& ind : pop) ind = random_bits(nb, rng);

        RunRecord rec;
        rec.gamma = gamma;
        rec.seed = seed;
        auto tournament = [&]() -> int {
            int best = pick(rng);
            for (int t = 1; t < cfg.tournament; ++t) {
                int c = pick(rng);
                if (score[c] < score[best]) best = c;
            }
            return best;
        };

        for (int gen = 0; gen <= cfg.generations; ++gen) {
            int bestIdx = 0;
            for (int i = 0; i < cfg.populationSize; ++i) {
                score[i] = fitness(pop[i]);
                if (score[i] < score[bestIdx]) bestIdx = i;
            }
            if (rec.trace.empty() || score[bestIdx] < rec.trace.back()) {
                rec.bestSector = SectorId{g.nx, g.ny, pop[bestIdx]};
                rec.bestGap = score[bestIdx];
            }
            rec.trace.push_back(rec.trace.empty() ? score[bestIdx]
                                                  : std::min(rec.trace.back(), score[bestIdx]));
            if (gen == cfg.generations) break;

            std::vector<std::vector<std::uint8_t>> next;
            next.reserve(cfg.populationSize);
            std::vector<int> order(cfg.populationSize);
            for (int i = 0; i < cfg.populationSize; ++i) order[i] = i;
            std::sort(order.begin(), order.end(),
                      [&](int a, int b) { return score[a] < score[b]; });
            for (int e = 0; e < cfg.elitism && e < cfg.populationSize; ++e) {
                next.push_back(pop[order[e]]);
            }
            while (static_cast<int>(next.size()) < cfg.populationSize) {
                const auto& p1 = pop[tournament()];
                const auto& p2 = pop[tournament()];
                std::vector<std::uint8_t> child = p1;
                if (unit(rng) < cfg.crossoverRate) {
                    for (int b = 0; b < nb; ++b) {
                        if (unit(rng) < 0.5) child[b] = p2[b];
                    }
                }
                for (int b = 0; b < nb; ++b) {
                    if (unit(rng) < mrate) child[b] ^= 1;
                }
                next.push_back(std::move(child));
            }
            pop = std::move(next);
        }
        records.push_back(std::move(rec));
    }
    return records;
}

RunRecord simulated_annealing(const LatticeGeometry& g, const CouplingParams& J, double gamma,
                              const SAConfig& cfg) {
    int nb = SectorId::bitCount(g);
    std::mt19937_64 rng(cfg.rngSeed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> flip(0, nb - 1);
    FitnessMemo fitness{g, J, gamma, {}};

    std::vector<std::uint8_t> state = random_bits(nb, rng);
    double current = fitness(state);

    RunRecord rec;
    rec.gamma = gamma;
    rec.seed = cfg.rngSeed;
    rec.bestSector = SectorId{g.nx, g.ny, state};
    rec.bestGap = current;

    double temp = cfg.startTemperature;
    for (int step = 0; step < cfg.steps; ++step) {
        int b = flip(rng);
        state[b] ^= 1;
        double proposed = fitness(state);
        double delta = proposed - current;
        if (delta <= 0.0 || unit(rng) < std::exp(-delta / std::max(temp, 1e-300))) {
            current = proposed;
            if (current < rec.bestGap) {
                rec.bestGap = current;
                rec.bestSector = SectorId{g.nx, g.ny, state};
            }
        } else {
            state[b] ^= 1;  // reject
        }
        temp *= cfg.cooling;
        if ((step + 1) % cfg.traceEvery == 0) rec.trace.push_back(rec.bestGap);
    }
    return rec;
}

GapCurve pooled_curve(const LatticeGeometry& g, const CouplingParams& J,
                      const std::vector<double>& gammas, const std::vector<SectorId>& pool) {
    std::vector<SectorId> unique;
    for (const SectorId& id : pool) {
        bool seen = false;
        for (const SectorId& u : unique) {
            if (u == id) {
                seen = true;
                break;
            }
        }
        if (!seen) unique.push_back(id);
    }
    return sweep_pool(g, J, gammas, unique);
}

AsymptoticFit fit_asymptotics(const GapCurve& curve) {
    double sxy = 0.0, sxx = 0.0;
    int nSmall = 0;
    double lx = 0.0, ly = 0.0, lxx = 0.0, lxy = 0.0;
    int nLarge = 0;
    for (const GapPoint& p : curve.points) {
        if (p.gamma > 0.0 && p.gamma <= 0.1) {
            sxy += p.gamma * p.gap;
            sxx += p.gamma * p.gamma;
            ++nSmall;
        }
        if (p.gamma >= 5.0 && p.gap > 0.0) {
            double x = std::log(p.gamma), y = std::log(p.gap);
            lx += x;
            ly += y;
            lxx += x * x;
            lxy += x * y;
            ++nLarge;
        }
    }
    if (nSmall < 2 || nLarge < 2) {
        throw std::invalid_argument("curve must sample both gamma <= 0.1 and gamma >= 5");
    }
    AsymptoticFit fit;
    fit.smallGammaSlope = sxy / sxx;
    double denom = nLarge * lxx - lx * lx;
    fit.largeGammaExponent = (nLarge * lxy - lx * ly) / denom;
    fit.largeGammaCoefficient = std::exp((ly - fit.largeGammaExponent * lx) / nLarge);
    return fit;
}

void write_gap_curve_csv(const GapCurve& curve, std::ostream& out) {
    out << "gamma,gap,argmin_sector_hex,degeneracy\n";
    char buf[64];
    for (const GapPoint& p : curve.points) {
        std::snprintf(buf, sizeof(buf), "%.17g", p.gamma);
        out << buf << ',';
        std::snprintf(buf, sizeof(buf), "%.17g", p.gap);
        out << buf << ',' << p.argmin.hex() << ',' << p.degeneracy << '\n';
    }
}

std::string run_records_json(const std::vector<RunRecord>& records) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const RunRecord& r : records) {
        nlohmann::ordered_json item;
        item["gamma"] = r.gamma;
        item["seed"] = r.seed;
        item["best_gap"] = r.bestGap;
        item["best_sector"] = r.bestSector.hex();
        item["trace"] = r.trace;
        out.push_back(std::move(item));
    }
    return out.dump(2) + "\n";
}

}  // namespace ddk
