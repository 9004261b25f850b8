#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ddk/clifford.hpp"
#include "ddk/gap_search.hpp"
#include "ddk/gauge.hpp"
#include "ddk/lattice.hpp"
#include "ddk/liouville.hpp"
#include "ddk/perturbation.hpp"
#include "ddk/spectrum.hpp"

namespace py = pybind11;
using namespace ddk;

namespace {

CouplingParams toCouplings(const std::vector<double>& j) {
    if (j.size() != 4) throw std::invalid_argument("expected four couplings");
    return CouplingParams{j[0], j[1], j[2], j[3]};
}

py::dict pointDict(const GapPoint& p) {
    py::dict d;
    d["gamma"] = p.gamma;
    d["gap"] = p.gap;
    d["argmin"] = p.argmin.hex();
    d["degeneracy"] = p.degeneracy;
    return d;
}

py::dict curveDict(const GapCurve& c) {
    py::list pts;
    for (const GapPoint& p : c.points) pts.append(pointDict(p));
    py::dict d;
    d["points"] = pts;
    d["boundaries"] = c.boundaries;
    return d;
}

py::dict recordDict(const RunRecord& r) {
    py::dict d;
    d["gamma"] = r.gamma;
    d["seed"] = r.seed;
    d["trace"] = r.trace;
    d["best_sector"] = r.bestSector.hex();
    d["best_gap"] = r.bestGap;
    return d;
}

}  // namespace

PYBIND11_MODULE(_ddk, m) {
    m.doc() = "Gauge-sector spectra and relaxation gaps of the dissipative "
              "two-layer Dirac-matrix model";

    py::class_<LatticeGeometry>(m, "Lattice")
        .def(py::init<int, int>(), py::arg("nx"), py::arg("ny"))
        .def_readonly("nx", &LatticeGeometry::nx)
        .def_readonly("ny", &LatticeGeometry::ny)
        .def_property_readonly("sites", &LatticeGeometry::sites)
        .def_property_readonly("cells", &LatticeGeometry::cells)
        .def_property_readonly("sector_bits",
                               [](const LatticeGeometry& g) { return SectorId::bitCount(g); })
        .def("__repr__", [](const LatticeGeometry& g) {
            return "Lattice(" + std::to_string(g.nx) + ", " + std::to_string(g.ny) + ")";
        });

    m.def(
        "fiducial_sector",
        [](const LatticeGeometry& g) { return sector_from_fluxes(g, fiducial_fluxes(g)).hex(); },
        py::arg("lattice"), "Hex id of the reference flux sector.");

    m.def(
        "sector_defects",
        [](const LatticeGeometry& g, const std::string& hex) {
            return report_defects(g, fluxes_from_sector(g, SectorId::fromHex(g, hex)),
                                  fiducial_fluxes(g));
        },
        py::arg("lattice"), py::arg("sector"),
        "Labels of the flux coordinates on which the sector differs from the reference.");

    m.def(
        "is_stationary_sector",
        [](const LatticeGeometry& g, const std::string& hex) {
            return ness_flux_conditions(g, fluxes_from_sector(g, SectorId::fromHex(g, hex)));
        },
        py::arg("lattice"), py::arg("sector"),
        "True when the sector can host a stationary state.");

    m.def(
        "sector_gap",
        [](const LatticeGeometry& g, const std::vector<double>& j, const std::string& hex,
           double gamma) {
            SectorResult r = sector_gap(g, toCouplings(j), gauge_from_sector(g, SectorId::fromHex(g, hex)),
                                        gamma);
            return py::make_tuple(r.minNonzeroRate, r.zeroModeCount);
        },
        py::arg("lattice"), py::arg("couplings"), py::arg("sector"), py::arg("gamma"),
        "Smallest nonzero decay rate and stationary-state count of one sector.");

    m.def(
        "sector_spectrum",
        [](const LatticeGeometry& g, const std::vector<double>& j, const std::string& hex,
           double gamma) {
            return sector_spectrum(compute_rapidities(assemble_structure_matrix(
                g, toCouplings(j), gauge_from_sector(g, SectorId::fromHex(g, hex)), gamma)));
        },
        py::arg("lattice"), py::arg("couplings"), py::arg("sector"), py::arg("gamma"),
        "All complex eigenvalues of the generator restricted to one sector.");

    m.def(
        "exhaustive_sweep",
        [](const LatticeGeometry& g, const std::vector<double>& j,
           const std::vector<double>& gammas) {
            return curveDict(exhaustive_sweep(g, toCouplings(j), gammas));
        },
        py::arg("lattice"), py::arg("couplings"), py::arg("gammas"),
        "Exact gap curve over all flux sectors (small lattices only).");

    m.def(
        "defect_limited_search",
        [](const LatticeGeometry& g, const std::vector<double>& j,
           const std::vector<double>& gammas, int nv) {
            return curveDict(nv_limited_search(g, toCouplings(j), gammas, nv, fiducial_fluxes(g)));
        },
        py::arg("lattice"), py::arg("couplings"), py::arg("gammas"), py::arg("nv"),
        "Gap curve over sectors within nv flux defects of the reference.");

    py::class_<GAConfig>(m, "GAConfig")
        .def(py::init<>())
        .def_readwrite("population_size", &GAConfig::populationSize)
        .def_readwrite("runs", &GAConfig::runs)
        .def_readwrite("generations", &GAConfig::generations)
        .def_readwrite("mutation_rate", &GAConfig::mutationRate)
        .def_readwrite("crossover_rate", &GAConfig::crossoverRate)
        .def_readwrite("elitism", &GAConfig::elitism)
        .def_readwrite("tournament", &GAConfig::tournament)
        .def_readwrite("rng_seed", &GAConfig::rngSeed);

    m.def(
        "genetic_algorithm",
        [](const LatticeGeometry& g, const std::vector<double>& j, double gamma,
           const GAConfig& cfg) {
            py::list out;
            for (const RunRecord& r : genetic_algorithm(g, toCouplings(j), gamma, cfg)) {
                out.append(recordDict(r));
            }
            return out;
        },
        py::arg("lattice"), py::arg("couplings"), py::arg("gamma"),
        py::arg("config") = GAConfig{},
        "Independent tournament-selection GA runs over sector bit strings.");

    py::class_<SAConfig>(m, "SAConfig")
        .def(py::init<>())
        .def_readwrite("steps", &SAConfig::steps)
        .def_readwrite("start_temperature", &SAConfig::startTemperature)
        .def_readwrite("cooling", &SAConfig::cooling)
        .def_readwrite("trace_every", &SAConfig::traceEvery)
        .def_readwrite("rng_seed", &SAConfig::rngSeed);

    m.def(
        "simulated_annealing",
        [](const LatticeGeometry& g, const std::vector<double>& j, double gamma,
           const SAConfig& cfg) {
            return recordDict(simulated_annealing(g, toCouplings(j), gamma, cfg));
        },
        py::arg("lattice"), py::arg("couplings"), py::arg("gamma"),
        py::arg("config") = SAConfig{},
        "Single-bit-flip annealing over sector bit strings.");

    m.def(
        "pooled_curve",
        [](const LatticeGeometry& g, const std::vector<double>& j,
           const std::vector<double>& gammas, const std::vector<std::string>& pool) {
            std::vector<SectorId> ids;
            for (const std::string& hex : pool) ids.push_back(SectorId::fromHex(g, hex));
            return curveDict(pooled_curve(g, toCouplings(j), gammas, ids));
        },
        py::arg("lattice"), py::arg("couplings"), py::arg("gammas"), py::arg("pool"),
        "Minimum over a pool of candidate sectors at every gamma.");

    m.def(
        "fit_asymptotics",
        [](const py::dict& curve) {
            GapCurve c;
            for (py::handle h : curve["points"]) {
                py::dict d = py::cast<py::dict>(h);
                GapPoint p;
                p.gamma = py::cast<double>(d["gamma"]);
                p.gap = py::cast<double>(d["gap"]);
                c.points.push_back(p);
            }
            AsymptoticFit f = fit_asymptotics(c);
            py::dict out;
            out["small_gamma_slope"] = f.smallGammaSlope;
            out["large_gamma_exponent"] = f.largeGammaExponent;
            out["large_gamma_coefficient"] = f.largeGammaCoefficient;
            return out;
        },
        py::arg("curve"), "Small- and large-gamma power-law fits of a gap curve.");

    m.def("uniform_master_spectrum", &uniform_master_spectrum, py::arg("lattice"),
          "Weak-dissipation master-matrix spectrum of the uniform sector, in closed form.");
    m.def("single_flip_rate", &single_flip_rate, py::arg("lattice"),
          "Weak-dissipation rate of one flipped occupation label.");
    m.def("min_nonzero_s", &min_nonzero_s, py::arg("lattice"),
          "Smallest nonzero label stiffness over all strong-dissipation configurations.");
    m.def(
        "large_gamma_rates",
        [](double s, double gamma) {
            auto [a, b] = large_gamma_rates(s, gamma);
            return py::make_tuple(a, b);
        },
        py::arg("s"), py::arg("gamma"),
        "Strong-dissipation decay rates for a given label stiffness.");
}
