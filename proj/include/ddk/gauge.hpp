#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ddk/lattice.hpp"

namespace ddk {

/// Z2 link variables of the doubled (two-layer) model. Each layer carries
/// horizontal links h(x,y) between (x,y)-(x+1,y) and vertical links v(x,y)
/// between (x,y)-(x,y+1); u5(x,y) connects the two layers at every site.
/// All entries are +1 or -1.
struct GaugeField {
    int nx{0}, ny{0};
    std::vector<int> hb, vb;  // bottom layer
    std::vector<int> ht, vt;  // top layer
    std::vector<int> u5;      // interlayer

    GaugeField() = default;
    explicit GaugeField(const LatticeGeometry& g)
        : nx(g.nx), ny(g.ny),
          hb(g.sites(), 1), vb(g.sites(), 1),
          ht(g.sites(), 1), vt(g.sites(), 1),
          u5(g.sites(), 1) {}

    int idx(int x, int y) const {
        x = (x - 1 + 4 * nx) % nx;
        y = (y - 1 + 4 * ny) % ny;
        return x + y * nx;
    }
    int& h(int layer, int x, int y) { return layer == 0 ? hb[idx(x, y)] : ht[idx(x, y)]; }
    int& v(int layer, int x, int y) { return layer == 0 ? vb[idx(x, y)] : vt[idx(x, y)]; }
    int h(int layer, int x, int y) const { return layer == 0 ? hb[idx(x, y)] : ht[idx(x, y)]; }
    int v(int layer, int x, int y) const { return layer == 0 ? vb[idx(x, y)] : vt[idx(x, y)]; }
    int& rung(int x, int y) { return u5[idx(x, y)]; }
    int rung(int x, int y) const { return u5[idx(x, y)]; }

    /// Product of all 5N links; fixes the fermion-parity sector.
    int linkProduct() const;
};

/// Gauge-invariant content of a link configuration. Plaquette fluxes of each
/// layer are labelled by A sites: phiP is the plaquette north-east of the A
/// site, phiM the one south-east (arrays indexed by A ordinal). psi/om are
/// the x- and y-oriented interlayer plaquettes through the rungs, again split
/// into the +x/-x (+y/-y) pair at each A site. wx/wy are the two Wilson-loop
/// signs of the bottom layer, wtx/wty of the top layer.
struct FluxData {
    int nx{0}, ny{0};
    std::vector<int> phiP, phiM;    // bottom layer
    std::vector<int> phiTP, phiTM;  // top layer
    std::vector<int> psiP, psiM;    // interlayer, x oriented
    std::vector<int> omP, omM;      // interlayer, y oriented
    int wx{1}, wy{1}, wtx{1}, wty{1};

    bool operator==(const FluxData& o) const = default;
};

/// Identifier of a flux sector: the values of the 3N+1 links left free by the
/// spanning-tree gauge fixing, packed as bits (bit set <=> link = -1).
struct SectorId {
    int nx{0}, ny{0};
    std::vector<std::uint8_t> bits;

    bool operator==(const SectorId& o) const = default;
    std::string hex() const;
    static SectorId fromHex(const LatticeGeometry& g, const std::string& s);
    static int bitCount(const LatticeGeometry& g) { return 3 * g.sites() + 1; }
};

FluxData compute_fluxes(const LatticeGeometry& g, const GaugeField& u);

/// All free coordinates (bottom phi, psi, om, wx, wy) set to -1; the
/// dependent top-layer entries filled in from the closure relations.
FluxData fiducial_fluxes(const LatticeGeometry& g);

/// Fill the dependent entries (phiTP/phiTM/wtx/wty) of a flux record from its
/// free coordinates, and verify the bottom-layer product constraint.
FluxData complete_fluxes(const LatticeGeometry& g, FluxData f);

/// Throws if f violates a closure relation.
void check_fluxes(const LatticeGeometry& g, const FluxData& f);

/// Deterministic representative link configuration with the requested fluxes.
GaugeField fix_gauge(const LatticeGeometry& g, const FluxData& f);

SectorId sector_from_fluxes(const LatticeGeometry& g, const FluxData& f);
FluxData fluxes_from_sector(const LatticeGeometry& g, const SectorId& s);
SectorId sector_from_gauge(const LatticeGeometry& g, const GaugeField& u);
GaugeField gauge_from_sector(const LatticeGeometry& g, const SectorId& s);

/// Number of free coordinates (bottom phi, psi, om, Wilson signs) on which
/// the two records differ.
int defect_count(const LatticeGeometry& g, const FluxData& a, const FluxData& b);

/// True when the sector can host a stationary state: layer fluxes agree
/// pairwise and every interlayer flux equals -1.
bool ness_flux_conditions(const LatticeGeometry& g, const FluxData& f);

/// Human-readable labels ("Phi+_{x,y}", "Wx", ...) of the free coordinates on
/// which f differs from ref, in a fixed canonical order.
std::vector<std::string> report_defects(const LatticeGeometry& g, const FluxData& f,
                                        const FluxData& ref);

/// Serialize as {"size":[nx,ny],"defects":[...]} with defects relative to the
/// fiducial record; round-trips bit-exactly.
std::string flux_to_json(const LatticeGeometry& g, const FluxData& f);
FluxData flux_from_json(const std::string& text);

GaugeField random_gauge(const LatticeGeometry& g, std::mt19937_64& rng);

}  // namespace ddk
