#include "ddk/gauge.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace ddk {

namespace {

int layerSign(int extent) { return (extent / 2) % 2 == 0 ? 1 : -1; }

/// Plaquette flux with lower-left corner (x,y) of one layer.
int plaquette(const LatticeGeometry& g, const GaugeField& u, int layer, int x, int y) {
    return u.h(layer, x, y) * u.v(layer, x + 1, y) * u.h(layer, x, y + 1) * u.v(layer, x, y);
}

/// Target plaquette value with lower-left corner (x,y), from the phi arrays.
int targetPlaquette(const LatticeGeometry& g, const std::vector<int>& phiP,
                    const std::vector<int>& phiM, int x, int y) {
    if (g.isA(x, y)) return phiP[g.aIndex(x, y)];
    return phiM[g.aIndex(x, y + 1)];
}

}  // namespace

int GaugeField::linkProduct() const {
    int p = 1;
    for (std::size_t i = 0; i < hb.size(); ++i) {
        p *= hb[i] * vb[i] * ht[i] * vt[i] * u5[i];
    }
    return p;
}

FluxData compute_fluxes(const LatticeGeometry& g, const GaugeField& u) {
    FluxData f;
    f.nx = g.nx;
    f.ny = g.ny;
    int nc = g.cells();
    f.phiP.resize(nc);
    f.phiM.resize(nc);
    f.phiTP.resize(nc);
    f.phiTM.resize(nc);
    f.psiP.resize(nc);
    f.psiM.resize(nc);
    f.omP.resize(nc);
    f.omM.resize(nc);
    for (int i = 0; i < nc; ++i) {
        auto [x, y] = g.aSite(i);
        f.phiP[i] = plaquette(g, u, 0, x, y);
        f.phiM[i] = plaquette(g, u, 0, x, y - 1);
        f.phiTP[i] = plaquette(g, u, 1, x, y);
        f.phiTM[i] = plaquette(g, u, 1, x, y - 1);
        f.psiP[i] = u.h(0, x, y) * u.h(1, x, y) * u.rung(x, y) * u.rung(x + 1, y);
        f.psiM[i] = u.h(0, x - 1, y) * u.h(1, x - 1, y) * u.rung(x - 1, y) * u.rung(x, y);
        f.omP[i] = u.v(0, x, y) * u.v(1, x, y) * u.rung(x, y) * u.rung(x, y + 1);
        f.omM[i] = u.v(0, x, y - 1) * u.v(1, x, y - 1) * u.rung(x, y - 1) * u.rung(x, y);
    }
    f.wx = layerSign(g.nx);
    f.wtx = layerSign(g.nx);
    for (int x = 1; x <= g.nx; ++x) {
        f.wx *= u.h(0, x, 1);
        f.wtx *= u.h(1, x, 1);
    }
    f.wy = layerSign(g.ny);
    f.wty = layerSign(g.ny);
    for (int y = 1; y <= g.ny; ++y) {
        f.wy *= u.v(0, 1, y);
        f.wty *= u.v(1, 1, y);
    }
    return f;
}

FluxData complete_fluxes(const LatticeGeometry& g, FluxData f) {
    int nc = g.cells();
    f.nx = g.nx;
    f.ny = g.ny;
    int prod = 1;
    for (int i = 0; i < nc; ++i) prod *= f.phiP[i] * f.phiM[i];
    if (prod != 1) throw std::invalid_argument("layer flux product must be +1");
    f.phiTP.resize(nc);
    f.phiTM.resize(nc);
    for (int i = 0; i < nc; ++i) {
        auto [x, y] = g.aSite(i);
        int ne = g.aIndex(x + 1, y + 1);
        int se = g.aIndex(x + 1, y - 1);
        f.phiTP[i] = f.phiP[i] * f.psiP[i] * f.omP[i] * f.psiM[ne] * f.omM[ne];
        f.phiTM[i] = f.phiM[i] * f.psiP[i] * f.omM[i] * f.psiM[se] * f.omP[se];
    }
    f.wtx = f.wx;
    f.wty = f.wy;
    for (int i = 0; i < nc; ++i) {
        auto [x, y] = g.aSite(i);
        if (y == 1) f.wtx *= f.psiP[i] * f.psiM[i];
        if (x == 1) f.wty *= f.omP[i] * f.omM[i];
    }
    return f;
}

void check_fluxes(const LatticeGeometry& g, const FluxData& f) {
    FluxData c = complete_fluxes(g, f);
    if (!(c == f)) throw std::invalid_argument("flux record violates closure relations");
}

FluxData fiducial_fluxes(const LatticeGeometry& g) {
    FluxData f;
    int nc = g.cells();
    f.phiP.assign(nc, -1);
    f.phiM.assign(nc, -1);
    f.psiP.assign(nc, -1);
    f.psiM.assign(nc, -1);
    f.omP.assign(nc, -1);
    f.omM.assign(nc, -1);
    f.wx = -1;
    f.wy = -1;
    return complete_fluxes(g, f);
}

GaugeField fix_gauge(const LatticeGeometry& g, const FluxData& f) {
    check_fluxes(g, f);
    GaugeField u(g);
    for (int layer = 0; layer < 2; ++layer) {
        const std::vector<int>& pp = layer == 0 ? f.phiP : f.phiTP;
        const std::vector<int>& pm = layer == 0 ? f.phiM : f.phiTM;
        int wilX = layer == 0 ? f.wx : f.wtx;
        int wilY = layer == 0 ? f.wy : f.wty;
        // Spanning tree: h(x,y)=+1 for x<nx and v(1,y)=+1 for y<ny already set.
        u.v(layer, 1, g.ny) = layerSign(g.ny) * wilY;
        for (int y = 1; y <= g.ny; ++y) {
            for (int x = 2; x <= g.nx; ++x) {
                u.v(layer, x, y) = targetPlaquette(g, pp, pm, x - 1, y) * u.v(layer, x - 1, y) *
                                   u.h(layer, x - 1, y) * u.h(layer, x - 1, y + 1);
            }
        }
        u.h(layer, g.nx, 1) = layerSign(g.nx) * wilX;
        for (int y = 1; y < g.ny; ++y) {
            u.h(layer, g.nx, y + 1) = targetPlaquette(g, pp, pm, g.nx, y) * u.h(layer, g.nx, y) *
                                      u.v(layer, 1, y) * u.v(layer, g.nx, y);
        }
    }
    // Rungs: tree rooted at (1,1), first up the x=1 column, then along rows.
    for (int y = 1; y < g.ny; ++y) {
        int om = g.isA(1, y) ? f.omP[g.aIndex(1, y)] : f.omM[g.aIndex(1, y + 1)];
        u.rung(1, y + 1) = om * u.v(0, 1, y) * u.v(1, 1, y) * u.rung(1, y);
    }
    for (int y = 1; y <= g.ny; ++y) {
        for (int x = 1; x < g.nx; ++x) {
            int ps = g.isA(x, y) ? f.psiP[g.aIndex(x, y)] : f.psiM[g.aIndex(x + 1, y)];
            u.rung(x + 1, y) = ps * u.h(0, x, y) * u.h(1, x, y) * u.rung(x, y);
        }
    }
    return u;
}

namespace {

/// Free links of the spanning-tree gauge, in SectorId bit order.
template <typename F>
void forEachFreeLink(const LatticeGeometry& g, GaugeField& u, F&& fn) {
    for (int layer = 0; layer < 2; ++layer) {
        fn(u.v(layer, 1, g.ny));
        for (int y = 1; y <= g.ny; ++y) {
            for (int x = 2; x <= g.nx; ++x) fn(u.v(layer, x, y));
        }
        for (int y = 1; y <= g.ny; ++y) fn(u.h(layer, g.nx, y));
    }
    for (int y = 1; y <= g.ny; ++y) {
        for (int x = 1; x <= g.nx; ++x) {
            if (x == 1 && y == 1) continue;
            fn(u.rung(x, y));
        }
    }
}

}  // namespace

SectorId sector_from_fluxes(const LatticeGeometry& g, const FluxData& f) {
    GaugeField u = fix_gauge(g, f);
    SectorId s;
    s.nx = g.nx;
    s.ny = g.ny;
    s.bits.reserve(SectorId::bitCount(g));
    forEachFreeLink(g, u, [&](int& link) { s.bits.push_back(link == -1 ? 1 : 0); });
    return s;
}

GaugeField gauge_from_sector(const LatticeGeometry& g, const SectorId& s) {
    if (static_cast<int>(s.bits.size()) != SectorId::bitCount(g)) {
        throw std::invalid_argument("sector id has wrong bit count");
    }
    GaugeField u(g);
    std::size_t k = 0;
    forEachFreeLink(g, u, [&](int& link) { link = s.bits[k++] ? -1 : 1; });
    return u;
}

FluxData fluxes_from_sector(const LatticeGeometry& g, const SectorId& s) {
    return compute_fluxes(g, gauge_from_sector(g, s));
}

SectorId sector_from_gauge(const LatticeGeometry& g, const GaugeField& u) {
    return sector_from_fluxes(g, compute_fluxes(g, u));
}

std::string SectorId::hex() const {
    int n = static_cast<int>(bits.size());
    int digits = (n + 3) / 4;
    std::string out(digits, '0');
    for (int i = 0; i < n; ++i) {
        if (!bits[i]) continue;
        int d = digits - 1 - i / 4;
        int val = (out[d] <= '9' ? out[d] - '0' : out[d] - 'a' + 10) | (1 << (i % 4));
        out[d] = val < 10 ? static_cast<char>('0' + val) : static_cast<char>('a' + val - 10);
    }
    return out;
}

SectorId SectorId::fromHex(const LatticeGeometry& g, const std::string& s) {
    SectorId id;
    id.nx = g.nx;
    id.ny = g.ny;
    int n = bitCount(g);
    id.bits.assign(n, 0);
    int digits = static_cast<int>(s.size());
    for (int i = 0; i < n; ++i) {
        int d = digits - 1 - i / 4;
        if (d < 0) break;
        char c = s[d];
        int val = c >= '0' && c <= '9' ? c - '0' : (c >= 'a' && c <= 'f' ? c - 'a' + 10 : -1);
        if (val < 0) throw std::invalid_argument("bad hex digit in sector id");
        id.bits[i] = (val >> (i % 4)) & 1;
    }
    return id;
}

namespace {

/// Visit the free coordinates of a flux record in canonical label order.
template <typename F>
void forEachCoordinate(const LatticeGeometry& g, const FluxData& f, F&& fn) {
    static const char* names[] = {"Phi+", "Phi-", "Psi+", "Psi-", "Omega+", "Omega-"};
    const std::vector<int>* arrays[] = {&f.phiP, &f.phiM, &f.psiP, &f.psiM, &f.omP, &f.omM};
    for (int a = 0; a < 6; ++a) {
        for (int i = 0; i < g.cells(); ++i) {
            auto [x, y] = g.aSite(i);
            char label[32];
            std::snprintf(label, sizeof(label), "%s_{%d,%d}", names[a], x, y);
            fn(label, (*arrays[a])[i]);
        }
    }
    fn("Wx", f.wx);
    fn("Wy", f.wy);
}

}  // namespace

int defect_count(const LatticeGeometry& g, const FluxData& a, const FluxData& b) {
    int count = 0;
    std::vector<int> other;
    forEachCoordinate(g, b, [&](const std::string&, int v) { other.push_back(v); });
    std::size_t k = 0;
    forEachCoordinate(g, a, [&](const std::string&, int v) {
        if (v != other[k++]) ++count;
    });
    return count;
}

bool ness_flux_conditions(const LatticeGeometry& g, const FluxData& f) {
    for (int i = 0; i < g.cells(); ++i) {
        if (f.phiP[i] != f.phiTP[i] || f.phiM[i] != f.phiTM[i]) return false;
        if (f.psiP[i] != -1 || f.psiM[i] != -1 || f.omP[i] != -1 || f.omM[i] != -1) return false;
    }
    return true;
}

std::vector<std::string> report_defects(const LatticeGeometry& g, const FluxData& f,
                                        const FluxData& ref) {
    std::vector<std::string> out;
    std::vector<int> other;
    forEachCoordinate(g, ref, [&](const std::string&, int v) { other.push_back(v); });
    std::size_t k = 0;
    forEachCoordinate(g, f, [&](const std::string& label, int v) {
        if (v != other[k++]) out.push_back(label);
    });
    return out;
}

std::string flux_to_json(const LatticeGeometry& g, const FluxData& f) {
    nlohmann::json j;
    j["size"] = {g.nx, g.ny};
    j["defects"] = report_defects(g, f, fiducial_fluxes(g));
    return j.dump();
}

FluxData flux_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    LatticeGeometry g(j.at("size").at(0).get<int>(), j.at("size").at(1).get<int>());
    FluxData f = fiducial_fluxes(g);
    std::vector<std::string> defects = j.at("defects").get<std::vector<std::string>>();
    // Flip every listed coordinate, then rebuild the dependent entries.
    std::vector<std::pair<std::string, int*>> slots;
    std::vector<int>* arrays[] = {&f.phiP, &f.phiM, &f.psiP, &f.psiM, &f.omP, &f.omM};
    static const char* names[] = {"Phi+", "Phi-", "Psi+", "Psi-", "Omega+", "Omega-"};
    for (int a = 0; a < 6; ++a) {
        for (int i = 0; i < g.cells(); ++i) {
            auto [x, y] = g.aSite(i);
            char label[32];
            std::snprintf(label, sizeof(label), "%s_{%d,%d}", names[a], x, y);
            slots.emplace_back(label, &(*arrays[a])[i]);
        }
    }
    slots.emplace_back("Wx", &f.wx);
    slots.emplace_back("Wy", &f.wy);
    for (const std::string& d : defects) {
        bool found = false;
        for (auto& [label, ptr] : slots) {
            if (label == d) {
                *ptr = -*ptr;
                found = true;
                break;
            }
        }
        if (!found) throw std::invalid_argument("unknown defect label: " + d);
    }
    return complete_fluxes(g, f);
}

GaugeField random_gauge(const LatticeGeometry& g, std::mt19937_64& rng) {
    GaugeField u(g);
    auto flip = [&](std::vector<int>& links) {
        for (int& l : links) l = (rng() & 1) ? 1 : -1;
    };
    flip(u.hb);
    flip(u.vb);
    flip(u.ht);
    flip(u.vt);
    flip(u.u5);
    return u;
}

}  // namespace ddk
