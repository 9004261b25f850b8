#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ddk {

/// Square-lattice torus with even extents and a two-site (A/B) unit cell.
/// Coordinates are 1-based; x runs along rows, y along columns. A site (x,y)
/// belongs to sublattice A when x+y is even.
struct LatticeGeometry {
    int nx{2};
    int ny{2};

    LatticeGeometry() = default;
    LatticeGeometry(int nx_, int ny_) : nx(nx_), ny(ny_) {
        if (nx < 2 || ny < 2 || nx % 2 != 0 || ny % 2 != 0) {
            throw std::invalid_argument("lattice extents must be even and >= 2");
        }
    }

    int sites() const { return nx * ny; }
    int cells() const { return sites() / 2; }

    int wrapX(int x) const { return (x - 1 + 4 * nx) % nx + 1; }
    int wrapY(int y) const { return (y - 1 + 4 * ny) % ny + 1; }

    /// Row-major site index in [0, sites)
    int site(int x, int y) const { return (wrapX(x) - 1) + (wrapY(y) - 1) * nx; }

    bool isA(int x, int y) const { return (wrapX(x) + wrapY(y)) % 2 == 0; }

    /// Ordinal of an A-site among all A sites, row-major. Requires isA(x,y).
    int aIndex(int x, int y) const {
        x = wrapX(x);
        y = wrapY(y);
        int inRow = (y % 2 == 1) ? (x - 1) / 2 : x / 2 - 1;
        return (y - 1) * (nx / 2) + inRow;
    }

    /// A-site coordinates for a given ordinal, inverse of aIndex.
    std::pair<int, int> aSite(int idx) const {
        int y = idx / (nx / 2) + 1;
        int inRow = idx % (nx / 2);
        int x = (y % 2 == 1) ? 2 * inRow + 1 : 2 * inRow + 2;
        return {x, y};
    }

    std::vector<std::pair<int, int>> aSites() const {
        std::vector<std::pair<int, int>> out;
        out.reserve(cells());
        for (int i = 0; i < cells(); ++i) out.push_back(aSite(i));
        return out;
    }
};

}  // namespace ddk
