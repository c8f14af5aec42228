#pragma once

#include <vector>

#include "srg/geometry.hpp"

namespace srg {

//============================================================================
// Axis-aligned partition of a window into congruent rectangular cells, with
// the cell-centre snapping map t(x) used by the lattice approximation.
//============================================================================

struct DiscretisationGrid {
    Window window;
    int cells_per_axis[kMaxDim] = {1, 1, 1};

    DiscretisationGrid() = default;
    DiscretisationGrid(const Window& w, int per_axis) : window(w) {
        if (per_axis < 1)
            throw ValidationError("grid: cells per axis must be >= 1");
        for (int k = 0; k < w.dim; ++k) cells_per_axis[k] = per_axis;
    }

    long n_cells() const {
        long n = 1;
        for (int k = 0; k < window.dim; ++k) n *= cells_per_axis[k];
        return n;
    }

    double cell_side(int axis) const {
        return window.side(axis) / cells_per_axis[axis];
    }

    double cell_volume() const {
        double v = 1.0;
        for (int k = 0; k < window.dim; ++k) v *= cell_side(k);
        return v;
    }

    /// Largest distance from a point of a cell to its centre (half diagonal
    /// of one cell), optionally capped by the vertex metric cap.
    double cell_radius(double cap = 0.0) const {
        double s = 0.0;
        for (int k = 0; k < window.dim; ++k) s += 0.25 * cell_side(k) * cell_side(k);
        const double r = std::sqrt(s);
        return cap > 0.0 ? std::min(r, cap) : r;
    }

    long cell_index(const Vec& x) const {
        long idx = 0;
        for (int k = window.dim - 1; k >= 0; --k) {
            long i = static_cast<long>((x[k] - window.lower[k]) / cell_side(k));
            if (i < 0) i = 0;
            if (i >= cells_per_axis[k]) i = cells_per_axis[k] - 1;
            idx = idx * cells_per_axis[k] + i;
        }
        return idx;
    }

    Vec centre(long idx) const {
        Vec c{0, 0, 0};
        for (int k = 0; k < window.dim; ++k) {
            const long i = idx % cells_per_axis[k];
            idx /= cells_per_axis[k];
            c[k] = window.lower[k] + (static_cast<double>(i) + 0.5) * cell_side(k);
        }
        return c;
    }

    /// Snap to the centre of the containing cell.
    Vec snap(const Vec& x) const { return centre(cell_index(x)); }

    /// Uniform draw from the cell with the given index.
    Vec sample_cell(long idx, RngStream& rng) const {
        Vec c = centre(idx);
        for (int k = 0; k < window.dim; ++k)
            c[k] += (rng.uniform() - 0.5) * cell_side(k);
        return c;
    }

    std::vector<Vec> centres() const {
        std::vector<Vec> out;
        out.reserve(n_cells());
        for (long i = 0; i < n_cells(); ++i) out.push_back(centre(i));
        return out;
    }
};

} // namespace srg
