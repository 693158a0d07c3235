#include "fracdn/grid.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "fracdn/errors.hpp"

namespace fracdn {

std::array<int, 2> Grid::axis_indices(Index n) const {
    if (dim == 1) return {static_cast<int>(n), 0};
    return {static_cast<int>(n % M), static_cast<int>(n / M)};
}

std::array<double, 2> Grid::coords(Index n) const {
    auto [ix, iy] = axis_indices(n);
    return {-L + (ix + 1) * h, dim == 2 ? -L + (iy + 1) * h : 0.0};
}

Index Grid::flat_index(int ix, int iy) const {
    return static_cast<Index>(ix) + static_cast<Index>(M) * iy;
}

Index Grid::nearest_node(double x, double y) const {
    auto clamp_axis = [&](double c) {
        int k = static_cast<int>(std::lround((c + L) / h)) - 1;
        return std::clamp(k, 0, M - 1);
    };
    return flat_index(clamp_axis(x), dim == 2 ? clamp_axis(y) : 0);
}

namespace detail {
Grid make_grid_unchecked(int dim, double L, int M) {
    Grid g;
    g.dim = dim;
    g.L = L;
    g.M = M;
    g.h = 2.0 * L / (M + 1);
    g.N = (dim == 1) ? M : static_cast<Index>(M) * M;
    return g;
}
}  // namespace detail

Grid build_grid(int dim, double L, int M) {
    if (dim != 1 && dim != 2) {
        throw ConfigError("grid.dim: expected 1 or 2, got " + std::to_string(dim));
    }
    if (!(L > 0.0)) {
        throw ConfigError("grid.L: expected a positive half-width, got " + std::to_string(L));
    }
    if (M < 8) {
        throw ConfigError("grid.M: expected at least 8 nodes per axis, got " + std::to_string(M));
    }
    return detail::make_grid_unchecked(dim, L, M);
}

namespace {

// Nodes are compared against box edges with a small absolute slack so that
// box edges that are not exactly representable on the binary lattice
// (e.g. 0.4 with h = 0.1) still include their edge nodes.
bool in_box(const Grid& g, Index n, const Box& b) {
    const double tol = 1e-9 * g.L;
    auto c = g.coords(n);
    for (int d = 0; d < g.dim; ++d) {
        if (c[d] < b.lo - tol || c[d] > b.hi + tol) return false;
    }
    return true;
}

double node_dist(const Grid& g, Index a, Index b) {
    auto ca = g.coords(a);
    auto cb = g.coords(b);
    double s = 0.0;
    for (int d = 0; d < g.dim; ++d) s += (ca[d] - cb[d]) * (ca[d] - cb[d]);
    return std::sqrt(s);
}

std::vector<Index> stencil_neighbors_inside(const Grid& g, Index n) {
    std::vector<Index> out;
    auto [ix, iy] = g.axis_indices(n);
    if (ix > 0) out.push_back(g.flat_index(ix - 1, iy));
    if (ix < g.M - 1) out.push_back(g.flat_index(ix + 1, iy));
    if (g.dim == 2) {
        if (iy > 0) out.push_back(g.flat_index(ix, iy - 1));
        if (iy < g.M - 1) out.push_back(g.flat_index(ix, iy + 1));
    }
    return out;
}

}  // namespace

Regions build_regions(const Grid& grid, const Box& omega_box, const Box& w_box) {
    auto check_box = [&](const Box& b, const char* name) {
        if (!(b.lo < b.hi)) {
            throw GeometryError(std::string(name) + ": box lower edge must be below upper edge");
        }
        if (b.lo <= -grid.L || b.hi >= grid.L) {
            throw GeometryError(std::string(name) + ": box must lie strictly inside the grid box");
        }
    };
    check_box(omega_box, "regions.omega");
    check_box(w_box, "regions.w");
    if (omega_box.hi >= w_box.lo && w_box.hi >= omega_box.lo) {
        // Overlap along the axis; in 2D the same interval is used on both axes,
        // so axis overlap is box overlap.
        throw GeometryError("regions: omega and w boxes overlap or touch");
    }

    Regions r;
    r.omega_box = omega_box;
    r.w_box = w_box;
    std::set<Index> omega_set;
    for (Index n = 0; n < grid.N; ++n) {
        if (in_box(grid, n, omega_box)) {
            r.idx_omega.push_back(n);
            omega_set.insert(n);
        } else if (in_box(grid, n, w_box)) {
            r.idx_w.push_back(n);
        }
    }
    for (Index n = 0; n < grid.N; ++n) {
        if (!omega_set.count(n)) r.idx_ext.push_back(n);
    }
    if (r.idx_omega.empty()) throw GeometryError("regions.omega: contains no grid nodes");
    if (r.idx_w.empty()) throw GeometryError("regions.w: contains no grid nodes");

    double min_dist = 1e300;
    for (Index a : r.idx_omega)
        for (Index b : r.idx_w) min_dist = std::min(min_dist, node_dist(grid, a, b));
    if (min_dist < 2.0 * grid.h - 1e-9 * grid.L) {
        std::ostringstream oss;
        oss << "regions: omega/w node distance " << min_dist << " is below the 2h = "
            << 2.0 * grid.h << " separation requirement";
        throw GeometryError(oss.str());
    }

    // Graph-depth layering of Omega measured from its exterior.
    std::vector<int> depth(static_cast<size_t>(grid.N), 0);
    for (Index n : r.idx_omega) {
        bool boundary = false;
        for (Index m : stencil_neighbors_inside(grid, n)) {
            if (!omega_set.count(m)) boundary = true;
        }
        // Nodes touching the box boundary are also boundary-layer nodes:
        // their stencil reaches the Dirichlet ghost layer.
        auto [ix, iy] = grid.axis_indices(n);
        if (ix == 0 || ix == grid.M - 1) boundary = true;
        if (grid.dim == 2 && (iy == 0 || iy == grid.M - 1)) boundary = true;
        depth[static_cast<size_t>(n)] = boundary ? 1 : 0;
    }
    // Relax depths inward until stable (multi-source BFS distance + 1).
    const int kUnset = 1 << 20;
    for (Index n : r.idx_omega) {
        if (depth[static_cast<size_t>(n)] == 0) depth[static_cast<size_t>(n)] = kUnset;
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (Index n : r.idx_omega) {
            if (depth[static_cast<size_t>(n)] == 1) continue;
            int best = kUnset;
            for (Index m : stencil_neighbors_inside(grid, n)) {
                if (omega_set.count(m) && depth[static_cast<size_t>(m)] < kUnset) {
                    best = std::min(best, depth[static_cast<size_t>(m)] + 1);
                }
            }
            if (best < depth[static_cast<size_t>(n)]) {
                depth[static_cast<size_t>(n)] = best;
                changed = true;
            }
        }
    }
    for (Index n : r.idx_omega) {
        const int d = depth[static_cast<size_t>(n)];
        if (d == 1) {
            r.idx_omega_bdry.push_back(n);
        } else {
            r.idx_omega_int.push_back(n);
        }
        if (d >= 3) r.idx_gauge_support.push_back(n);
    }
    return r;
}

Vec sample_field(const Grid& grid, const PointRule& rule) {
    Vec out(grid.N);
    for (Index n = 0; n < grid.N; ++n) {
        auto c = grid.coords(n);
        const double v = rule(c[0], c[1]);
        if (!std::isfinite(v)) {
            throw DataError("sample_field: non-finite sample at node " + std::to_string(n));
        }
        out[n] = v;
    }
    return out;
}

double bump_value(double r2_scaled, double amp, double base) {
    if (r2_scaled >= 1.0) return base;
    return base + amp * std::exp(1.0 - 1.0 / (1.0 - r2_scaled));
}

Vec sample_bump(const Grid& grid, double center_x, double center_y,
                double width, double amp, double base) {
    return sample_field(grid, [&](double x, double y) {
        double r2 = (x - center_x) * (x - center_x);
        if (grid.dim == 2) r2 += (y - center_y) * (y - center_y);
        return bump_value(r2 / (width * width), amp, base);
    });
}

}  // namespace fracdn
