#pragma once

#include <array>
#include <functional>
#include <vector>

#include "fracdn/types.hpp"

namespace fracdn {

// Uniform Cartesian grid of interior nodes on the box [-L, L]^dim.
// The box boundary itself carries homogeneous Dirichlet data and is not
// represented by nodes. Spacing h = 2L/(M+1); per-axis node coordinates
// x_k = -L + (k+1)h for k = 0..M-1. Node indices are row-major:
// n = ix + M*iy (the x index varies fastest).
struct Grid {
    int dim = 1;
    double L = 1.0;
    int M = 0;
    double h = 0.0;
    Index N = 0;

    // Per-axis index decomposition of a flat node index.
    std::array<int, 2> axis_indices(Index n) const;
    // Coordinates of node n (second component unused when dim == 1).
    std::array<double, 2> coords(Index n) const;
    // Flat index from per-axis indices.
    Index flat_index(int ix, int iy = 0) const;
    // Nearest node to a point inside the box.
    Index nearest_node(double x, double y = 0.0) const;
};

// Axis-aligned box [lo, hi], applied to every axis of the grid.
struct Box {
    double lo = 0.0;
    double hi = 0.0;
};

// Index sets for the source region Omega, the measurement region W, and the
// exterior Omega_e (every node not in Omega). Omega and W must be separated
// by at least 2h node-to-node so that their discrete closures are disjoint.
struct Regions {
    Box omega_box;
    Box w_box;
    std::vector<Index> idx_omega;
    std::vector<Index> idx_w;
    std::vector<Index> idx_ext;
    // Partition of Omega for the local Dirichlet problem: the boundary layer
    // (Omega-nodes with a stencil neighbour outside Omega) and the interior.
    std::vector<Index> idx_omega_bdry;
    std::vector<Index> idx_omega_int;
    // Nodes of Omega at graph depth >= 3 from the exterior; the admissible
    // support for gauge fields (two vanishing node layers).
    std::vector<Index> idx_gauge_support;
};

using PointRule = std::function<double(double, double)>;

Grid build_grid(int dim, double L, int M);

Regions build_regions(const Grid& grid, const Box& omega_box, const Box& w_box);

Vec sample_field(const Grid& grid, const PointRule& rule);

// Smooth compactly supported bump: base + amp * exp(1 - 1/(1 - r^2)) for
// r = |x - center| / width < 1, base outside. C^inf, peak value base + amp.
double bump_value(double r2_scaled, double amp, double base);
Vec sample_bump(const Grid& grid, double center_x, double center_y,
                double width, double amp, double base);

namespace detail {
// Grid construction without the M >= 8 contract check; used by tests that
// exercise tiny classical stencils.
Grid make_grid_unchecked(int dim, double L, int M);
}  // namespace detail

}  // namespace fracdn
