// Rectangular decomposition of (0,W)x(0,H) with the element/edge adjacency
// and geometric factors used by the cell-centered flux scheme.
#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "tscond/common.hpp"

namespace tscond {

// One scalar per element.
using CellField = std::vector<double>;

// One signed scalar per edge, measured along the edge's plus-normal.
using EdgeFluxField = std::vector<double>;

struct Edge {
    double length = 0.0;    // |e|
    Vec2 normal;            // n_e^+, points from owner_plus into owner_minus
    int owner_plus = -1;    // K^+
    int owner_minus = -1;   // K^- , -1 on boundary edges
    double center_dist = 0.0;  // d_e; boundary edges use center-to-midpoint
    Vec2 midpoint;
};

struct StructuredGrid2D {
    int nx = 0, ny = 0;
    double width = 0.0, height = 0.0;
    double hx = 0.0, hy = 0.0;

    std::vector<Vec2> centers;     // x_{G,K}
    std::vector<double> areas;     // |K|
    std::vector<Edge> edges;
    // Per element: the four edge indices (left, right, bottom, top).
    std::vector<std::array<int, 4>> element_edges;

    int num_elements() const { return nx * ny; }
    int num_edges() const { return static_cast<int>(edges.size()); }

    int element_index(int ix, int iy) const { return iy * nx + ix; }

    // Outward normal of element K at one of its edges. The edge stores the
    // plus-normal; flip it when K sits on the minus side.
    Vec2 outward_normal(int element, int edge) const {
        const Edge& e = edges[edge];
        return element == e.owner_plus ? e.normal : Vec2{-e.normal.x, -e.normal.y};
    }

    int neighbor(int element, int edge) const {
        const Edge& e = edges[edge];
        return element == e.owner_plus ? e.owner_minus : e.owner_plus;
    }

    // Element containing a point, clamped to the domain.
    int locate(Vec2 p) const {
        int ix = static_cast<int>(p.x / hx);
        int iy = static_cast<int>(p.y / hy);
        if (ix < 0) ix = 0;
        if (iy < 0) iy = 0;
        if (ix >= nx) ix = nx - 1;
        if (iy >= ny) iy = ny - 1;
        return element_index(ix, iy);
    }

    bool contains(Vec2 p) const {
        return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
    }
};

// Builds the uniform nx-by-ny grid. Edge numbering is deterministic:
// all vertical edges in an x-then-y sweep, then all horizontal edges.
inline StructuredGrid2D build_grid(int nx, int ny, double width, double height) {
    ensure(nx >= 1 && ny >= 1, "build_grid: element counts must be >= 1");
    ensure(width > 0.0 && height > 0.0, "build_grid: domain extents must be > 0");

    StructuredGrid2D g;
    g.nx = nx;
    g.ny = ny;
    g.width = width;
    g.height = height;
    g.hx = width / nx;
    g.hy = height / ny;

    const int nel = nx * ny;
    g.centers.resize(nel);
    g.areas.assign(nel, g.hx * g.hy);
    g.element_edges.resize(nel);
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix)
            g.centers[g.element_index(ix, iy)] = {(ix + 0.5) * g.hx, (iy + 0.5) * g.hy};

    // Vertical edges: nx+1 columns per row, normal +x.
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix <= nx; ++ix) {
            Edge e;
            e.length = g.hy;
            e.midpoint = {ix * g.hx, (iy + 0.5) * g.hy};
            if (ix == 0) {
                e.owner_plus = g.element_index(0, iy);
                e.normal = {-1.0, 0.0};  // outward
                e.center_dist = 0.5 * g.hx;
            } else if (ix == nx) {
                e.owner_plus = g.element_index(nx - 1, iy);
                e.normal = {1.0, 0.0};
                e.center_dist = 0.5 * g.hx;
            } else {
                e.owner_plus = g.element_index(ix - 1, iy);
                e.owner_minus = g.element_index(ix, iy);
                e.normal = {1.0, 0.0};
                e.center_dist = g.hx;
            }
            const int id = static_cast<int>(g.edges.size());
            if (ix > 0) g.element_edges[g.element_index(ix - 1, iy)][1] = id;
            if (ix < nx) g.element_edges[g.element_index(ix, iy)][0] = id;
            g.edges.push_back(e);
        }
    }
    // Horizontal edges: normal +y.
    for (int iy = 0; iy <= ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            Edge e;
            e.length = g.hx;
            e.midpoint = {(ix + 0.5) * g.hx, iy * g.hy};
            if (iy == 0) {
                e.owner_plus = g.element_index(ix, 0);
                e.normal = {0.0, -1.0};
                e.center_dist = 0.5 * g.hy;
            } else if (iy == ny) {
                e.owner_plus = g.element_index(ix, ny - 1);
                e.normal = {0.0, 1.0};
                e.center_dist = 0.5 * g.hy;
            } else {
                e.owner_plus = g.element_index(ix, iy - 1);
                e.owner_minus = g.element_index(ix, iy);
                e.normal = {0.0, 1.0};
                e.center_dist = g.hy;
            }
            const int id = static_cast<int>(g.edges.size());
            if (iy > 0) g.element_edges[g.element_index(ix, iy - 1)][3] = id;
            if (iy < ny) g.element_edges[g.element_index(ix, iy)][2] = id;
            g.edges.push_back(e);
        }
    }
    return g;
}

struct JumpAverage {
    Vec2 jump;
    double average = 0.0;
};

// Jump w+ n+ + w- n- and average (w+ + w-)/2 across an edge.
// On boundary edges the exterior value is taken as zero.
inline JumpAverage jump_and_average(const CellField& field, const StructuredGrid2D& grid,
                                    int edge) {
    const Edge& e = grid.edges[edge];
    const double wp = field[e.owner_plus];
    const double wm = e.owner_minus >= 0 ? field[e.owner_minus] : 0.0;
    JumpAverage r;
    r.jump = {(wp - wm) * e.normal.x, (wp - wm) * e.normal.y};
    r.average = 0.5 * (wp + wm);
    return r;
}

}  // namespace tscond
