// Stabilized mixed finite-volume discretization of the 2D
// advection-diffusion-reaction problem on structured grids.
//
// The flux through an element edge reduces to a two-point formula
//   j = [ -alpha (1 + rho(Pe)) (u_L - u_K)/d + beta.n (u_K + u_L)/2 ] |e|
// so the scalar unknowns satisfy a five-point scheme with an M-matrix
// whenever the edge stabilization satisfies rho(Pe) >= Pe - 1.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tscond/mesh2d.hpp"
#include "tscond/sparse.hpp"

namespace tscond {

// B(x) = x / (e^x - 1), the Bernoulli ratio. Stable near the removable
// singularity at 0 and free of overflow for large |x|:
// B(x) -> -x as x -> -inf and B(x) -> 0 as x -> +inf.
inline double bernoulli(double x) {
    if (std::isnan(x)) throw std::domain_error("bernoulli: NaN input");
    const double ax = std::abs(x);
    if (ax < 1e-4) return 1.0 - 0.5 * x + x * x / 12.0;  // series, error O(x^4)
    if (x > 700.0) return 0.0;
    if (x < -700.0) return -x;
    return x / std::expm1(x);
}

enum class StabilizationKind { Upwind, ScharfetterGummel };

// Edge artificial-viscosity function rho(Pe). Both choices satisfy
// rho >= Pe - 1, which is what the discrete maximum principle needs.
inline double stabilization(StabilizationKind kind, double peclet) {
    if (!(peclet >= 0.0)) throw std::domain_error("stabilization: Peclet number must be >= 0");
    switch (kind) {
        case StabilizationKind::Upwind:
            return peclet;
        case StabilizationKind::ScharfetterGummel:
            return peclet - 1.0 + bernoulli(2.0 * peclet);
    }
    throw std::domain_error("stabilization: unknown kind");
}

// Pe_e = |beta.n| d_e / (2 alpha)
inline double local_peclet(double alpha, double beta_n, double d_e) {
    if (!(alpha > 0.0)) throw std::domain_error("local_peclet: alpha must be > 0");
    if (!(d_e > 0.0)) throw std::domain_error("local_peclet: d_e must be > 0");
    return std::abs(beta_n) * d_e / (2.0 * alpha);
}

enum class BoundaryKind {
    Dirichlet,         // scalar value prescribed on the edge
    ZeroDiffusiveFlux, // -alpha grad(u).n = 0; convective outflow kept
    ZeroTotalFlux,     // (-alpha grad(u) + beta u).n = 0
};

struct BoundaryCondition {
    BoundaryKind kind = BoundaryKind::Dirichlet;
    double value = 0.0;
};

struct AdrProblem2D {
    CellField alpha;          // diffusion, per element, > 0
    std::vector<Vec2> beta;   // convective field, constant per element
    CellField gamma;          // reaction, >= 0
    CellField source;         // f
    // Indexed by edge id; only boundary edges are consulted.
    std::vector<BoundaryCondition> boundary;

    static AdrProblem2D uniform(const StructuredGrid2D& grid, double alpha, Vec2 beta,
                                double gamma, double f) {
        AdrProblem2D p;
        const int nel = grid.num_elements();
        p.alpha.assign(nel, alpha);
        p.beta.assign(nel, beta);
        p.gamma.assign(nel, gamma);
        p.source.assign(nel, f);
        p.boundary.assign(grid.num_edges(), BoundaryCondition{});
        return p;
    }
};

namespace detail {

struct EdgeData {
    double alpha_face = 0.0;
    double beta_n = 0.0;  // beta . n with n outward from K
    double rho = 0.0;
};

inline EdgeData edge_data(const AdrProblem2D& p, const StructuredGrid2D& grid, int element,
                          int edge, StabilizationKind kind) {
    const Edge& e = grid.edges[edge];
    const int nb = grid.neighbor(element, edge);
    const Vec2 n = grid.outward_normal(element, edge);

    EdgeData d;
    const double aK = p.alpha[element];
    if (!(aK > 0.0)) throw std::domain_error("assemble: alpha must be > 0 on every element");
    if (nb >= 0) {
        const double aL = p.alpha[nb];
        if (!(aL > 0.0)) throw std::domain_error("assemble: alpha must be > 0 on every element");
        d.alpha_face = 2.0 * aK * aL / (aK + aL);  // harmonic mean
        d.beta_n = 0.5 * dot(p.beta[element] + p.beta[nb], n);
    } else {
        d.alpha_face = aK;
        d.beta_n = dot(p.beta[element], n);
    }
    d.rho = stabilization(kind, local_peclet(d.alpha_face, d.beta_n, e.center_dist));
    return d;
}

}  // namespace detail

struct AssembledSystem {
    SparseMatrix matrix;
    CellField rhs;
};

// Builds the reduced cell-centered system K u = g. Dirichlet data are folded
// into g through the boundary-edge flux with the half-pitch distance d_e.
inline AssembledSystem assemble(const AdrProblem2D& problem, const StructuredGrid2D& grid,
                                StabilizationKind kind) {
    const int nel = grid.num_elements();
    AssembledSystem sys{SparseMatrix(nel), CellField(nel, 0.0)};

    for (int K = 0; K < nel; ++K) {
        double diag = problem.gamma[K] * grid.areas[K];
        sys.rhs[K] += problem.source[K] * grid.areas[K];

        for (int edge : grid.element_edges[K]) {
            const Edge& e = grid.edges[edge];
            const int nb = grid.neighbor(K, edge);
            if (nb >= 0) {
                const auto d = detail::edge_data(problem, grid, K, edge, kind);
                const double trans = d.alpha_face * (1.0 + d.rho) / e.center_dist;
                diag += (trans + 0.5 * d.beta_n) * e.length;
                sys.matrix.add(K, nb, (-trans + 0.5 * d.beta_n) * e.length);
                continue;
            }
            const BoundaryCondition& bc = problem.boundary[edge];
            switch (bc.kind) {
                case BoundaryKind::Dirichlet: {
                    const auto d = detail::edge_data(problem, grid, K, edge, kind);
                    const double trans = d.alpha_face * (1.0 + d.rho) / e.center_dist;
                    diag += (trans + 0.5 * d.beta_n) * e.length;
                    sys.rhs[K] += (trans - 0.5 * d.beta_n) * bc.value * e.length;
                    break;
                }
                case BoundaryKind::ZeroDiffusiveFlux:
                    diag += dot(problem.beta[K], grid.outward_normal(K, edge)) * e.length;
                    break;
                case BoundaryKind::ZeroTotalFlux:
                    break;
            }
        }
        sys.matrix.add(K, K, diag);
    }
    return sys;
}

inline CellField solve(const AssembledSystem& sys, double tol = 1e-10) {
    return solve_sparse(sys.matrix, sys.rhs, tol);
}

// Per-edge flux of the discrete solution, oriented along the edge plus-normal.
inline EdgeFluxField recover_fluxes(const CellField& u, const AdrProblem2D& problem,
                                    const StructuredGrid2D& grid, StabilizationKind kind) {
    EdgeFluxField flux(grid.num_edges(), 0.0);
    for (int edge = 0; edge < grid.num_edges(); ++edge) {
        const Edge& e = grid.edges[edge];
        const int K = e.owner_plus;
        if (e.owner_minus >= 0) {
            const auto d = detail::edge_data(problem, grid, K, edge, kind);
            const double trans = d.alpha_face * (1.0 + d.rho) / e.center_dist;
            flux[edge] =
                (-trans * (u[e.owner_minus] - u[K]) + d.beta_n * 0.5 * (u[K] + u[e.owner_minus])) *
                e.length;
            continue;
        }
        const BoundaryCondition& bc = problem.boundary[edge];
        switch (bc.kind) {
            case BoundaryKind::Dirichlet: {
                const auto d = detail::edge_data(problem, grid, K, edge, kind);
                const double trans = d.alpha_face * (1.0 + d.rho) / e.center_dist;
                flux[edge] =
                    (-trans * (bc.value - u[K]) + d.beta_n * 0.5 * (u[K] + bc.value)) * e.length;
                break;
            }
            case BoundaryKind::ZeroDiffusiveFlux:
                flux[edge] = dot(problem.beta[K], e.normal) * u[K] * e.length;
                break;
            case BoundaryKind::ZeroTotalFlux:
                flux[edge] = 0.0;
                break;
        }
    }
    return flux;
}

// Residual of the local conservation law: sum_l j_l + u gamma |K| - f |K|.
inline CellField element_flux_residual(const CellField& u, const EdgeFluxField& flux,
                                       const AdrProblem2D& problem,
                                       const StructuredGrid2D& grid) {
    CellField res(grid.num_elements(), 0.0);
    for (int K = 0; K < grid.num_elements(); ++K) {
        double sum = 0.0;
        for (int edge : grid.element_edges[K]) {
            const double sign = grid.edges[edge].owner_plus == K ? 1.0 : -1.0;
            sum += sign * flux[edge];
        }
        res[K] = sum + u[K] * problem.gamma[K] * grid.areas[K] -
                 problem.source[K] * grid.areas[K];
    }
    return res;
}

}  // namespace tscond
