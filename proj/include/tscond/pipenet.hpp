// 1D pipeline network: geometry/adjacency, the upwind-stabilized primal-mixed
// discretization with Kirchhoff junction rows, and the mass-momentum and
// energy solves of the coolant model.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "tscond/mfv2d.hpp"  // bernoulli
#include "tscond/sparse.hpp"

namespace tscond {

struct SegmentSpec {
    int first = -1;
    int second = -1;
    int n_elements = 1;
    double diameter = 0.004;
};

struct NetworkSpec {
    std::vector<Vec2> vertices;
    std::vector<SegmentSpec> segments;
    int inlet = -1;
    int outlet = -1;
    // Degree-one vertices besides inlet/outlet that intentionally terminate a
    // branch (they must carry a boundary condition in every solve).
    std::vector<int> extra_terminals;
};

struct PipeSegment {
    int first_vertex = -1;
    int second_vertex = -1;
    double length = 0.0;
    Vec2 direction;  // unit, from first to second endpoint
    double diameter = 0.0;
    int n_elements = 0;
    int first_element = 0;         // offset into the global element list
    std::vector<int> nodes;        // global node ids, n_elements + 1 of them
};

struct PipeElement {
    int segment = -1;
    int node_a = -1;  // upstream in the segment parametrization
    int node_b = -1;
    double h = 0.0;
    Vec2 midpoint;
    Vec2 direction;
    double diameter = 0.0;
};

struct PipeNetwork {
    std::vector<Vec2> vertex_pos;
    int inlet_vertex = -1;
    int outlet_vertex = -1;
    std::vector<PipeSegment> segments;
    std::vector<PipeElement> elements;
    std::vector<Vec2> node_pos;
    std::vector<int> vertex_node;                 // node id of each vertex
    std::vector<std::vector<int>> incidence_minus;  // segments starting at vertex
    std::vector<std::vector<int>> incidence_plus;   // segments ending at vertex

    int num_nodes() const { return static_cast<int>(node_pos.size()); }
    int num_elements() const { return static_cast<int>(elements.size()); }
    int inlet_node() const { return vertex_node[inlet_vertex]; }
    int outlet_node() const { return vertex_node[outlet_vertex]; }
};

// Vertices become shared nodes; each segment adds its interior nodes. Nodes
// and elements are numbered deterministically in declaration order.
inline PipeNetwork build_network(const NetworkSpec& spec) {
    const int nv = static_cast<int>(spec.vertices.size());
    ensure(nv >= 2, "build_network: need at least inlet and outlet vertices");
    ensure(spec.inlet >= 0 && spec.inlet < nv, "build_network: invalid inlet vertex");
    ensure(spec.outlet >= 0 && spec.outlet < nv, "build_network: invalid outlet vertex");
    ensure(!spec.segments.empty(), "build_network: no segments");

    PipeNetwork net;
    net.vertex_pos = spec.vertices;
    net.inlet_vertex = spec.inlet;
    net.outlet_vertex = spec.outlet;
    net.incidence_minus.resize(nv);
    net.incidence_plus.resize(nv);
    net.vertex_node.resize(nv);
    for (int v = 0; v < nv; ++v) {
        net.vertex_node[v] = v;
        net.node_pos.push_back(spec.vertices[v]);
    }

    for (int j = 0; j < static_cast<int>(spec.segments.size()); ++j) {
        const SegmentSpec& s = spec.segments[j];
        ensure(s.first >= 0 && s.first < nv && s.second >= 0 && s.second < nv,
               "build_network: segment endpoint references undeclared vertex");
        ensure(s.n_elements >= 1, "build_network: segment needs at least one element");
        PipeSegment seg;
        seg.first_vertex = s.first;
        seg.second_vertex = s.second;
        const Vec2 delta = spec.vertices[s.second] - spec.vertices[s.first];
        seg.length = norm(delta);
        ensure(seg.length > 0.0, "build_network: zero-length segment");
        seg.direction = (1.0 / seg.length) * delta;
        seg.diameter = s.diameter;
        seg.n_elements = s.n_elements;
        seg.first_element = static_cast<int>(net.elements.size());

        seg.nodes.push_back(net.vertex_node[s.first]);
        const double h = seg.length / s.n_elements;
        for (int k = 1; k < s.n_elements; ++k) {
            seg.nodes.push_back(net.num_nodes());
            net.node_pos.push_back(spec.vertices[s.first] + (k * h) * seg.direction);
        }
        seg.nodes.push_back(net.vertex_node[s.second]);

        for (int k = 0; k < s.n_elements; ++k) {
            PipeElement e;
            e.segment = j;
            e.node_a = seg.nodes[k];
            e.node_b = seg.nodes[k + 1];
            e.h = h;
            e.midpoint = spec.vertices[s.first] + ((k + 0.5) * h) * seg.direction;
            e.direction = seg.direction;
            e.diameter = s.diameter;
            net.elements.push_back(e);
        }
        net.incidence_minus[s.first].push_back(j);
        net.incidence_plus[s.second].push_back(j);
        net.segments.push_back(seg);
    }

    ensure(net.incidence_minus[spec.inlet].size() == 1 && net.incidence_minus[spec.inlet][0] == 0 &&
               net.incidence_plus[spec.inlet].empty(),
           "build_network: inlet must be the first endpoint of segment 1 and of nothing else");
    const int last = static_cast<int>(spec.segments.size()) - 1;
    ensure(net.incidence_plus[spec.outlet].size() == 1 && net.incidence_plus[spec.outlet][0] == last &&
               net.incidence_minus[spec.outlet].empty(),
           "build_network: outlet must be the second endpoint of the last segment");

    // Dangling junctions and connectivity.
    std::vector<int> degree(nv, 0);
    for (const auto& s : spec.segments) {
        ++degree[s.first];
        ++degree[s.second];
    }
    for (int v = 0; v < nv; ++v) {
        if (v == spec.inlet || v == spec.outlet) continue;
        if (std::find(spec.extra_terminals.begin(), spec.extra_terminals.end(), v) !=
            spec.extra_terminals.end())
            continue;
        ensure(degree[v] >= 2, "build_network: dangling junction vertex");
    }
    std::vector<char> seen(nv, 0);
    std::queue<int> frontier;
    frontier.push(spec.inlet);
    seen[spec.inlet] = 1;
    while (!frontier.empty()) {
        const int v = frontier.front();
        frontier.pop();
        for (const auto& s : spec.segments) {
            int other = -1;
            if (s.first == v) other = s.second;
            if (s.second == v) other = s.first;
            if (other >= 0 && !seen[other]) {
                seen[other] = 1;
                frontier.push(other);
            }
        }
    }
    ensure(seen[spec.outlet] != 0, "build_network: network not connected from inlet to outlet");
    for (int v = 0; v < nv; ++v) ensure(seen[v] != 0, "build_network: disconnected vertex");

    return net;
}

// ---------------------------------------------------------------------------
// Generic stabilized primal-mixed solve on a network.
// ---------------------------------------------------------------------------

enum class NodeKind {
    Kirchhoff,      // flux-balance row (interior node or junction)
    Dirichlet,      // value prescribed, row eliminated
    OutflowUpwind,  // terminal node closed with J_out = beta * u
};

struct NodeCondition {
    NodeKind kind = NodeKind::Kirchhoff;
    double value = 0.0;          // Dirichlet value
    double external_flux = 0.0;  // prescribed boundary flux J at the node
};

struct NetworkProblem1D {
    // Per element, constant values.
    std::vector<double> eps;   // diffusion, >= 0
    std::vector<double> beta;  // advection
    std::vector<double> g;     // flux offset (gravity-type source)
    std::vector<double> f;     // volumetric production
    std::vector<NodeCondition> nodes;

    static NetworkProblem1D zero(const PipeNetwork& net) {
        NetworkProblem1D p;
        const int ne = net.num_elements();
        p.eps.assign(ne, 0.0);
        p.beta.assign(ne, 0.0);
        p.g.assign(ne, 0.0);
        p.f.assign(ne, 0.0);
        p.nodes.assign(net.num_nodes(), NodeCondition{});
        return p;
    }
};

namespace detail {

inline double eps_effective(const NetworkProblem1D& p, const PipeElement& e, int idx,
                            bool upwind) {
    double eps = p.eps[idx];
    if (upwind) eps += 0.5 * std::abs(p.beta[idx]) * e.h;
    return eps;
}

}  // namespace detail

struct NetworkSystem {
    SparseMatrix matrix;            // reduced over non-Dirichlet nodes
    std::vector<double> rhs;
    std::vector<int> node_to_dof;   // -1 for Dirichlet nodes
    std::vector<int> dof_to_node;
};

// Assembles the Kirchhoff rows. Each element contributes its two-point flux
//   J = -eps_eff (u_b - u_a)/h + beta (u_a + u_b)/2 - g
// with sign +1 at its upstream node and -1 at its downstream node, so junction
// rows are exactly the flux-conservation coupling conditions.
inline NetworkSystem assemble_pm(const NetworkProblem1D& problem, const PipeNetwork& net,
                                 bool upwind) {
    const int nn = net.num_nodes();
    NetworkSystem sys;
    sys.node_to_dof.assign(nn, -1);
    for (int n = 0; n < nn; ++n) {
        if (problem.nodes[n].kind != NodeKind::Dirichlet) {
            sys.node_to_dof[n] = static_cast<int>(sys.dof_to_node.size());
            sys.dof_to_node.push_back(n);
        }
    }
    const int ndof = static_cast<int>(sys.dof_to_node.size());
    sys.matrix = SparseMatrix(ndof);
    sys.rhs.assign(ndof, 0.0);

    auto scatter = [&](int row_node, int col_node, double value) {
        const int r = sys.node_to_dof[row_node];
        if (r < 0) return;
        const int c = sys.node_to_dof[col_node];
        if (c >= 0) {
            sys.matrix.add(r, c, value);
        } else {
            sys.rhs[r] -= value * problem.nodes[col_node].value;
        }
    };

    for (int idx = 0; idx < net.num_elements(); ++idx) {
        const PipeElement& e = net.elements[idx];
        const double eps_eff = detail::eps_effective(problem, e, idx, upwind);
        const double beta = problem.beta[idx];
        if (eps_eff <= 0.0 && beta == 0.0)
            throw numerical_error("assemble_pm: degenerate element (eps = beta = 0)");
        if (!upwind && problem.eps[idx] <= 0.0)
            throw numerical_error("assemble_pm: hyperbolic element without upwind stabilization");
        const double coeff_a = eps_eff / e.h + 0.5 * beta;
        const double coeff_b = -eps_eff / e.h + 0.5 * beta;

        // sigma = +1 at node_a, -1 at node_b
        scatter(e.node_a, e.node_a, coeff_a);
        scatter(e.node_a, e.node_b, coeff_b);
        scatter(e.node_b, e.node_a, -coeff_a);
        scatter(e.node_b, e.node_b, -coeff_b);

        const double prod = 0.5 * problem.f[idx] * e.h;
        if (sys.node_to_dof[e.node_a] >= 0) sys.rhs[sys.node_to_dof[e.node_a]] += prod + problem.g[idx];
        if (sys.node_to_dof[e.node_b] >= 0) sys.rhs[sys.node_to_dof[e.node_b]] += prod - problem.g[idx];
    }

    for (int n = 0; n < nn; ++n) {
        const NodeCondition& nc = problem.nodes[n];
        const int r = sys.node_to_dof[n];
        if (r < 0) continue;
        sys.rhs[r] += nc.external_flux;
        if (nc.kind == NodeKind::OutflowUpwind) {
            // J_out = beta u at the terminal node; the node must close exactly
            // one element on its downstream side.
            int incident = -1;
            for (int idx = 0; idx < net.num_elements(); ++idx)
                if (net.elements[idx].node_b == n) incident = idx;
            ensure(incident >= 0, "assemble_pm: outflow node is not a downstream endpoint");
            sys.matrix.add(r, r, problem.beta[incident]);
        }
    }
    return sys;
}

// Solves and scatters back to the full nodal vector (Dirichlet values filled in).
inline std::vector<double> solve_network(const NetworkProblem1D& problem, const PipeNetwork& net,
                                         bool upwind, double tol = 1e-10) {
    NetworkSystem sys = assemble_pm(problem, net, upwind);
    const std::vector<double> x = solve_sparse(sys.matrix, sys.rhs, tol);
    std::vector<double> u(net.num_nodes(), 0.0);
    for (int n = 0; n < net.num_nodes(); ++n) {
        const int d = sys.node_to_dof[n];
        u[n] = d >= 0 ? x[d] : problem.nodes[n].value;
    }
    return u;
}

// Per-element flux of the discrete solution.
inline std::vector<double> recover_element_fluxes(const std::vector<double>& u,
                                                  const NetworkProblem1D& problem,
                                                  const PipeNetwork& net, bool upwind) {
    std::vector<double> J(net.num_elements(), 0.0);
    for (int idx = 0; idx < net.num_elements(); ++idx) {
        const PipeElement& e = net.elements[idx];
        const double eps_eff = detail::eps_effective(problem, e, idx, upwind);
        J[idx] = -eps_eff * (u[e.node_b] - u[e.node_a]) / e.h +
                 problem.beta[idx] * 0.5 * (u[e.node_a] + u[e.node_b]) - problem.g[idx];
    }
    return J;
}

// Residual of the nodal conservation law at every non-Dirichlet node.
inline std::vector<double> nodal_conservation_residual(const std::vector<double>& u,
                                                       const NetworkProblem1D& problem,
                                                       const PipeNetwork& net, bool upwind) {
    const std::vector<double> J = recover_element_fluxes(u, problem, net, upwind);
    std::vector<double> res(net.num_nodes(), 0.0);
    for (int idx = 0; idx < net.num_elements(); ++idx) {
        const PipeElement& e = net.elements[idx];
        const double prod = 0.5 * problem.f[idx] * e.h;
        res[e.node_a] += J[idx] - prod;
        res[e.node_b] += -J[idx] - prod;
    }
    for (int n = 0; n < net.num_nodes(); ++n) {
        const NodeCondition& nc = problem.nodes[n];
        if (nc.kind == NodeKind::Dirichlet) {
            res[n] = 0.0;
            continue;
        }
        res[n] -= nc.external_flux;
        if (nc.kind == NodeKind::OutflowUpwind) {
            for (int idx = 0; idx < net.num_elements(); ++idx)
                if (net.elements[idx].node_b == n) res[n] += problem.beta[idx] * u[n];
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Closed-form solution on the three-segment test network.
// ---------------------------------------------------------------------------

struct ThreeSegmentExact {
    double eps = 1.0;
    std::array<double, 3> beta{};
    std::array<double, 3> length{};
    std::array<double, 3> u_start{};  // value at s = 0 of each segment
    std::array<double, 3> u_end{};    // value at s = L
    double omega = 0.0;
    std::array<double, 3> flux{};     // constant per segment

    double u(int segment, double s) const {
        const double b = beta[segment];
        const double L = length[segment];
        const double u0 = u_start[segment];
        const double uL = u_end[segment];
        if (std::abs(b) * L / eps < 1e-12) return u0 + (uL - u0) * s / L;
        // Stable form of (e^{bL/e} - e^{bs/e})/(e^{bL/e} - 1).
        const double w0 = (1.0 - std::exp(b * (s - L) / eps)) / (-std::expm1(-b * L / eps));
        const double wL = (std::exp(b * (s - L) / eps) - std::exp(-b * L / eps)) /
                          (-std::expm1(-b * L / eps));
        return u0 * w0 + uL * wL;
    }
};

// Exact solution of the branching test: one inflow segment splitting into two,
// advection-diffusion with f = g = 0, Dirichlet data at the three terminals.
// The junction value follows from flux continuity J1 = J2 + J3.
inline ThreeSegmentExact exact_network_solution(double eps, std::array<double, 3> beta,
                                                std::array<double, 3> length, double u_inlet,
                                                double u_out2, double u_out3) {
    ensure(eps > 0.0, "exact_network_solution: eps must be > 0");
    ThreeSegmentExact ex;
    ex.eps = eps;
    ex.beta = beta;
    ex.length = length;

    auto t = [&](int i) { return beta[i] * length[i] / eps; };
    const double num = eps / length[0] * bernoulli(-t(0)) * u_inlet +
                       eps / length[1] * bernoulli(t(1)) * u_out2 +
                       eps / length[2] * bernoulli(t(2)) * u_out3;
    const double den = eps / length[0] * bernoulli(t(0)) + eps / length[1] * bernoulli(-t(1)) +
                       eps / length[2] * bernoulli(-t(2));
    ex.omega = num / den;

    ex.u_start = {u_inlet, ex.omega, ex.omega};
    ex.u_end = {ex.omega, u_out2, u_out3};
    for (int i = 0; i < 3; ++i) {
        // J = (eps/L) [ B(-bL/e) u(0) - B(bL/e) u(L) ]
        ex.flux[i] = eps / length[i] *
                     (bernoulli(-t(i)) * ex.u_start[i] - bernoulli(t(i)) * ex.u_end[i]);
    }
    return ex;
}

// ---------------------------------------------------------------------------
// Coolant state and the two physical solves.
// ---------------------------------------------------------------------------

struct FluidState {
    // Nodal
    std::vector<double> phi;       // total dynamical pressure
    std::vector<double> enthalpy;  // specific enthalpy H at nodes
    // Per element
    std::vector<double> G;             // mass flux
    std::vector<double> enthalpy_flux; // W = G H
    std::vector<double> rho;           // mixture density
    std::vector<double> p;             // pressure
    std::vector<double> T_c;           // coolant temperature
    std::vector<double> quality;       // vapor quality x
    long clamp_events = 0;
    long stagnant_elements = 0;

    static FluidState sized(const PipeNetwork& net) {
        FluidState s;
        s.phi.assign(net.num_nodes(), 0.0);
        s.enthalpy.assign(net.num_nodes(), 0.0);
        const int ne = net.num_elements();
        s.G.assign(ne, 0.0);
        s.enthalpy_flux.assign(ne, 0.0);
        s.rho.assign(ne, 0.0);
        s.p.assign(ne, 0.0);
        s.T_c.assign(ne, 0.0);
        s.quality.assign(ne, 0.0);
        return s;
    }
};

struct MomentumOptions {
    double tol = 1e-10;
    int max_iterations = 60;
    double resistance_floor = 1e-12;
    Vec2 gravity{0.0, -9.81};
    double solver_tol = 1e-10;
};

struct MomentumResult {
    int iterations = 0;
    std::vector<double> history;  // relative G update per Picard sweep
};

// Mass/momentum solve: u = phi, J = -G, eps = 1/R, flux offset -rho g.d / R.
// Kirchhoff rows conserve G at every junction; G_tot enters as the inlet
// boundary flux and phi is pinned at the outlet, then shifted so that
// phi(inlet) = p_inlet. Picard-iterates on the resistance R(G).
inline MomentumResult solve_mass_momentum(
    const PipeNetwork& net, FluidState& state, double p_inlet, double G_tot,
    const std::function<double(int element, double G)>& resistance,
    const MomentumOptions& opts = {}) {
    const int ne = net.num_elements();
    std::vector<double> G_lin = state.G;
    for (double& g : G_lin)
        if (std::abs(g) < 1e-12 * std::max(std::abs(G_tot), 1.0)) g = G_tot;

    MomentumResult result;
    NetworkProblem1D prob = NetworkProblem1D::zero(net);
    prob.nodes[net.outlet_node()].kind = NodeKind::Dirichlet;
    prob.nodes[net.outlet_node()].value = 0.0;
    prob.nodes[net.inlet_node()].external_flux = -G_tot;  // J(0) = -G

    std::vector<double> u;
    for (int it = 0; it < opts.max_iterations; ++it) {
        for (int e = 0; e < ne; ++e) {
            const double R = std::max(resistance(e, G_lin[e]), opts.resistance_floor);
            prob.eps[e] = 1.0 / R;
            prob.g[e] = -prob.eps[e] * state.rho[e] * dot(opts.gravity, net.elements[e].direction);
        }
        u = solve_network(prob, net, /*upwind=*/false, opts.solver_tol);
        const std::vector<double> J = recover_element_fluxes(u, prob, net, false);

        double update = 0.0;
        const double scale = std::max(std::abs(G_tot), 1e-30);
        for (int e = 0; e < ne; ++e) update = std::max(update, std::abs(-J[e] - G_lin[e]) / scale);
        result.history.push_back(update);
        ++result.iterations;

        // Recovering G = -J subtracts the hydrostatic part of phi from its
        // neighbor value, so at small flow rates the update cannot drop below
        // the cancellation error of that difference. Stop at that floor.
        double roundoff = 0.0;
        for (int e = 0; e < ne; ++e) {
            const PipeElement& el = net.elements[e];
            roundoff = std::max(roundoff, prob.eps[e] *
                                              (std::abs(u[el.node_a]) + std::abs(u[el.node_b])) /
                                              el.h * std::numeric_limits<double>::epsilon() / scale);
        }

        for (int e = 0; e < ne; ++e) state.G[e] = -J[e];
        if (update <= std::max(opts.tol, 8.0 * roundoff)) {
            // Gauge shift: the momentum system fixes phi up to a constant.
            const double shift = p_inlet - u[net.inlet_node()];
            for (double& v : u) v += shift;
            state.phi = u;
            for (int e = 0; e < ne; ++e) {
                const PipeElement& el = net.elements[e];
                const double phi_mid = 0.5 * (u[el.node_a] + u[el.node_b]);
                state.p[e] = phi_mid - state.G[e] * state.G[e] / state.rho[e];
            }
            return result;
        }
        for (int e = 0; e < ne; ++e) G_lin[e] = 0.5 * (G_lin[e] + state.G[e]);
    }
    throw convergence_error("solve_mass_momentum: Picard iteration on R(G) did not converge",
                            result.history);
}

struct EnergyOptions {
    double stagnant_fraction = 1e-8;   // |G| threshold relative to G_tot
    double eps_min_scale = 1e-10;
    double solver_tol = 1e-10;
};

// Energy solve: u = H, J = W, eps = 0, beta = G, f = h_wc (T_w - T_c) with
// T_c lagged from the previous state update. Pure upwind stabilization;
// stagnant elements get a small diffusion floor.
inline void solve_energy(const PipeNetwork& net, FluidState& state,
                         const std::vector<double>& T_wall, const std::vector<double>& h_wc,
                         double H_inlet, double G_ref, const EnergyOptions& opts = {}) {
    const int ne = net.num_elements();
    NetworkProblem1D prob = NetworkProblem1D::zero(net);
    const double eps_min = opts.eps_min_scale * std::max(std::abs(G_ref), 1.0);
    state.stagnant_elements = 0;
    for (int e = 0; e < ne; ++e) {
        prob.beta[e] = state.G[e];
        prob.f[e] = h_wc[e] * (T_wall[e] - state.T_c[e]);
        if (std::abs(state.G[e]) < opts.stagnant_fraction * std::max(std::abs(G_ref), 1e-30)) {
            prob.eps[e] = eps_min;
            ++state.stagnant_elements;
        }
    }
    prob.nodes[net.inlet_node()].kind = NodeKind::Dirichlet;
    prob.nodes[net.inlet_node()].value = H_inlet;
    prob.nodes[net.outlet_node()].kind = NodeKind::OutflowUpwind;

    state.enthalpy = solve_network(prob, net, /*upwind=*/true, opts.solver_tol);
    state.enthalpy_flux = recover_element_fluxes(state.enthalpy, prob, net, true);
}

}  // namespace tscond
