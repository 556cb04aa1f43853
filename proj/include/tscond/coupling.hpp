// Staggered coupling of the 2D air/panel solves with the 1D two-phase
// network: field transfer between grid and network, the monolithic 2D block
// solve, and the outer fixed-point loop.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "tscond/mfv2d.hpp"
#include "tscond/pipenet.hpp"
#include "tscond/reduction.hpp"
#include "tscond/scenario.hpp"
#include "tscond/twophase.hpp"

namespace tscond {

// Each 1D element is assigned to the 2D cell containing its midpoint. Using
// the same piecewise-constant pairing for both transfer directions makes the
// discrete wall-coolant heat exchange identical on the two sides.
struct ChannelMask {
    std::vector<int> element_cell;                 // per 1D element
    std::vector<std::vector<int>> cell_elements;   // inverse map
};

inline ChannelMask build_channel_mask(const StructuredGrid2D& grid, const PipeNetwork& net) {
    ChannelMask mask;
    mask.element_cell.resize(net.num_elements());
    mask.cell_elements.resize(grid.num_elements());
    for (int e = 0; e < net.num_elements(); ++e) {
        const Vec2 mid = net.elements[e].midpoint;
        ensure(grid.contains(mid), "build_channel_mask: channel element outside the panel");
        const int K = grid.locate(mid);
        mask.element_cell[e] = K;
        mask.cell_elements[K].push_back(e);
    }
    return mask;
}

inline std::vector<double> sample_wall_to_network(const CellField& T_w, const PipeNetwork& net,
                                                  const ChannelMask& mask) {
    std::vector<double> out(net.num_elements());
    for (int e = 0; e < net.num_elements(); ++e) out[e] = T_w[mask.element_cell[e]];
    return out;
}

struct CoolantBroadcast {
    CellField T_c;       // flux-weighted coolant temperature where channels run
    CellField gamma_wc;  // wall-coolant exchange coefficient per cell, 0 off-channel
    CellField q_wc;      // matching source term carrying the coolant temperature
};

// Cells crossed by channel elements receive the wall-coolant coupling. The
// reaction coefficient and its source aggregate every element in the cell
// with its length as weight, so summing the panel equation reproduces the
// network-side heat exactly. The reported T_c field uses |G|-weighted
// averaging (falling back to length weights in stagnant cells).
inline CoolantBroadcast broadcast_coolant_to_grid(const FluidState& state, const PipeNetwork& net,
                                                  const ChannelMask& mask,
                                                  const std::vector<double>& h_wc,
                                                  const StructuredGrid2D& grid) {
    const int nel = grid.num_elements();
    CoolantBroadcast b;
    b.T_c.assign(nel, 0.0);
    b.gamma_wc.assign(nel, 0.0);
    b.q_wc.assign(nel, 0.0);
    for (int K = 0; K < nel; ++K) {
        const auto& elems = mask.cell_elements[K];
        if (elems.empty()) continue;
        double wsum = 0.0, wT = 0.0, lsum = 0.0, lT = 0.0;
        for (int e : elems) {
            const double len = net.elements[e].h;
            b.gamma_wc[K] += h_wc[e] * len / grid.areas[K];
            b.q_wc[K] += h_wc[e] * len * state.T_c[e] / grid.areas[K];
            const double w = std::abs(state.G[e]) * len;
            wsum += w;
            wT += w * state.T_c[e];
            lsum += len;
            lT += len * state.T_c[e];
        }
        b.T_c[K] = wsum > 0.0 ? wT / wsum : lT / lsum;
    }
    return b;
}

struct PanelAirProperties {
    double k0 = 0.026;       // air conductivity reference
    double T_ref = 298.15;
    double beta_exp = 0.9;   // air conductivity exponent
    double rho_cp = 1.184 * 1005.0;
    double v_hat = 1.0;      // effective vertical air speed
    double h_aw_eff = 44.0;  // air-wall exchange scaled by the reduction
    double k_wall = 237.0;
    double T_air_in = 298.15;
};

struct PairSolve {
    CellField T_a;
    CellField T_w;
    int iterations = 0;
    std::vector<double> history;  // relative coefficient update per sweep
};

struct PairProblems {
    AdrProblem2D air;
    AdrProblem2D panel;
};

// Discrete problems of the monolithic block solve, minus the off-diagonal
// air-wall exchange which couples the two. A panel with no exchange terms at
// all would be a pure Neumann problem; its temperature is then pinned to the
// air inflow value instead.
inline PairProblems build_pair_problems(const CoolantBroadcast& coolant,
                                        const PanelAirProperties& props,
                                        const StructuredGrid2D& grid, const CellField& k_air) {
    const int nel = grid.num_elements();
    PairProblems p{AdrProblem2D::uniform(grid, 1.0, {0.0, props.rho_cp * props.v_hat},
                                         props.h_aw_eff, 0.0),
                   AdrProblem2D::uniform(grid, props.k_wall, {0.0, 0.0}, 0.0, 0.0)};
    p.air.alpha = k_air;
    for (int edge = 0; edge < grid.num_edges(); ++edge) {
        const Edge& e = grid.edges[edge];
        if (e.owner_minus >= 0) continue;
        if (e.normal.y < -0.5) {
            p.air.boundary[edge] = {BoundaryKind::Dirichlet, props.T_air_in};
        } else if (e.normal.y > 0.5) {
            p.air.boundary[edge] = {BoundaryKind::ZeroDiffusiveFlux, 0.0};
        } else {
            p.air.boundary[edge] = {BoundaryKind::ZeroTotalFlux, 0.0};
        }
        p.panel.boundary[edge] = {BoundaryKind::ZeroDiffusiveFlux, 0.0};
    }
    const double gamma_max = *std::max_element(coolant.gamma_wc.begin(), coolant.gamma_wc.end());
    if (props.h_aw_eff == 0.0 && gamma_max == 0.0) {
        for (int K = 0; K < nel; ++K) {
            p.panel.gamma[K] = 1.0;
            p.panel.source[K] = props.T_air_in;
        }
    } else {
        for (int K = 0; K < nel; ++K) {
            p.panel.gamma[K] = props.h_aw_eff + coolant.gamma_wc[K];
            p.panel.source[K] = coolant.q_wc[K];
        }
    }
    return p;
}

inline CellField air_conductivity(const PanelAirProperties& props, const CellField& T) {
    CellField k(T.size());
    for (std::size_t K = 0; K < T.size(); ++K)
        k[K] = power_law_conductivity(props.k0, props.T_ref, props.beta_exp, T[K]);
    return k;
}

// Monolithic solve of the air and panel equations coupled through the
// air-wall exchange, with Picard lagging of the temperature-dependent air
// conductivity. Counted iterations are coefficient rebuilds: a linear
// problem (exponent 0) converges in one.
inline PairSolve solve_2d_pair(const CoolantBroadcast& coolant, const PanelAirProperties& props,
                               const StructuredGrid2D& grid, const CouplingControls& ctl,
                               const CellField& T_a_init) {
    const int nel = grid.num_elements();
    PairSolve out;
    out.T_a = T_a_init;

    CellField k_air = air_conductivity(props, out.T_a);
    for (int it = 0; it < ctl.inner2d_max; ++it) {
        const PairProblems probs = build_pair_problems(coolant, props, grid, k_air);
        const AssembledSystem sys_a =
            assemble(probs.air, grid, StabilizationKind::ScharfetterGummel);
        const AssembledSystem sys_w =
            assemble(probs.panel, grid, StabilizationKind::ScharfetterGummel);

        SparseMatrix block(2 * nel);
        for (const auto& t : sys_a.matrix.triplets) block.add(t.row(), t.col(), t.value());
        for (const auto& t : sys_w.matrix.triplets)
            block.add(nel + t.row(), nel + t.col(), t.value());
        std::vector<double> rhs(2 * nel);
        for (int K = 0; K < nel; ++K) {
            block.add(K, nel + K, -props.h_aw_eff * grid.areas[K]);
            block.add(nel + K, K, -props.h_aw_eff * grid.areas[K]);
            rhs[K] = sys_a.rhs[K];
            rhs[nel + K] = sys_w.rhs[K];
        }

        const std::vector<double> x = solve_sparse(block, rhs, ctl.solver_tol);
        out.T_a.assign(x.begin(), x.begin() + nel);
        out.T_w.assign(x.begin() + nel, x.end());
        ++out.iterations;

        const CellField k_new = air_conductivity(props, out.T_a);
        double change = 0.0;
        for (int K = 0; K < nel; ++K)
            change = std::max(change, std::abs(k_new[K] - k_air[K]) / k_air[K]);
        out.history.push_back(change);
        k_air = k_new;
        if (change <= ctl.inner2d_tol) return out;
    }
    throw convergence_error("solve_2d_pair: Picard iteration on k(T) did not converge",
                            out.history);
}

struct CoupledState {
    StructuredGrid2D grid;
    PipeNetwork net;
    ChannelMask mask;
    CellField T_a, T_w, T_c_grid;
    FluidState fluid;
    std::vector<double> T_w_channel;  // wall temperature seen by each 1D element
    std::vector<double> h_wc_channel;
    bool converged = false;
    int outer_iterations = 0;
    std::vector<double> residual_history;  // one entry per sweep, warm-up first
    double heat_network = 0.0;  // wall-to-coolant heat, network bookkeeping
    double heat_panel = 0.0;    // same exchange summed on the panel side
    double heat_panel_air = 0.0;  // panel-to-air exchange
    double mean_panel_temperature = 0.0;
};

namespace detail {

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace detail

// One pass of the 1D inner loop sequence: momentum, energy, state inversion,
// iterated on the friction/temperature feedback.
inline void solve_network_inner(const PipeNetwork& net, FluidState& state,
                                const SaturationModel& sat, const CorrelationSet& corr,
                                const std::vector<double>& T_w_channel,
                                std::vector<double>& h_wc_channel, double p_inlet, double G_tot,
                                double H_inlet, double temp_scale, const CouplingControls& ctl) {
    const int ne = net.num_elements();
    MomentumOptions mopts;
    mopts.solver_tol = ctl.solver_tol;
    EnergyOptions eopts;
    eopts.solver_tol = ctl.solver_tol;

    std::vector<double> mu(ne);
    std::vector<double> history;
    for (int it = 0; it < ctl.inner1d_max; ++it) {
        for (int e = 0; e < ne; ++e) mu[e] = mixture_viscosity(state.T_c[e], state.quality[e], sat);
        auto resistance = [&](int e, double G) {
            const double D = net.elements[e].diameter;
            return blasius_resistance(G, state.rho[e], mu[e], D) +
                   laminar_resistance(state.rho[e], mu[e], D);
        };
        solve_mass_momentum(net, state, p_inlet, G_tot, resistance, mopts);

        for (int e = 0; e < ne; ++e)
            h_wc_channel[e] = corr.wall_coolant_h(state.quality[e], state.p[e]);
        solve_energy(net, state, T_w_channel, h_wc_channel, H_inlet, G_tot, eopts);

        const double p_lo = sat.p_sat(sat.T_min());
        const double p_hi = sat.p_sat(sat.T_max());
        double change = 0.0;
        for (int e = 0; e < ne; ++e) {
            const PipeElement& el = net.elements[e];
            const double H_mid = 0.5 * (state.enthalpy[el.node_a] + state.enthalpy[el.node_b]);
            double p = state.p[e];
            if (p < p_lo || p > p_hi) {
                p = std::clamp(p, p_lo, p_hi);
                ++state.clamp_events;
            }
            const InvertedState inv = invert_state_at_p(H_mid, p, sat);
            if (inv.subcooled || inv.superheated) ++state.clamp_events;
            change = std::max(change, std::abs(inv.T - state.T_c[e]));
            // Halved update: the momentum/energy/state cycle can settle into
            // a small limit cycle through the tabulated-property kinks; the
            // relaxation turns it into a contraction.
            state.T_c[e] += 0.5 * (inv.T - state.T_c[e]);
            state.quality[e] += 0.5 * (inv.x - state.quality[e]);
            state.rho[e] += 0.5 * (inv.rho - state.rho[e]);
        }
        history.push_back(change / temp_scale);
        if (history.back() <= ctl.inner1d_tol) return;
    }
    throw convergence_error("solve_network_inner: coolant fixed point did not converge", history);
}

inline PanelAirProperties derive_properties(const ScenarioConfig& cfg) {
    const ReductionSpec rspec =
        shape_preset(cfg.reduction.shape, cfg.reduction.S, cfg.reduction.beta_exp);
    const ReductionCoefficients lam =
        reduction_coefficients(rspec, cfg.reduction.quadrature_panels);

    double air_speed = cfg.fluid.air_speed;
    ensure(cfg.fluid.air_velocity == "constant" || cfg.fluid.air_velocity == "natural",
           "derive_properties: unknown air-velocity model '" + cfg.fluid.air_velocity + "'");
    if (cfg.fluid.air_velocity == "natural") {
        CorrelationSet nat;
        nat.air_velocity = CorrelationSet::AirVelocity::NaturalConvection;
        air_speed = nat.air_speed(cfg.boundary.T0, cfg.boundary.T_air_in);
    }
    const EffectiveCoefficients eff =
        effective_coefficients(lam.lambda1, lam.lambda2, cfg.air.h_aw, air_speed);

    PanelAirProperties props;
    props.k0 = cfg.air.k0;
    props.T_ref = cfg.air.T_ref;
    props.beta_exp = cfg.air.beta_exp;
    props.rho_cp = cfg.air.rho * cfg.air.c_p;
    props.v_hat = eff.v_hat;
    props.h_aw_eff = eff.h_hat;
    props.k_wall = cfg.air.k_wall;
    props.T_air_in = cfg.boundary.T_air_in;
    return props;
}

// The outer staggered loop. A warm-up sweep seeds every field, then counted
// iterations relax the exchanged wall/coolant temperatures with factor
// `damping` until the combined update drops under the outer tolerance.
inline CoupledState run_staggered(const ScenarioConfig& cfg) {
    CoupledState st;
    st.grid = build_grid(cfg.grid.nx, cfg.grid.ny, cfg.grid.width, cfg.grid.height);
    st.net = build_network(expand_network_preset(cfg.network, cfg.grid.width, cfg.grid.height));
    st.mask = build_channel_mask(st.grid, st.net);

    const SaturationModel sat = SaturationModel::from_file(cfg.fluid.property_file);
    CorrelationSet corr;
    if (cfg.fluid.heat_transfer == "shah") {
        corr.heat_transfer = CorrelationSet::HeatTransfer::ShahBaseline;
    } else {
        ensure(cfg.fluid.heat_transfer == "constant",
               "run_staggered: unknown heat-transfer model '" + cfg.fluid.heat_transfer + "'");
    }
    corr.h_wc_constant = cfg.fluid.h_wc;
    corr.shah_h_L = cfg.fluid.shah_h_L;

    const PanelAirProperties props = derive_properties(cfg);

    const double T0 = cfg.boundary.T0;
    const double p_inlet = cfg.boundary.p_inlet > 0.0 ? cfg.boundary.p_inlet : sat.p_sat(T0);
    const double H_inlet = mixture_enthalpy(T0, cfg.boundary.x_inlet, sat);
    const double temp_scale = std::max(std::abs(T0 - cfg.boundary.T_air_in), 1e-12);

    const int nel = st.grid.num_elements();
    const int ne = st.net.num_elements();
    st.T_a.assign(nel, cfg.boundary.T_air_in);
    st.T_w.assign(nel, cfg.boundary.T_air_in);
    st.fluid = FluidState::sized(st.net);
    for (int e = 0; e < ne; ++e) {
        st.fluid.T_c[e] = T0;
        st.fluid.quality[e] = cfg.boundary.x_inlet;
        st.fluid.rho[e] = mixture_density(T0, cfg.boundary.x_inlet, sat);
        st.fluid.p[e] = p_inlet;
    }
    st.h_wc_channel.assign(ne, corr.h_wc_constant);
    st.T_w_channel.assign(ne, cfg.boundary.T_air_in);

    const double theta = cfg.coupling.damping;
    auto sweep = [&](bool damped) {
        const CellField T_a_prev = st.T_a;
        const CellField T_w_prev = st.T_w;
        const std::vector<double> T_c_prev = st.fluid.T_c;

        const CoolantBroadcast bc =
            broadcast_coolant_to_grid(st.fluid, st.net, st.mask, st.h_wc_channel, st.grid);
        const PairSolve pair = solve_2d_pair(bc, props, st.grid, cfg.coupling, st.T_a);
        st.T_a = pair.T_a;
        st.T_w = pair.T_w;
        if (damped)
            for (int K = 0; K < nel; ++K)
                st.T_w[K] = theta * st.T_w[K] + (1.0 - theta) * T_w_prev[K];

        st.T_w_channel = sample_wall_to_network(st.T_w, st.net, st.mask);
        solve_network_inner(st.net, st.fluid, sat, corr, st.T_w_channel, st.h_wc_channel, p_inlet,
                            cfg.boundary.G_tot, H_inlet, temp_scale, cfg.coupling);
        if (damped)
            for (int e = 0; e < ne; ++e)
                st.fluid.T_c[e] = theta * st.fluid.T_c[e] + (1.0 - theta) * T_c_prev[e];

        const double res = std::max({detail::max_abs_diff(st.T_a, T_a_prev),
                                     detail::max_abs_diff(st.T_w, T_w_prev),
                                     detail::max_abs_diff(st.fluid.T_c, T_c_prev)}) /
                           temp_scale;
        st.residual_history.push_back(res);
        return res;
    };

    sweep(false);  // warm-up, seeds all fields from the initial guesses
    for (int it = 0; it < cfg.coupling.outer_max; ++it) {
        const double res = sweep(true);
        ++st.outer_iterations;
        if (res <= cfg.coupling.outer_tol) {
            st.converged = true;
            break;
        }
    }
    if (!st.converged)
        throw convergence_error("run_staggered: outer fixed point did not converge",
                                st.residual_history);

    // Heat bookkeeping: the same wall-coolant exchange summed on the network
    // and panel sides, and the panel-to-air exchange.
    const CoolantBroadcast bc =
        broadcast_coolant_to_grid(st.fluid, st.net, st.mask, st.h_wc_channel, st.grid);
    st.T_c_grid = bc.T_c;
    st.heat_network = 0.0;
    for (int e = 0; e < ne; ++e)
        st.heat_network +=
            st.h_wc_channel[e] * st.net.elements[e].h * (st.T_w_channel[e] - st.fluid.T_c[e]);
    st.heat_panel = 0.0;
    st.heat_panel_air = 0.0;
    double area = 0.0;
    st.mean_panel_temperature = 0.0;
    for (int K = 0; K < nel; ++K) {
        st.heat_panel += (bc.gamma_wc[K] * st.T_w[K] - bc.q_wc[K]) * st.grid.areas[K];
        st.heat_panel_air += props.h_aw_eff * (st.T_w[K] - st.T_a[K]) * st.grid.areas[K];
        st.mean_panel_temperature += st.T_w[K] * st.grid.areas[K];
        area += st.grid.areas[K];
    }
    st.mean_panel_temperature /= area;
    return st;
}

}  // namespace tscond
