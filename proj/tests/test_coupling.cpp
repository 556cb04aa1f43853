#include <doctest.h>

#include <cmath>

#include "tscond/coupling.hpp"

using namespace tscond;

#ifndef TSCOND_DATA_DIR
#define TSCOND_DATA_DIR "data"
#endif

namespace {

// One straight horizontal channel across the middle of a small panel.
PipeNetwork straight_channel(int n_elements) {
    NetworkSpec spec;
    spec.vertices = {{0.05, 0.1}, {0.35, 0.1}};
    spec.segments.push_back({0, 1, n_elements, 0.004});
    spec.inlet = 0;
    spec.outlet = 1;
    return build_network(spec);
}

ScenarioConfig small_scenario() {
    ScenarioConfig cfg;
    cfg.grid.nx = 18;
    cfg.grid.ny = 8;
    cfg.network.n_channels = 2;
    cfg.network.elements_per_channel = 12;
    cfg.fluid.property_file = std::string(TSCOND_DATA_DIR) + "/r245fa_saturation.txt";
    return cfg;
}

}  // namespace

TEST_SUITE("coupling") {

TEST_CASE("channel mask covers the channel row and nothing else") {
    const StructuredGrid2D grid = build_grid(8, 4, 0.4, 0.2);
    const PipeNetwork net = straight_channel(12);
    const ChannelMask mask = build_channel_mask(grid, net);
    int used_cells = 0;
    for (int K = 0; K < grid.num_elements(); ++K) {
        if (mask.cell_elements[K].empty()) continue;
        ++used_cells;
        // all channel cells sit in the row containing y = 0.1
        CHECK(std::abs(grid.centers[K].y - 0.125) <= 1e-12);
    }
    CHECK(used_cells == 6);  // channel spans x in [0.05, 0.35] over 0.05-wide cells
    int total = 0;
    for (int K = 0; K < grid.num_elements(); ++K) total += (int)mask.cell_elements[K].size();
    CHECK(total == net.num_elements());
    for (int e = 0; e < net.num_elements(); ++e)
        CHECK(grid.contains(net.elements[e].midpoint));
}

TEST_CASE("wall sampling picks the containing cell") {
    const StructuredGrid2D grid = build_grid(8, 4, 0.4, 0.2);
    const PipeNetwork net = straight_channel(12);
    const ChannelMask mask = build_channel_mask(grid, net);
    CellField T_w(grid.num_elements());
    for (int K = 0; K < grid.num_elements(); ++K) T_w[K] = 300.0 + K;
    const std::vector<double> sampled = sample_wall_to_network(T_w, net, mask);
    for (int e = 0; e < net.num_elements(); ++e)
        CHECK(sampled[e] == T_w[mask.element_cell[e]]);
}

TEST_CASE("broadcast aggregates per-cell exchange exactly") {
    const StructuredGrid2D grid = build_grid(8, 4, 0.4, 0.2);
    const PipeNetwork net = straight_channel(12);
    const ChannelMask mask = build_channel_mask(grid, net);
    FluidState state = FluidState::sized(net);
    std::vector<double> h_wc(net.num_elements());
    for (int e = 0; e < net.num_elements(); ++e) {
        state.T_c[e] = 320.0 + e;
        state.G[e] = 1.0 + 0.1 * e;
        h_wc[e] = 2.0 + 0.2 * e;
    }
    const CoolantBroadcast b = broadcast_coolant_to_grid(state, net, mask, h_wc, grid);

    double grid_side = 0.0, net_side = 0.0;
    for (int K = 0; K < grid.num_elements(); ++K) {
        if (mask.cell_elements[K].empty()) {
            CHECK(b.gamma_wc[K] == 0.0);
            CHECK(b.q_wc[K] == 0.0);
            continue;
        }
        grid_side += b.q_wc[K] * grid.areas[K];
        // T_c lies between the element temperatures feeding the cell
        double lo = 1e300, hi = -1e300;
        for (int e : mask.cell_elements[K]) {
            lo = std::min(lo, state.T_c[e]);
            hi = std::max(hi, state.T_c[e]);
        }
        CHECK(b.T_c[K] >= lo - 1e-12);
        CHECK(b.T_c[K] <= hi + 1e-12);
    }
    for (int e = 0; e < net.num_elements(); ++e)
        net_side += h_wc[e] * net.elements[e].h * state.T_c[e];
    CHECK(grid_side == doctest::Approx(net_side).epsilon(1e-13));
}

TEST_CASE("pair solve at the air inflow temperature is a fixed point") {
    const StructuredGrid2D grid = build_grid(10, 6, 0.45, 0.2);
    PanelAirProperties props;
    props.h_aw_eff = 44.0;
    props.T_air_in = 298.15;
    CoolantBroadcast coolant;
    coolant.T_c.assign(grid.num_elements(), 0.0);
    coolant.gamma_wc.assign(grid.num_elements(), 0.0);
    coolant.q_wc.assign(grid.num_elements(), 0.0);
    CouplingControls ctl;
    const CellField init(grid.num_elements(), props.T_air_in);
    const PairSolve s = solve_2d_pair(coolant, props, grid, ctl, init);
    for (double v : s.T_a) CHECK(v == doctest::Approx(props.T_air_in).epsilon(1e-10));
    for (double v : s.T_w) CHECK(v == doctest::Approx(props.T_air_in).epsilon(1e-10));
}

TEST_CASE("linear air conductivity converges in one inner iteration") {
    const StructuredGrid2D grid = build_grid(10, 6, 0.45, 0.2);
    const PipeNetwork net = straight_channel(12);
    const ChannelMask mask = build_channel_mask(grid, net);
    FluidState state = FluidState::sized(net);
    for (int e = 0; e < net.num_elements(); ++e) {
        state.T_c[e] = 358.15;
        state.G[e] = 5.8;
    }
    const std::vector<double> h_wc(net.num_elements(), 3.0);
    const CoolantBroadcast coolant = broadcast_coolant_to_grid(state, net, mask, h_wc, grid);
    PanelAirProperties props;
    props.beta_exp = 0.0;  // conductivity no longer depends on temperature
    CouplingControls ctl;
    const CellField init(grid.num_elements(), props.T_air_in);
    const PairSolve s1 = solve_2d_pair(coolant, props, grid, ctl, init);
    CHECK(s1.iterations == 1);

    // the solve is deterministic
    const PairSolve s2 = solve_2d_pair(coolant, props, grid, ctl, init);
    for (int K = 0; K < grid.num_elements(); ++K) {
        CHECK(s2.T_a[K] == s1.T_a[K]);
        CHECK(s2.T_w[K] == s1.T_w[K]);
    }

    // hot channel warms both fields above the inflow and below the coolant
    double max_w = 0.0;
    for (double v : s1.T_w) max_w = std::max(max_w, v);
    CHECK(max_w > props.T_air_in);
    CHECK(max_w < 358.15);
}

TEST_CASE("zero coupling converges in one counted outer iteration") {
    ScenarioConfig cfg = small_scenario();
    cfg.fluid.h_wc = 0.0;
    cfg.air.h_aw = 0.0;
    const CoupledState st = run_staggered(cfg);
    CHECK(st.converged);
    CHECK(st.outer_iterations == 1);
    // decoupled panel is pinned to the air inflow value
    for (double v : st.T_w) CHECK(v == doctest::Approx(cfg.boundary.T_air_in).epsilon(1e-9));
    // air column stays at the inflow temperature
    for (double v : st.T_a) CHECK(v == doctest::Approx(cfg.boundary.T_air_in).epsilon(1e-9));
    // coolant runs through untouched
    for (double v : st.fluid.T_c) CHECK(v == doctest::Approx(cfg.boundary.T0).epsilon(1e-9));
}

TEST_CASE("small coupled run converges and balances its heat books") {
    const ScenarioConfig cfg = small_scenario();
    const CoupledState st = run_staggered(cfg);
    CHECK(st.converged);
    CHECK(st.outer_iterations <= cfg.coupling.outer_max);

    // network and panel bookkeeping of the same exchange agree exactly
    CHECK(st.heat_panel == doctest::Approx(st.heat_network).epsilon(1e-10));
    // heat into the coolant leaves through the air side
    CHECK(std::abs(st.heat_network + st.heat_panel_air) <=
          0.01 * std::abs(st.heat_panel_air) + 1e-12);

    // fields sit between the two driving temperatures
    for (double v : st.T_w) {
        CHECK(v >= cfg.boundary.T_air_in - 1e-6);
        CHECK(v <= cfg.boundary.T0 + 1e-6);
    }
    CHECK(st.mean_panel_temperature > cfg.boundary.T_air_in);
    CHECK(st.mean_panel_temperature < cfg.boundary.T0);

    // mass is conserved through the loop
    double inflow = 0.0, outflow = 0.0;
    for (int e = 0; e < st.net.num_elements(); ++e) {
        const PipeElement& el = st.net.elements[e];
        if (el.node_a == st.net.inlet_node()) inflow += st.fluid.G[e];
        if (el.node_b == st.net.outlet_node()) outflow += st.fluid.G[e];
    }
    CHECK(inflow == doctest::Approx(cfg.boundary.G_tot).epsilon(1e-9));
    CHECK(outflow == doctest::Approx(cfg.boundary.G_tot).epsilon(1e-9));
}

}  // TEST_SUITE
