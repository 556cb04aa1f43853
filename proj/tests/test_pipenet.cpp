#include <doctest.h>

#include <cmath>

#include "tscond/bench.hpp"
#include "tscond/pipenet.hpp"

using namespace tscond;

namespace {

NetworkSpec single_pipe(int n) {
    NetworkSpec s;
    s.vertices = {{0.0, 0.0}, {1.0, 0.0}};
    s.segments = {{0, 1, n, 0.004}};
    s.inlet = 0;
    s.outlet = 1;
    return s;
}

// inlet - junction - two parallel pipes - junction - outlet
NetworkSpec parallel_pipes(int n) {
    NetworkSpec s;
    s.vertices = {{0.0, 0.0}, {3.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}};
    s.segments = {{0, 2, n, 0.004}, {2, 3, n, 0.004}, {2, 3, n, 0.004}, {3, 1, n, 0.004}};
    s.inlet = 0;
    s.outlet = 1;
    return s;
}

}  // namespace

TEST_SUITE("pipenet") {

TEST_CASE("network construction and numbering") {
    const PipeNetwork net = build_network(branching_test_spec(4));
    CHECK(net.num_elements() == 12);
    // 4 vertices + 3 interior nodes per segment
    CHECK(net.num_nodes() == 4 + 3 * 3);
    CHECK(net.inlet_node() == 0);
    CHECK(net.outlet_node() == 1);
    // vertices come first, then segment-interior nodes in declaration order
    CHECK(net.segments[0].nodes.front() == 0);
    CHECK(net.segments[0].nodes.back() == 2);
    CHECK(net.segments[0].nodes[1] == 4);
    CHECK(net.elements[0].h == doctest::Approx(0.25));
    CHECK(net.segments[1].length == doctest::Approx(1.0));
    CHECK(net.segments[2].length == doctest::Approx(1.0));
}

TEST_CASE("construction errors") {
    NetworkSpec s = single_pipe(4);
    s.segments[0].second = 0;  // zero-length
    s.segments[0].first = 0;
    CHECK_THROWS_AS(build_network(s), config_error);

    NetworkSpec dangling = single_pipe(4);
    dangling.vertices.push_back({0.5, 0.5});
    dangling.segments.push_back({1, 2, 2, 0.004});
    // vertex 2 ends a branch but the last segment no longer ends at the outlet
    CHECK_THROWS_AS(build_network(dangling), config_error);

    NetworkSpec disconnected = single_pipe(4);
    disconnected.vertices.push_back({5.0, 5.0});
    CHECK_THROWS_AS(build_network(disconnected), config_error);
}

TEST_CASE("stabilized rows match the tridiagonal stencil") {
    const PipeNetwork net = build_network(single_pipe(4));
    const double h = 0.25, eps = 0.3, beta = 2.0;
    NetworkProblem1D prob = NetworkProblem1D::zero(net);
    for (int e = 0; e < 4; ++e) {
        prob.eps[e] = eps;
        prob.beta[e] = beta;
    }
    prob.nodes[0] = {NodeKind::Dirichlet, 1.0, 0.0};
    prob.nodes[1] = {NodeKind::Dirichlet, 0.0, 0.0};
    const NetworkSystem sys = assemble_pm(prob, net, true);
    const auto A = sys.matrix.compressed();
    // interior node rows: (-eps/h - beta, 2 eps/h + beta, -eps/h) for beta > 0
    const int mid = sys.node_to_dof[3];  // middle interior node
    const int lo = sys.node_to_dof[2], hi = sys.node_to_dof[4];
    CHECK(A.coeff(mid, lo) == doctest::Approx(-eps / h - beta).epsilon(1e-13));
    CHECK(A.coeff(mid, mid) == doctest::Approx(2.0 * eps / h + beta).epsilon(1e-13));
    CHECK(A.coeff(mid, hi) == doctest::Approx(-eps / h).epsilon(1e-13));
    // row sum zero: the scheme reproduces constants
    CHECK(A.coeff(mid, lo) + A.coeff(mid, mid) + A.coeff(mid, hi) ==
          doctest::Approx(0.0).epsilon(1e-13));
    CHECK(is_column_dominant_m_matrix(sys.matrix));

    // beta = 0 gives the plain diffusion stencil
    for (int e = 0; e < 4; ++e) prob.beta[e] = 0.0;
    const auto A0 = assemble_pm(prob, net, true).matrix.compressed();
    CHECK(A0.coeff(mid, lo) == doctest::Approx(-eps / h));
    CHECK(A0.coeff(mid, mid) == doctest::Approx(2.0 * eps / h));
    CHECK(A0.coeff(mid, hi) == doctest::Approx(-eps / h));
}

TEST_CASE("hyperbolic element without stabilization is rejected") {
    const PipeNetwork net = build_network(single_pipe(2));
    NetworkProblem1D prob = NetworkProblem1D::zero(net);
    prob.beta = {1.0, 1.0};
    prob.nodes[0] = {NodeKind::Dirichlet, 1.0, 0.0};
    prob.nodes[1] = {NodeKind::Dirichlet, 0.0, 0.0};
    CHECK_THROWS_AS(assemble_pm(prob, net, false), numerical_error);
    CHECK_NOTHROW(assemble_pm(prob, net, true));
}

TEST_CASE("closed-form junction value") {
    const auto ex = exact_network_solution(1.0, {3.0, 2.0, 1.0}, {1.0, 1.0, 1.0}, 1.0, 0.0, 0.0);
    CHECK(ex.omega == doctest::Approx(0.7791293136659712).epsilon(1e-13));
    CHECK(ex.flux[0] == doctest::Approx(ex.flux[1] + ex.flux[2]).epsilon(1e-13));
    // endpoint consistency of the profile evaluator
    CHECK(ex.u(0, 0.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(ex.u(0, 1.0) == doctest::Approx(ex.omega).epsilon(1e-13));
    CHECK(ex.u(1, 1.0) == doctest::Approx(0.0).epsilon(1e-12));

    // zero advection: junction value from the resistor network, here 1/3
    const auto ex0 = exact_network_solution(1.0, {0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, 1.0, 0.0, 0.0);
    CHECK(ex0.omega == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(ex0.u(0, 0.5) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("discrete solution converges to the closed form") {
    const auto row = network_study(1.0, {0.25, 0.125, 0.0625, 0.03125});
    CHECK(row.order_u > 0.8);
    CHECK(row.order_u < 1.2);
    CHECK(row.error_u.back() < row.error_u.front());
}

TEST_CASE("advection-dominated flux is exact to round-off") {
    const auto row = network_study(0.02, {0.0625});
    CHECK(row.error_flux[0] <= 1e-9);
}

TEST_CASE("momentum solve splits parallel pipes by resistance") {
    const PipeNetwork net = build_network(parallel_pipes(4));
    FluidState state = FluidState::sized(net);
    for (int e = 0; e < net.num_elements(); ++e) state.rho[e] = 100.0;
    const double G_tot = 6.0;
    auto resistance = [&](int e, double) {
        return net.elements[e].segment == 1 ? 1.0 : net.elements[e].segment == 2 ? 2.0 : 0.5;
    };
    MomentumOptions opts;
    opts.gravity = {0.0, 0.0};
    const MomentumResult res = solve_mass_momentum(net, state, 5.0e5, G_tot, resistance, opts);
    CHECK(res.iterations >= 1);
    // branch flows split inversely to resistance: 2/3 and 1/3 of the total
    const int b1 = net.segments[1].first_element;
    const int b2 = net.segments[2].first_element;
    CHECK(state.G[b1] == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(state.G[b2] == doctest::Approx(2.0).epsilon(1e-10));
    // feed segments carry everything
    CHECK(state.G[0] == doctest::Approx(G_tot).epsilon(1e-10));
    CHECK(state.G[net.segments[3].first_element] == doctest::Approx(G_tot).epsilon(1e-10));
    // gauge: phi at the inlet equals the prescribed inlet pressure
    CHECK(state.phi[net.inlet_node()] == doctest::Approx(5.0e5));
    // the potential gradient equals R G along the flow
    CHECK(state.phi[net.outlet_node()] - state.phi[net.inlet_node()] ==
          doctest::Approx(0.5 * G_tot + 4.0 + 0.5 * G_tot).epsilon(1e-10));
    // p = phi - G^2 / rho at the element midpoint
    const PipeElement& el = net.elements[0];
    const double phi_mid = 0.5 * (state.phi[el.node_a] + state.phi[el.node_b]);
    CHECK(state.p[0] == doctest::Approx(phi_mid - G_tot * G_tot / 100.0));
}

TEST_CASE("momentum solve conserves mass at junctions") {
    const PipeNetwork net = build_network(parallel_pipes(3));
    FluidState state = FluidState::sized(net);
    for (int e = 0; e < net.num_elements(); ++e) state.rho[e] = 40.0;
    auto resistance = [&](int e, double G) { return 0.1 + 0.05 * std::abs(G); };
    MomentumOptions opts;
    opts.gravity = {0.0, -9.81};
    solve_mass_momentum(net, state, 1.0e5, 2.0, resistance, opts);
    // per-segment constancy
    for (const PipeSegment& seg : net.segments) {
        const double G0 = state.G[seg.first_element];
        for (int k = 0; k < seg.n_elements; ++k)
            CHECK(state.G[seg.first_element + k] == doctest::Approx(G0).epsilon(1e-11));
    }
    // junction balance
    const double in1 = state.G[net.segments[0].n_elements - 1];
    const double out1 = state.G[net.segments[1].first_element] +
                        state.G[net.segments[2].first_element];
    CHECK(in1 == doctest::Approx(out1).epsilon(1e-11));
}

TEST_CASE("energy solve transports the upwind flux exactly") {
    const int n = 8;
    const PipeNetwork net = build_network(single_pipe(n));
    FluidState state = FluidState::sized(net);
    const double G = 2.0, h_wc = 3.0, T_w = 300.0, T_c = 350.0;
    for (int e = 0; e < n; ++e) {
        state.G[e] = G;
        state.T_c[e] = T_c;
    }
    const std::vector<double> T_wall(n, T_w);
    const std::vector<double> h(n, h_wc);
    const double H_in = 4.0e5;
    solve_energy(net, state, T_wall, h, H_in, G);
    CHECK(state.stagnant_elements == 0);

    // pure upwind with constant production f: the flux is beta * u(upstream),
    // so interior nodes follow u_k = u_0 + k f h / beta exactly
    const double f = h_wc * (T_w - T_c);
    const double hh = 1.0 / n;
    const auto& nodes = net.segments[0].nodes;
    CHECK(state.enthalpy[nodes[0]] == doctest::Approx(H_in));
    for (int k = 1; k < n; ++k)
        CHECK(state.enthalpy[nodes[k]] ==
              doctest::Approx(H_in + k * f * hh / G).epsilon(1e-12));
    // the outflow node closes with half of the last element's production
    CHECK(state.enthalpy[nodes[n]] ==
          doctest::Approx(state.enthalpy[nodes[n - 1]] + 0.5 * f * hh / G).epsilon(1e-12));
    // recovered enthalpy flux equals beta times the upstream nodal value
    for (int e = 0; e < n; ++e)
        CHECK(state.enthalpy_flux[e] == doctest::Approx(G * state.enthalpy[nodes[e]]));
}

TEST_CASE("stagnant branches are regularized, not fatal") {
    const PipeNetwork net = build_network(parallel_pipes(3));
    FluidState state = FluidState::sized(net);
    for (int e = 0; e < net.num_elements(); ++e) state.rho[e] = 40.0;
    auto resistance = [&](int e, double) {
        return net.elements[e].segment == 2 ? 1.0e12 : 1.0;
    };
    MomentumOptions opts;
    opts.gravity = {0.0, 0.0};
    solve_mass_momentum(net, state, 1.0e5, 1.0, resistance, opts);
    for (int e = 0; e < net.num_elements(); ++e) state.T_c[e] = 340.0;
    const std::vector<double> T_wall(net.num_elements(), 320.0);
    const std::vector<double> h(net.num_elements(), 3.0);
    solve_energy(net, state, T_wall, h, 4.0e5, 1.0);
    CHECK(state.stagnant_elements > 0);
    for (double v : state.enthalpy) CHECK(std::isfinite(v));
}

TEST_CASE("nodal conservation residual vanishes for discrete solutions") {
    const PipeNetwork net = build_network(branching_test_spec(8));
    NetworkProblem1D prob = NetworkProblem1D::zero(net);
    for (int e = 0; e < net.num_elements(); ++e) {
        prob.eps[e] = 0.5;
        prob.beta[e] = 1.0 + net.elements[e].segment;
        prob.f[e] = 0.25;
    }
    prob.nodes[net.inlet_node()] = {NodeKind::Dirichlet, 1.0, 0.0};
    prob.nodes[net.outlet_node()] = {NodeKind::Dirichlet, 0.0, 0.0};
    prob.nodes[net.vertex_node[3]] = {NodeKind::Dirichlet, 0.0, 0.0};
    const auto u = solve_network(prob, net, true, 1e-12);
    for (double r : nodal_conservation_residual(u, prob, net, true))
        CHECK(std::abs(r) <= 1e-11);
}

}  // TEST_SUITE
