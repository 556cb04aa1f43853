#include <doctest.h>

#include "tscond/scenario.hpp"

using namespace tscond;

TEST_SUITE("scenario-io") {

TEST_CASE("serialize-parse round trip is the identity") {
    ScenarioConfig c;
    const std::string text = serialize_scenario(c);
    const ScenarioConfig back = parse_scenario(text);
    CHECK(serialize_scenario(back) == text);
}

TEST_CASE("round trip preserves explicit geometry and overrides") {
    ScenarioConfig c;
    c.grid.nx = 17;
    c.grid.width = 0.5;
    c.network.preset = "explicit";
    c.network.vertices = {{0.0, 0.1}, {0.4, 0.1}};
    c.network.segments = {{0, 1, 12, 0.003}};
    c.network.inlet = 0;
    c.network.outlet = 1;
    c.boundary.G_tot = 11.6;
    c.coupling.damping = 0.5;
    c.fluid.heat_transfer = "shah";
    const ScenarioConfig back = parse_scenario(serialize_scenario(c));
    CHECK(back.grid.nx == 17);
    CHECK(back.network.vertices.size() == 2);
    CHECK(back.network.vertices[1].x == doctest::Approx(0.4));
    CHECK(back.network.segments[0].n_elements == 12);
    CHECK(back.network.segments[0].diameter == doctest::Approx(0.003));
    CHECK(back.boundary.G_tot == doctest::Approx(11.6));
    CHECK(back.coupling.damping == doctest::Approx(0.5));
    CHECK(back.fluid.heat_transfer == "shah");
    CHECK(serialize_scenario(back) == serialize_scenario(c));
}

TEST_CASE("parser rejects malformed input") {
    CHECK_THROWS_AS(parse_scenario("schema_version 2\n"), config_error);
    CHECK_THROWS_AS(parse_scenario("[grid]\nnx not_a_number\n"), config_error);
    CHECK_THROWS_AS(parse_scenario("[grid]\nnx 4\nnx 5\n"), config_error);
    CHECK_THROWS_AS(parse_scenario("[grid\nnx 4\n"), config_error);
    CHECK_THROWS_AS(parse_scenario("[coupling]\ndamping 1.5\n"), config_error);
    CHECK_THROWS_AS(parse_scenario("[boundary]\nG_tot -1\n"), config_error);
    CHECK_THROWS_AS(parse_scenario("[grid]\nnx\n"), config_error);
    // comments and unknown sections are tolerated
    CHECK_NOTHROW(parse_scenario("# comment\n[grid]\nnx 4 # inline\n"));
}

TEST_CASE("deviceA preset expands to a closed loop") {
    NetworkConfig nc;
    nc.preset = "deviceA";
    nc.n_channels = 3;
    nc.channel_length = 0.35;
    const NetworkSpec spec = expand_network_preset(nc, 0.45, 0.2);
    // feed + (n-1) riser + n channels + (n-1) downcomer + tail
    CHECK(spec.segments.size() == 3 * 3);
    CHECK(spec.segments.front().first == spec.inlet);
    CHECK(spec.segments.back().second == spec.outlet);
    CHECK_NOTHROW(build_network(spec));
    // channels are horizontal and inside the panel
    for (const auto& v : spec.vertices) {
        CHECK(v.x >= 0.0);
        CHECK(v.x <= 0.45);
        CHECK(v.y >= 0.0);
        CHECK(v.y <= 0.2);
    }
}

TEST_CASE("remaining presets build") {
    NetworkConfig nc;
    nc.preset = "deviceB";
    nc.n_channels = 4;
    CHECK_NOTHROW(build_network(expand_network_preset(nc, 0.45, 0.2)));
    nc.preset = "deviceC";
    nc.channel_length = 0.15;
    CHECK_NOTHROW(build_network(expand_network_preset(nc, 0.45, 0.2)));
    nc.preset = "horizontal11";
    nc.channel_length = 0.39;
    const NetworkSpec h11 = expand_network_preset(nc, 0.5, 0.25);
    CHECK(h11.segments.size() == 33);
    CHECK_NOTHROW(build_network(h11));
    nc.preset = "octagonal";
    CHECK_THROWS_AS(expand_network_preset(nc, 0.5, 0.25), config_error);
}

TEST_CASE("file round trip") {
    ScenarioConfig c;
    c.output.directory = "roundtrip_out";
    const std::string path = "scenario_roundtrip_test.cfg";
    save_scenario(c, path);
    const ScenarioConfig back = load_scenario(path);
    CHECK(serialize_scenario(back) == serialize_scenario(c));
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_scenario("does_not_exist.cfg"), config_error);
}

}  // TEST_SUITE
