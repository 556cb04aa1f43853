// Run configuration: the sectioned plain-text config format, defaults
// matching the reference parameter table, and the named network presets.
#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tscond/pipenet.hpp"

namespace tscond {

struct GridConfig {
    int nx = 54, ny = 24;
    double width = 0.45, height = 0.2;
};

struct ReductionConfig {
    double S = 0.05;
    double beta_exp = 0.0;       // exponent entering lambda_1
    std::string shape = "constant";
    int quadrature_panels = 16;
};

struct NetworkConfig {
    std::string preset = "deviceA";  // deviceA | deviceB | deviceC | horizontal11 | explicit
    int n_channels = 4;
    double channel_length = 0.35;
    double diameter = 0.004;
    int elements_per_channel = 24;
    // Explicit geometry, used when preset = explicit.
    std::vector<Vec2> vertices;
    std::vector<SegmentSpec> segments;
    int inlet = 0, outlet = 1;
};

struct FluidConfig {
    std::string property_file = "data/r245fa_saturation.txt";
    std::string heat_transfer = "constant";  // constant | shah
    double h_wc = 3.0;                       // wall-coolant exchange per unit length
    double shah_h_L = 100.0;
    std::string air_velocity = "constant";   // constant | natural
    double air_speed = 1.0;
};

struct BoundaryConfig {
    double T_air_in = 298.15;
    double T0 = 358.15;       // coolant saturation temperature at the inlet
    double G_tot = 5.8;
    double x_inlet = 1.0;
    double p_inlet = 0.0;     // 0 = derive from the saturation curve at T0
};

struct CouplingControls {
    double outer_tol = 1e-6;
    int outer_max = 200;
    double inner2d_tol = 1e-8;
    int inner2d_max = 50;
    // The coolant fixed point cannot settle below the round-off floor of the
    // momentum flux recovery once it propagates through the advective energy
    // balance, so the default stays above that floor.
    double inner1d_tol = 1e-6;
    int inner1d_max = 200;
    double damping = 0.7;     // theta on exchanged T_c / T_w fields
    double solver_tol = 1e-10;
};

struct AirConfig {
    double k0 = 0.026;        // conductivity reference k0 at T_ref
    double T_ref = 298.15;
    double beta_exp = 0.9;    // conductivity power-law exponent
    double rho = 1.184;
    double c_p = 1005.0;
    double h_aw = 1.1;        // raw air-wall coefficient, scaled by 1/lambda_1
    double k_wall = 237.0;
};

struct OutputConfig {
    std::string directory = "out";
};

struct ScenarioConfig {
    int schema_version = 1;
    GridConfig grid;
    ReductionConfig reduction;
    NetworkConfig network;
    FluidConfig fluid;
    BoundaryConfig boundary;
    CouplingControls coupling;
    AirConfig air;
    OutputConfig output;
};

// ---------------------------------------------------------------------------
// Network presets. Geometries are approximate reconstructions of the three
// manifold layouts: all are built inside the panel rectangle passed in.
// ---------------------------------------------------------------------------

namespace detail {

inline int elems_for(double length, double target_h) {
    const int n = static_cast<int>(std::lround(length / target_h));
    return n < 1 ? 1 : n;
}

}  // namespace detail

// deviceA: bottom-left inlet, left riser header, n horizontal channels, right
//          downcomer header to a bottom-right outlet (bottom channel has the
//          shortest path).
// deviceB: as A but the right header rises to a top-right outlet (Z layout,
//          near-equal path lengths).
// deviceC: bottom distribution header, n vertical channels, top collection
//          header back to a top-left outlet.
// horizontal11: deviceA with 11 channels (intended with a 0.5 x 0.25 panel).
inline NetworkSpec expand_network_preset(const NetworkConfig& cfg, double W, double H) {
    if (cfg.preset == "explicit") {
        NetworkSpec spec;
        spec.vertices = cfg.vertices;
        spec.segments = cfg.segments;
        spec.inlet = cfg.inlet;
        spec.outlet = cfg.outlet;
        return spec;
    }

    int n = cfg.n_channels;
    double L = cfg.channel_length;
    std::string kind = cfg.preset;
    if (cfg.preset == "horizontal11") {
        n = 11;
        kind = "deviceA";
    }
    ensure(n >= 1, "expand_network_preset: need at least one channel");
    ensure(kind == "deviceA" || kind == "deviceB" || kind == "deviceC",
           "expand_network_preset: unknown preset '" + cfg.preset + "'");

    NetworkSpec spec;
    const double target_h = L / cfg.elements_per_channel;
    auto add_segment = [&](int a, int b, int elems) {
        SegmentSpec s;
        s.first = a;
        s.second = b;
        s.n_elements = elems;
        s.diameter = cfg.diameter;
        spec.segments.push_back(s);
    };

    if (kind == "deviceA" || kind == "deviceB") {
        ensure(L < W, "expand_network_preset: channel length must fit inside the panel width");
        const double x0 = 0.5 * (W - L);
        const double x1 = x0 + L;
        std::vector<double> y(n);
        for (int i = 0; i < n; ++i) y[i] = H * (i + 1) / (n + 1);
        const double yb = 0.5 * y[0];

        spec.vertices.push_back({x0, yb});  // 0: inlet
        const double yo = kind == "deviceA" ? yb : y[n - 1] + 0.5 * (H - y[n - 1]);
        spec.vertices.push_back({x1, yo});  // 1: outlet
        std::vector<int> left(n), right(n);
        for (int i = 0; i < n; ++i) {
            left[i] = static_cast<int>(spec.vertices.size());
            spec.vertices.push_back({x0, y[i]});
        }
        for (int i = 0; i < n; ++i) {
            right[i] = static_cast<int>(spec.vertices.size());
            spec.vertices.push_back({x1, y[i]});
        }

        add_segment(0, left[0], detail::elems_for(y[0] - yb, target_h));
        for (int i = 0; i + 1 < n; ++i)
            add_segment(left[i], left[i + 1], detail::elems_for(y[i + 1] - y[i], target_h));
        for (int i = 0; i < n; ++i) add_segment(left[i], right[i], cfg.elements_per_channel);
        if (kind == "deviceA") {
            for (int i = n - 1; i > 0; --i)
                add_segment(right[i], right[i - 1], detail::elems_for(y[i] - y[i - 1], target_h));
            add_segment(right[0], 1, detail::elems_for(y[0] - yb, target_h));
        } else {
            for (int i = 0; i + 1 < n; ++i)
                add_segment(right[i], right[i + 1], detail::elems_for(y[i + 1] - y[i], target_h));
            add_segment(right[n - 1], 1, detail::elems_for(yo - y[n - 1], target_h));
        }
    } else {  // deviceC, vertical channels
        ensure(L < H, "expand_network_preset: channel length must fit inside the panel height");
        const double y0 = 0.5 * (H - L);
        const double y1 = y0 + L;
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) x[i] = W * (i + 1) / (n + 1);
        const double xb = 0.5 * x[0];

        spec.vertices.push_back({xb, y0});  // 0: inlet
        spec.vertices.push_back({xb, y1});  // 1: outlet
        std::vector<int> bot(n), top(n);
        for (int i = 0; i < n; ++i) {
            bot[i] = static_cast<int>(spec.vertices.size());
            spec.vertices.push_back({x[i], y0});
        }
        for (int i = 0; i < n; ++i) {
            top[i] = static_cast<int>(spec.vertices.size());
            spec.vertices.push_back({x[i], y1});
        }

        add_segment(0, bot[0], detail::elems_for(x[0] - xb, target_h));
        for (int i = 0; i + 1 < n; ++i)
            add_segment(bot[i], bot[i + 1], detail::elems_for(x[i + 1] - x[i], target_h));
        for (int i = 0; i < n; ++i) add_segment(bot[i], top[i], cfg.elements_per_channel);
        for (int i = n - 1; i > 0; --i)
            add_segment(top[i], top[i - 1], detail::elems_for(x[i] - x[i - 1], target_h));
        add_segment(top[0], 1, detail::elems_for(x[0] - xb, target_h));
    }
    spec.inlet = 0;
    spec.outlet = 1;
    return spec;
}

// ---------------------------------------------------------------------------
// Config text format: `[section]` headers, `key value...` lines, `#` comments,
// one `schema_version` key at the top.
// ---------------------------------------------------------------------------

namespace detail {

struct ConfigReader {
    std::map<std::string, std::vector<std::string>> values;   // "section.key" -> tokens
    std::map<std::string, std::vector<std::string>> repeated; // keys allowed multiple times

    static ConfigReader parse(const std::string& text) {
        ConfigReader r;
        std::istringstream in(text);
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::istringstream ls(line);
            std::string key;
            if (!(ls >> key)) continue;
            if (key.front() == '[') {
                ensure(key.back() == ']', "config: malformed section header at line " +
                                              std::to_string(lineno));
                section = key.substr(1, key.size() - 2);
                continue;
            }
            std::string rest, tok;
            std::vector<std::string> toks;
            while (ls >> tok) toks.push_back(tok);
            ensure(!toks.empty(), "config: key '" + key + "' has no value at line " +
                                      std::to_string(lineno));
            const std::string full = section.empty() ? key : section + "." + key;
            if (key == "vertex" || key == "segment") {
                std::string joined;
                for (const auto& t : toks) joined += (joined.empty() ? "" : " ") + t;
                r.repeated[full].push_back(joined);
            } else {
                ensure(r.values.find(full) == r.values.end(),
                       "config: duplicate key '" + full + "'");
                r.values[full] = toks;
            }
        }
        return r;
    }

    bool has(const std::string& key) const { return values.count(key) != 0; }

    const std::string& str(const std::string& key) const {
        auto it = values.find(key);
        ensure(it != values.end(), "config: missing key '" + key + "'");
        return it->second[0];
    }

    void get(const std::string& key, std::string& out) const {
        if (has(key)) out = str(key);
    }
    void get(const std::string& key, double& out) const {
        if (!has(key)) return;
        try {
            std::size_t pos = 0;
            out = std::stod(str(key), &pos);
            ensure(pos == str(key).size(), "trailing characters");
        } catch (const std::exception&) {
            throw config_error("config: key '" + key + "' is not a number");
        }
    }
    void get(const std::string& key, int& out) const {
        if (!has(key)) return;
        try {
            std::size_t pos = 0;
            out = std::stoi(str(key), &pos);
            ensure(pos == str(key).size(), "trailing characters");
        } catch (const std::exception&) {
            throw config_error("config: key '" + key + "' is not an integer");
        }
    }
};

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace detail

inline ScenarioConfig parse_scenario(const std::string& text) {
    const auto r = detail::ConfigReader::parse(text);
    ScenarioConfig c;
    int version = 1;
    r.get("schema_version", version);
    ensure(version == 1, "config: unsupported schema_version");
    c.schema_version = version;

    r.get("grid.nx", c.grid.nx);
    r.get("grid.ny", c.grid.ny);
    r.get("grid.width", c.grid.width);
    r.get("grid.height", c.grid.height);
    ensure(c.grid.nx >= 1 && c.grid.ny >= 1, "config: grid counts must be >= 1");
    ensure(c.grid.width > 0.0 && c.grid.height > 0.0, "config: grid extents must be > 0");

    r.get("reduction.S", c.reduction.S);
    r.get("reduction.beta_exp", c.reduction.beta_exp);
    r.get("reduction.shape", c.reduction.shape);
    r.get("reduction.quadrature_panels", c.reduction.quadrature_panels);
    ensure(c.reduction.S > 0.0, "config: reduction pitch must be > 0");

    r.get("network.preset", c.network.preset);
    r.get("network.n_channels", c.network.n_channels);
    r.get("network.channel_length", c.network.channel_length);
    r.get("network.diameter", c.network.diameter);
    r.get("network.elements_per_channel", c.network.elements_per_channel);
    r.get("network.inlet", c.network.inlet);
    r.get("network.outlet", c.network.outlet);
    ensure(c.network.diameter > 0.0, "config: channel diameter must be > 0");
    ensure(c.network.elements_per_channel >= 1, "config: elements_per_channel must be >= 1");
    if (auto it = r.repeated.find("network.vertex"); it != r.repeated.end()) {
        for (const auto& s : it->second) {
            std::istringstream vs(s);
            Vec2 v;
            ensure(static_cast<bool>(vs >> v.x >> v.y), "config: malformed vertex line");
            c.network.vertices.push_back(v);
        }
    }
    if (auto it = r.repeated.find("network.segment"); it != r.repeated.end()) {
        for (const auto& s : it->second) {
            std::istringstream vs(s);
            SegmentSpec seg;
            ensure(static_cast<bool>(vs >> seg.first >> seg.second >> seg.n_elements >>
                                     seg.diameter),
                   "config: malformed segment line (need: first second n_elements diameter)");
            c.network.segments.push_back(seg);
        }
    }

    r.get("fluid.property_file", c.fluid.property_file);
    r.get("fluid.heat_transfer", c.fluid.heat_transfer);
    r.get("fluid.h_wc", c.fluid.h_wc);
    r.get("fluid.shah_h_L", c.fluid.shah_h_L);
    r.get("fluid.air_velocity", c.fluid.air_velocity);
    r.get("fluid.air_speed", c.fluid.air_speed);
    ensure(c.fluid.h_wc >= 0.0, "config: h_wc must be >= 0");

    r.get("boundary.T_air_in", c.boundary.T_air_in);
    r.get("boundary.T0", c.boundary.T0);
    r.get("boundary.G_tot", c.boundary.G_tot);
    r.get("boundary.x_inlet", c.boundary.x_inlet);
    r.get("boundary.p_inlet", c.boundary.p_inlet);
    ensure(c.boundary.T_air_in > 0.0 && c.boundary.T0 > 0.0, "config: temperatures must be > 0");
    ensure(c.boundary.G_tot > 0.0, "config: G_tot must be > 0");
    ensure(c.boundary.x_inlet >= 0.0 && c.boundary.x_inlet <= 1.0,
           "config: x_inlet must lie in [0, 1]");

    r.get("coupling.outer_tol", c.coupling.outer_tol);
    r.get("coupling.outer_max", c.coupling.outer_max);
    r.get("coupling.inner2d_tol", c.coupling.inner2d_tol);
    r.get("coupling.inner2d_max", c.coupling.inner2d_max);
    r.get("coupling.inner1d_tol", c.coupling.inner1d_tol);
    r.get("coupling.inner1d_max", c.coupling.inner1d_max);
    r.get("coupling.damping", c.coupling.damping);
    r.get("coupling.solver_tol", c.coupling.solver_tol);
    ensure(c.coupling.outer_tol > 0.0 && c.coupling.inner2d_tol > 0.0 &&
               c.coupling.inner1d_tol > 0.0,
           "config: tolerances must be > 0");
    ensure(c.coupling.damping > 0.0 && c.coupling.damping <= 1.0,
           "config: damping must lie in (0, 1]");

    r.get("air.k0", c.air.k0);
    r.get("air.T_ref", c.air.T_ref);
    r.get("air.beta_exp", c.air.beta_exp);
    r.get("air.rho", c.air.rho);
    r.get("air.c_p", c.air.c_p);
    r.get("air.h_aw", c.air.h_aw);
    r.get("air.k_wall", c.air.k_wall);
    ensure(c.air.k0 > 0.0 && c.air.k_wall > 0.0, "config: conductivities must be > 0");

    r.get("output.directory", c.output.directory);
    return c;
}

inline std::string serialize_scenario(const ScenarioConfig& c) {
    using detail::fmt;
    std::ostringstream os;
    os << "schema_version " << c.schema_version << "\n\n";
    os << "[grid]\n";
    os << "nx " << c.grid.nx << "\nny " << c.grid.ny << "\n";
    os << "width " << fmt(c.grid.width) << "\nheight " << fmt(c.grid.height) << "\n\n";
    os << "[reduction]\n";
    os << "S " << fmt(c.reduction.S) << "\nbeta_exp " << fmt(c.reduction.beta_exp) << "\n";
    os << "shape " << c.reduction.shape << "\nquadrature_panels " << c.reduction.quadrature_panels
       << "\n\n";
    os << "[network]\n";
    os << "preset " << c.network.preset << "\n";
    os << "n_channels " << c.network.n_channels << "\n";
    os << "channel_length " << fmt(c.network.channel_length) << "\n";
    os << "diameter " << fmt(c.network.diameter) << "\n";
    os << "elements_per_channel " << c.network.elements_per_channel << "\n";
    os << "inlet " << c.network.inlet << "\noutlet " << c.network.outlet << "\n";
    for (const auto& v : c.network.vertices)
        os << "vertex " << fmt(v.x) << " " << fmt(v.y) << "\n";
    for (const auto& s : c.network.segments)
        os << "segment " << s.first << " " << s.second << " " << s.n_elements << " "
           << fmt(s.diameter) << "\n";
    os << "\n[fluid]\n";
    os << "property_file " << c.fluid.property_file << "\n";
    os << "heat_transfer " << c.fluid.heat_transfer << "\nh_wc " << fmt(c.fluid.h_wc) << "\n";
    os << "shah_h_L " << fmt(c.fluid.shah_h_L) << "\n";
    os << "air_velocity " << c.fluid.air_velocity << "\nair_speed " << fmt(c.fluid.air_speed)
       << "\n\n";
    os << "[boundary]\n";
    os << "T_air_in " << fmt(c.boundary.T_air_in) << "\nT0 " << fmt(c.boundary.T0) << "\n";
    os << "G_tot " << fmt(c.boundary.G_tot) << "\nx_inlet " << fmt(c.boundary.x_inlet) << "\n";
    os << "p_inlet " << fmt(c.boundary.p_inlet) << "\n\n";
    os << "[coupling]\n";
    os << "outer_tol " << fmt(c.coupling.outer_tol) << "\nouter_max " << c.coupling.outer_max
       << "\n";
    os << "inner2d_tol " << fmt(c.coupling.inner2d_tol) << "\ninner2d_max "
       << c.coupling.inner2d_max << "\n";
    os << "inner1d_tol " << fmt(c.coupling.inner1d_tol) << "\ninner1d_max "
       << c.coupling.inner1d_max << "\n";
    os << "damping " << fmt(c.coupling.damping) << "\nsolver_tol " << fmt(c.coupling.solver_tol)
       << "\n\n";
    os << "[air]\n";
    os << "k0 " << fmt(c.air.k0) << "\nT_ref " << fmt(c.air.T_ref) << "\n";
    os << "beta_exp " << fmt(c.air.beta_exp) << "\nrho " << fmt(c.air.rho) << "\n";
    os << "c_p " << fmt(c.air.c_p) << "\nh_aw " << fmt(c.air.h_aw) << "\n";
    os << "k_wall " << fmt(c.air.k_wall) << "\n\n";
    os << "[output]\n";
    os << "directory " << c.output.directory << "\n";
    return os.str();
}

inline ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    ensure(in.good(), "config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

inline void save_scenario(const ScenarioConfig& c, const std::string& path) {
    std::ofstream out(path);
    ensure(out.good(), "config: cannot write " + path);
    out << serialize_scenario(c);
}

}  // namespace tscond
