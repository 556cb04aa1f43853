// Field and series writers: legacy-VTK ASCII for 2D cell fields, CSV for
// profiles and histories, and the plain-text run report.
#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tscond/coupling.hpp"

namespace tscond {

namespace detail {

inline std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

}  // namespace detail

inline void write_vtk_cell_fields(
    const std::string& path, const StructuredGrid2D& grid,
    const std::vector<std::pair<std::string, const CellField*>>& fields) {
    std::ofstream out(path);
    ensure(out.good(), "write_vtk_cell_fields: cannot write " + path);
    out << "# vtk DataFile Version 3.0\n";
    out << "cell fields\n";
    out << "ASCII\n";
    out << "DATASET STRUCTURED_POINTS\n";
    out << "DIMENSIONS " << grid.nx + 1 << " " << grid.ny + 1 << " 1\n";
    out << "ORIGIN 0 0 0\n";
    out << "SPACING " << detail::num(grid.hx) << " " << detail::num(grid.hy) << " 1\n";
    out << "CELL_DATA " << grid.num_elements() << "\n";
    for (const auto& [name, field] : fields) {
        ensure(static_cast<int>(field->size()) == grid.num_elements(),
               "write_vtk_cell_fields: field size mismatch for " + name);
        out << "SCALARS " << name << " double 1\n";
        out << "LOOKUP_TABLE default\n";
        for (double v : *field) out << detail::num(v) << "\n";
    }
}

inline void write_csv_cell_field(const std::string& path, const StructuredGrid2D& grid,
                                 const CellField& field) {
    std::ofstream out(path);
    ensure(out.good(), "write_csv_cell_field: cannot write " + path);
    out << "x,y,value\n";
    for (int K = 0; K < grid.num_elements(); ++K)
        out << detail::num(grid.centers[K].x) << "," << detail::num(grid.centers[K].y) << ","
            << detail::num(field[K]) << "\n";
}

// Per-channel profiles along the arc coordinate of each segment.
inline void write_channel_profiles_csv(const std::string& path, const PipeNetwork& net,
                                       const FluidState& fluid) {
    std::ofstream out(path);
    ensure(out.good(), "write_channel_profiles_csv: cannot write " + path);
    out << "segment,element,s,x_pos,y_pos,G,quality,T_c,p,enthalpy_flux\n";
    for (std::size_t j = 0; j < net.segments.size(); ++j) {
        const PipeSegment& seg = net.segments[j];
        for (int k = 0; k < seg.n_elements; ++k) {
            const int e = seg.first_element + k;
            const PipeElement& el = net.elements[e];
            const double s = (k + 0.5) * el.h;
            out << j << "," << k << "," << detail::num(s) << "," << detail::num(el.midpoint.x)
                << "," << detail::num(el.midpoint.y) << "," << detail::num(fluid.G[e]) << ","
                << detail::num(fluid.quality[e]) << "," << detail::num(fluid.T_c[e]) << ","
                << detail::num(fluid.p[e]) << "," << detail::num(fluid.enthalpy_flux[e]) << "\n";
        }
    }
}

inline void write_history_csv(const std::string& path, const std::vector<double>& history) {
    std::ofstream out(path);
    ensure(out.good(), "write_history_csv: cannot write " + path);
    out << "sweep,residual\n";
    for (std::size_t i = 0; i < history.size(); ++i)
        out << i << "," << detail::num(history[i]) << "\n";
}

struct RunReport {
    bool converged = false;
    int outer_iterations = 0;
    double final_residual = 0.0;
    double mean_panel_temperature = 0.0;
    double panel_min = 0.0, panel_max = 0.0;
    double heat_network = 0.0;
    double heat_panel_air = 0.0;
    long clamp_events = 0;
    long stagnant_elements = 0;
    double wall_seconds = 0.0;
};

inline RunReport make_run_report(const CoupledState& st, double wall_seconds) {
    RunReport r;
    r.converged = st.converged;
    r.outer_iterations = st.outer_iterations;
    r.final_residual = st.residual_history.empty() ? 0.0 : st.residual_history.back();
    r.mean_panel_temperature = st.mean_panel_temperature;
    r.panel_min = *std::min_element(st.T_w.begin(), st.T_w.end());
    r.panel_max = *std::max_element(st.T_w.begin(), st.T_w.end());
    r.heat_network = st.heat_network;
    r.heat_panel_air = st.heat_panel_air;
    r.clamp_events = st.fluid.clamp_events;
    r.stagnant_elements = st.fluid.stagnant_elements;
    r.wall_seconds = wall_seconds;
    return r;
}

inline std::string render_run_report(const RunReport& r) {
    std::ostringstream os;
    os << "converged " << (r.converged ? "yes" : "no") << "\n";
    os << "outer_iterations " << r.outer_iterations << "\n";
    os << "final_residual " << detail::num(r.final_residual) << "\n";
    os << "mean_panel_temperature " << detail::num(r.mean_panel_temperature) << "\n";
    os << "panel_temperature_min " << detail::num(r.panel_min) << "\n";
    os << "panel_temperature_max " << detail::num(r.panel_max) << "\n";
    os << "heat_wall_to_coolant " << detail::num(r.heat_network) << "\n";
    os << "heat_panel_to_air " << detail::num(r.heat_panel_air) << "\n";
    os << "clamp_events " << r.clamp_events << "\n";
    os << "stagnant_elements " << r.stagnant_elements << "\n";
    os << "wall_seconds " << detail::num(r.wall_seconds) << "\n";
    return os.str();
}

}  // namespace tscond
