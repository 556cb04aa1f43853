// Command-line front end: benchmark studies, full condenser runs, and
// parameter sweeps.
#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include "tscond/bench.hpp"
#include "tscond/coupling.hpp"
#include "tscond/output.hpp"
#include "tscond/scenario.hpp"

namespace {

int log_level() {
    const char* env = std::getenv("TSCOND_LOG");
    if (!env) return 1;
    const std::string v(env);
    if (v == "quiet" || v == "error") return 0;
    if (v == "debug") return 2;
    return 1;
}

void info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << msg << "\n";
}

tscond::StabilizationKind parse_stab(const std::string& s) {
    if (s == "sg") return tscond::StabilizationKind::ScharfetterGummel;
    if (s == "upwind") return tscond::StabilizationKind::Upwind;
    throw tscond::config_error("unknown stabilization '" + s + "' (expected sg or upwind)");
}

int cmd_convergence2d(const std::string& stab, const std::vector<double>& alphas,
                      const std::vector<int>& Ns) {
    const auto kind = parse_stab(stab);
    std::cout << "stabilization " << stab << "\n";
    for (double alpha : alphas) {
        const auto row = tscond::convergence_study_2d(kind, alpha, Ns);
        std::cout << "alpha " << alpha << "\n";
        for (std::size_t i = 0; i < row.N.size(); ++i)
            std::cout << "  N " << row.N[i] << "  h " << row.h[i] << "  error " << row.error[i]
                      << "\n";
        std::cout << "  estimated_order " << row.order << "\n";
    }
    return 0;
}

int cmd_layers2d(const std::string& which, const std::string& outdir) {
    const auto layer_case =
        which == "interior" ? tscond::LayerCase::Interior : tscond::LayerCase::Boundary;
    if (which != "interior" && which != "boundary")
        throw tscond::config_error("unknown layer case '" + which + "'");
    const auto res = tscond::layer_study_2d(layer_case);
    std::cout << "case " << which << "\n";
    std::cout << "min " << res.min_u << "  max " << res.max_u << "\n";
    std::cout << "bounds [" << res.lower_bound << ", " << res.upper_bound << "]\n";
    const bool ok = res.min_u >= res.lower_bound - 1e-12 && res.max_u <= res.upper_bound + 1e-12;
    std::cout << "within_bounds " << (ok ? "yes" : "no") << "\n";
    if (!outdir.empty()) {
        std::filesystem::create_directories(outdir);
        tscond::write_vtk_cell_fields(outdir + "/layers_" + which + ".vtk", res.grid,
                                      {{"u", &res.u}});
        info("wrote " + outdir + "/layers_" + which + ".vtk");
    }
    return ok ? 0 : 4;
}

int cmd_networktest(double eps, const std::vector<double>& hs) {
    const auto row = tscond::network_study(eps, hs);
    std::cout << "eps " << eps << "\n";
    std::cout << "omega " << row.omega << "\n";
    for (std::size_t i = 0; i < row.h.size(); ++i)
        std::cout << "  h " << row.h[i] << "  error_u " << row.error_u[i] << "  error_flux "
                  << row.error_flux[i] << "\n";
    std::cout << "order_u " << row.order_u << "\norder_flux " << row.order_flux << "\n";
    for (std::size_t j = 0; j < row.profiles.size(); ++j) {
        std::cout << "segment " << j + 1 << " profile";
        for (double v : row.profiles[j]) std::cout << " " << v;
        std::cout << "\n";
    }
    return 0;
}

void write_run_outputs(const tscond::CoupledState& st, const tscond::RunReport& report,
                       const std::string& outdir) {
    std::filesystem::create_directories(outdir);
    tscond::write_vtk_cell_fields(outdir + "/fields.vtk", st.grid,
                                  {{"T_air", &st.T_a},
                                   {"T_wall", &st.T_w},
                                   {"T_coolant", &st.T_c_grid}});
    tscond::write_csv_cell_field(outdir + "/T_air.csv", st.grid, st.T_a);
    tscond::write_csv_cell_field(outdir + "/T_wall.csv", st.grid, st.T_w);
    tscond::write_channel_profiles_csv(outdir + "/channels.csv", st.net, st.fluid);
    tscond::write_history_csv(outdir + "/history.csv", st.residual_history);
    std::ofstream rep(outdir + "/report.txt");
    rep << tscond::render_run_report(report);
}

int cmd_run(const std::string& config_path, const std::string& outdir_override) {
    tscond::ScenarioConfig cfg = tscond::load_scenario(config_path);
    if (!outdir_override.empty()) cfg.output.directory = outdir_override;
    const auto t0 = std::chrono::steady_clock::now();
    const tscond::CoupledState st = tscond::run_staggered(cfg);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                               .count();
    const tscond::RunReport report = tscond::make_run_report(st, seconds);
    write_run_outputs(st, report, cfg.output.directory);
    std::cout << tscond::render_run_report(report);
    return st.converged ? 0 : 3;
}

int cmd_sweep(const std::string& config_path, const std::vector<double>& gtots,
              const std::string& outdir_override) {
    const tscond::ScenarioConfig base = tscond::load_scenario(config_path);
    const std::string root = outdir_override.empty() ? base.output.directory : outdir_override;

    std::vector<std::future<tscond::CoupledState>> runs;
    for (double g : gtots) {
        tscond::ScenarioConfig cfg = base;
        cfg.boundary.G_tot = g;
        runs.push_back(std::async(std::launch::async,
                                  [cfg]() { return tscond::run_staggered(cfg); }));
    }
    std::cout << "G_tot,mean_panel_temperature,outer_iterations\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const tscond::CoupledState st = runs[i].get();
        const tscond::RunReport report = tscond::make_run_report(st, 0.0);
        std::ostringstream dir;
        dir << root << "/G_" << gtots[i];
        write_run_outputs(st, report, dir.str());
        std::cout << gtots[i] << "," << st.mean_panel_temperature << "," << st.outer_iterations
                  << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-phase thermosyphon condenser simulator"};
    app.require_subcommand(1);

    std::string stab = "sg";
    std::vector<double> alphas{1.0, 1e-1, 1e-2, 1e-3, 1e-4};
    std::vector<int> Ns{4, 8, 16, 32, 64};
    auto* conv = app.add_subcommand("convergence2d", "2D manufactured-solution study");
    conv->add_option("--stabilization", stab, "sg or upwind");
    conv->add_option("--alpha", alphas, "diffusion coefficients");
    conv->add_option("--N", Ns, "grid sizes");

    std::string layer_case = "boundary";
    std::string layer_out;
    auto* lay = app.add_subcommand("layers2d", "Layer robustness problems");
    lay->add_option("--case", layer_case, "boundary or interior");
    lay->add_option("--out", layer_out, "output directory for the VTK dump");

    double eps = 1.0;
    std::vector<double> hs{0.25, 0.125, 0.0625, 0.03125, 0.015625};
    auto* nett = app.add_subcommand("networktest", "Branching-network regression");
    nett->add_option("--eps", eps, "diffusion coefficient");
    nett->add_option("--hsize", hs, "mesh sizes");

    std::string run_config, run_out;
    auto* run = app.add_subcommand("run", "Full condenser scenario");
    run->add_option("--config", run_config, "scenario config file")->required();
    run->add_option("--out", run_out, "output directory override");

    std::string sweep_config, sweep_out;
    std::vector<double> gtots{2.9, 5.8, 11.6, 23.2};
    auto* sweep = app.add_subcommand("sweep", "G_tot parameter sweep");
    sweep->add_option("--config", sweep_config, "scenario config file")->required();
    sweep->add_option("--gtot", gtots, "total mass-flux values");
    sweep->add_option("--out", sweep_out, "output directory override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (conv->parsed()) return cmd_convergence2d(stab, alphas, Ns);
        if (lay->parsed()) return cmd_layers2d(layer_case, layer_out);
        if (nett->parsed()) return cmd_networktest(eps, hs);
        if (run->parsed()) return cmd_run(run_config, run_out);
        if (sweep->parsed()) return cmd_sweep(sweep_config, gtots, sweep_out);
    } catch (const tscond::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const tscond::convergence_error& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        if (log_level() >= 2)
            for (double r : e.history) std::cerr << "  residual " << r << "\n";
        return 3;
    } catch (const tscond::numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
