// frostsim: command-line front end of the frost simulator.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "frost/constitutive.hpp"
#include "frost/driver.hpp"
#include "frost/error.hpp"
#include "frost/mechanics.hpp"
#include "frost/mesh.hpp"

namespace
{
namespace fs = std::filesystem;
using namespace frost;

enum ExitCode
{
    ok = 0,
    config_error = 2,
    solver_failure = 3,
    io_error = 4
};

int run_command(fs::path const& config_path, std::string const& out)
{
    auto const config = driver::load_config(config_path);
    driver::Simulation const sim(config);
    fs::path const out_dir = out.empty() ? config.output_directory : fs::path(out);

    auto const start = std::chrono::steady_clock::now();
    auto const summary = sim.run(out_dir);
    double const seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();

    double max_damage = 0.0;
    for (double d : summary.mechanics.damage)
    {
        max_damage = std::max(max_damage, d);
    }
    double max_pressure = 0.0;
    for (double p : summary.pore_pressure)
    {
        max_pressure = std::max(max_pressure, p);
    }
    fmt::print("mesh: {} nodes, {} elements\n", sim.mesh().node_count(),
               sim.mesh().element_count());
    fmt::print("steps: {} ({} transport solves)\n", config.time.steps,
               summary.substeps);
    fmt::print("final max d_w: {:.6g}, final max p_p: {:.6g} Pa\n", max_damage,
               max_pressure);
    if (summary.unconverged_mechanics > 0)
    {
        fmt::print("warning: {} damage iterations stopped at the cap\n",
                   summary.unconverged_mechanics);
    }
    fmt::print("probes: {}\nsnapshots: {}\nwall time: {:.2f} s\n",
               summary.probe_file.string(), summary.snapshots.size(), seconds);
    return ok;
}

int make_mesh_command(double outer, double thickness, double h,
                      fs::path const& out)
{
    auto const m = mesh::generate_lshape(outer, thickness, h);
    mesh::save_mesh(m, out);
    fmt::print("wrote {} ({} nodes, {} elements)\n", out.string(),
               m.node_count(), m.element_count());
    return ok;
}

void write_file(fs::path const& path, std::string const& text)
{
    std::ofstream stream(path);
    stream << text;
    if (!stream)
    {
        throw IoError(fmt::format("cannot write '{}'", path.string()));
    }
}

int material_curves_command(fs::path const& config_path, fs::path const& out)
{
    auto config = driver::load_config(config_path);
    config.transport.derive();
    auto const& p = config.transport;
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec)
    {
        throw IoError(fmt::format("cannot create '{}'", out.string()));
    }

    constexpr int samples = 201;
    std::string sorption = "phi,w_kg_m3\n";
    std::string conduction = "w_kg_m3,lambda_W_mK\n";
    std::string liquid = "w_kg_m3,D_phi_kg_ms\n";
    for (int i = 0; i < samples; ++i)
    {
        double const phi = static_cast<double>(i) / (samples - 1);
        double const w = constitutive::water_content(phi, p);
        sorption += fmt::format("{:.6g},{:.10g}\n", phi, w);
        conduction += fmt::format("{:.10g},{:.10g}\n", w,
                                  constitutive::thermal_conductivity(w, p));
        liquid += fmt::format("{:.10g},{:.10g}\n", w,
                              constitutive::liquid_conductivity(phi, p));
    }
    std::string vapor = "theta_C,delta_v_kg_msPa\n";
    for (int theta = -20; theta <= 40; ++theta)
    {
        vapor += fmt::format("{},{:.10g}\n", theta,
                             constitutive::vapor_permeability(theta, p));
    }
    write_file(out / "sorption.csv", sorption);
    write_file(out / "vapor_permeability.csv", vapor);
    write_file(out / "liquid_conductivity.csv", liquid);
    write_file(out / "thermal_conductivity.csv", conduction);
    fmt::print("wrote 4 curves to {}\n", out.string());
    return ok;
}

int check_config_command(fs::path const& config_path)
{
    auto config = driver::load_config(config_path);
    config.transport.derive();
    fmt::print("configuration OK\n");
    fmt::print("b_phi = {:.10g}\n", config.transport.approximation_factor);
    fmt::print("eps_0 = {:.10g}\n", config.mechanics.elastic_limit_strain());
    fmt::print("b     = {:.10g}\n",
               mechanics::biot_coefficient(config.mechanics.porosity));
    return ok;
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Coupled heat, moisture, frost pressure and damage simulator"};
    app.require_subcommand(1);

    std::string config;
    std::string out;
    auto* run = app.add_subcommand("run", "Run a simulation");
    run->add_option("--config", config, "JSON configuration")->required();
    run->add_option("--out", out, "Output directory");

    double outer = 1.0;
    double thickness = 0.4;
    double h = 0.045;
    std::string mesh_out;
    auto* make_mesh = app.add_subcommand("make-mesh", "Write an L-shape mesh");
    make_mesh->set_help_flag("--help", "Print this help message and exit");
    make_mesh->add_option("--outer", outer, "Outer side length [m]");
    make_mesh->add_option("--thickness", thickness, "Leg thickness [m]");
    make_mesh->add_option("--h", h, "Target element size [m]");
    make_mesh->add_option("--out", mesh_out, "Mesh file")->required();

    std::string curves_out;
    auto* curves =
        app.add_subcommand("material-curves", "Write material curves as CSV");
    curves->add_option("--config", config, "JSON configuration")->required();
    curves->add_option("--out", curves_out, "Output directory")->required();

    auto* check = app.add_subcommand("check-config",
                                     "Validate a configuration and print "
                                     "derived quantities");
    check->add_option("config", config, "JSON configuration")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        return app.exit(e) == 0 ? ok : config_error;
    }

    try
    {
        if (run->parsed())
        {
            return run_command(config, out);
        }
        if (make_mesh->parsed())
        {
            return make_mesh_command(outer, thickness, h, mesh_out);
        }
        if (curves->parsed())
        {
            return material_curves_command(config, curves_out);
        }
        return check_config_command(config);
    }
    catch (ConfigError const& e)
    {
        fmt::print(stderr, "config error: {}\n", e.what());
        return config_error;
    }
    catch (InvalidGeometry const& e)
    {
        fmt::print(stderr, "config error: {}\n", e.what());
        return config_error;
    }
    catch (ParseError const& e)
    {
        fmt::print(stderr, "config error: {}\n", e.what());
        return config_error;
    }
    catch (InvalidPsd const& e)
    {
        fmt::print(stderr, "config error: {}\n", e.what());
        return config_error;
    }
    catch (InvalidMesh const& e)
    {
        fmt::print(stderr, "config error: {}\n", e.what());
        return config_error;
    }
    catch (IoError const& e)
    {
        fmt::print(stderr, "I/O error: {}\n", e.what());
        return io_error;
    }
    catch (Error const& e)
    {
        fmt::print(stderr, "solver failure: {}\n", e.what());
        return solver_failure;
    }
}
