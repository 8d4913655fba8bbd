#include <cmath>
#include <cstdlib>
#include <initializer_list>
#include <string>

#include <fmt/format.h>
#include <json.hpp>

#include "csv.hpp"
#include "frost/driver.hpp"
#include "frost/error.hpp"

#ifndef FROST_DATA_DIR
#define FROST_DATA_DIR "data"
#endif

namespace frost::driver
{
namespace
{
using json = nlohmann::json;
namespace fs = std::filesystem;

void check_keys(json const& object, std::string_view where,
                std::initializer_list<std::string_view> allowed)
{
    if (!object.is_object())
    {
        throw ConfigError(fmt::format("'{}' must be an object", where));
    }
    for (auto const& item : object.items())
    {
        bool known = false;
        for (auto const key : allowed)
        {
            known = known || item.key() == key;
        }
        if (!known)
        {
            throw ConfigError(
                fmt::format("unknown key '{}' in '{}'", item.key(), where));
        }
    }
}

template <typename T>
void read(json const& object, std::string_view where, char const* key,
          T& target)
{
    auto const it = object.find(key);
    if (it == object.end())
    {
        return;
    }
    try
    {
        target = it->get<T>();
    }
    catch (json::exception const&)
    {
        throw ConfigError(
            fmt::format("'{}.{}' has the wrong type", where, key));
    }
}

bool looks_like_path(std::string_view name)
{
    return name.find('/') != std::string_view::npos ||
           name.find('.') != std::string_view::npos;
}

fs::path resolve_named(std::string_view name, fs::path const& base_dir,
                       char const* subdir)
{
    if (name.empty())
    {
        throw ConfigError(fmt::format("empty {} name", subdir));
    }
    if (looks_like_path(name))
    {
        fs::path path(name);
        return path.is_absolute() ? path : base_dir / path;
    }
    return data_directory() / subdir / fmt::format("{}.csv", name);
}

std::vector<mesh::Point> read_points(json const& value, std::string_view where)
{
    std::vector<mesh::Point> points;
    if (!value.is_array())
    {
        throw ConfigError(fmt::format("'{}' must be an array", where));
    }
    for (auto const& entry : value)
    {
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
            !entry[1].is_number())
        {
            throw ConfigError(
                fmt::format("'{}' entries must be [x, y] pairs", where));
        }
        points.push_back({entry[0].get<double>(), entry[1].get<double>()});
    }
    return points;
}

void require(bool condition, std::string const& message)
{
    if (!condition)
    {
        throw ConfigError(message);
    }
}
}  // namespace

fs::path data_directory()
{
    if (char const* env = std::getenv("FROST_DATA_DIR"); env && *env)
    {
        return env;
    }
    return FROST_DATA_DIR;
}

fs::path resolve_psd(std::string_view name, fs::path const& base_dir)
{
    return resolve_named(name, base_dir, "psd");
}

fs::path resolve_climate(std::string_view name, fs::path const& base_dir)
{
    return resolve_named(name, base_dir, "climate");
}

SimulationConfig default_config()
{
    SimulationConfig config;
    config.psd_file = resolve_psd("spec01", {});
    config.climate_file = resolve_climate("winter_744h", {});
    config.probe_points = {{0.0, 0.7}, {0.1, 0.7}, {0.2, 0.7}, {0.4, 0.7}};
    return config;
}

void SimulationConfig::validate() const
{
    try
    {
        auto t = transport;
        t.derive();
        ice.validate();
        mechanics.validate();
    }
    catch (InvalidParameters const& e)
    {
        throw ConfigError(e.what());
    }
    require(std::abs(ice.porosity - mechanics.porosity) <= 1e-12,
            "ice and mechanics porosity differ");
    if (mesh_file.empty())
    {
        require(lshape.outer > 0.0 && lshape.thickness > 0.0 &&
                    lshape.thickness < lshape.outer && lshape.h > 0.0 &&
                    lshape.h <= lshape.thickness,
                "invalid L-shape dimensions");
    }
    else
    {
        require(fs::exists(mesh_file),
                fmt::format("mesh file '{}' not found", mesh_file.string()));
    }
    require(fs::exists(psd_file),
            fmt::format("PSD file '{}' not found", psd_file.string()));
    require(fs::exists(climate_file),
            fmt::format("climate file '{}' not found", climate_file.string()));
    require(boundary.heat_transfer >= 0.0 && boundary.vapor_transfer >= 0.0,
            "transfer coefficients must be non-negative");
    require(boundary.shortwave_absorption >= 0.0 &&
                boundary.shortwave_absorption <= 1.0,
            "short-wave absorption outside [0, 1]");
    require(boundary.interior_humidity >= 0.0 &&
                boundary.interior_humidity <= 1.0,
            "interior humidity outside [0, 1]");
    require(initial_humidity >= 0.0 && initial_humidity <= 1.0,
            "initial humidity outside [0, 1]");
    require(initial_temperature >= -40.0 && initial_temperature <= 60.0,
            "initial temperature outside [-40, 60] degC");
    require(time.step > 0.0, "time step must be positive");
    require(time.steps >= 1, "step count must be at least 1");
    require(time.gamma >= 0.0 && time.gamma <= 1.0, "gamma outside [0, 1]");
    require(time.max_halvings >= 0, "max_halvings must be non-negative");
    require(solver.tolerance > 0.0 && solver.max_iterations >= 1 &&
                solver.relaxation > 0.0 && solver.relaxation <= 1.0,
            "invalid nonlinear solver options");
    require(snapshot_every >= 0, "snapshot_every must be non-negative");
}

SimulationConfig parse_config(std::string_view json_text,
                              fs::path const& base_dir)
{
    json root;
    try
    {
        root = json::parse(json_text.begin(), json_text.end(), nullptr, true,
                           true);
    }
    catch (json::parse_error const& e)
    {
        throw ConfigError(fmt::format("invalid JSON: {}", e.what()));
    }
    check_keys(root, "config",
               {"$schema", "mesh", "transport", "ice", "mechanics", "climate",
                "boundary", "initial", "time", "solver", "probes", "output"});

    SimulationConfig config = default_config();

    if (auto const it = root.find("mesh"); it != root.end())
    {
        check_keys(*it, "mesh", {"file", "outer", "thickness", "h"});
        std::string file;
        read(*it, "mesh", "file", file);
        if (!file.empty())
        {
            fs::path path(file);
            config.mesh_file = path.is_absolute() ? path : base_dir / path;
        }
        read(*it, "mesh", "outer", config.lshape.outer);
        read(*it, "mesh", "thickness", config.lshape.thickness);
        read(*it, "mesh", "h", config.lshape.h);
    }

    if (auto const it = root.find("transport"); it != root.end())
    {
        auto& t = config.transport;
        check_keys(*it, "transport",
                   {"w_f", "w_80", "lambda_0", "b_tcs", "rho_s", "mu", "a_abs",
                    "c_s", "c_l", "c_i", "h_i", "capillary_exponent_variant"});
        read(*it, "transport", "w_f", t.free_water_saturation);
        read(*it, "transport", "w_80", t.water_content_80);
        read(*it, "transport", "lambda_0", t.dry_thermal_conductivity);
        read(*it, "transport", "b_tcs", t.thermal_conductivity_supplement);
        read(*it, "transport", "rho_s", t.bulk_density);
        read(*it, "transport", "mu", t.vapor_resistance);
        read(*it, "transport", "a_abs", t.water_absorption);
        read(*it, "transport", "c_s", t.solid_heat_capacity);
        read(*it, "transport", "c_l", t.liquid_heat_capacity);
        read(*it, "transport", "c_i", t.ice_heat_capacity);
        read(*it, "transport", "h_i", t.ice_melting_enthalpy);
        std::string variant;
        read(*it, "transport", "capillary_exponent_variant", variant);
        if (variant == "literal")
        {
            t.capillary_exponent = constitutive::CapillaryExponent::Literal;
        }
        else if (variant == "kuenzel")
        {
            t.capillary_exponent = constitutive::CapillaryExponent::Kuenzel;
        }
        else if (!variant.empty())
        {
            throw ConfigError(fmt::format(
                "capillary_exponent_variant must be 'literal' or 'kuenzel', "
                "got '{}'",
                variant));
        }
    }

    if (auto const it = root.find("ice"); it != root.end())
    {
        check_keys(*it, "ice",
                   {"gamma_li", "delta_s_m", "porosity", "p_l", "psd",
                    "ice_content_model"});
        read(*it, "ice", "gamma_li", config.ice.surface_tension);
        read(*it, "ice", "delta_s_m", config.ice.melting_entropy);
        read(*it, "ice", "porosity", config.ice.porosity);
        read(*it, "ice", "p_l", config.ice.liquid_pressure);
        std::string psd;
        read(*it, "ice", "psd", psd);
        if (!psd.empty())
        {
            config.psd_file = resolve_psd(psd, base_dir);
        }
        std::string model;
        read(*it, "ice", "ice_content_model", model);
        if (model == "freezable_fraction")
        {
            config.ice_content_model = ice::IceContentModel::FreezableFraction;
        }
        else if (model == "none")
        {
            config.ice_content_model = ice::IceContentModel::None;
        }
        else if (!model.empty())
        {
            throw ConfigError(fmt::format(
                "ice_content_model must be 'freezable_fraction' or 'none', "
                "got '{}'",
                model));
        }
    }
    config.mechanics.porosity = config.ice.porosity;

    if (auto const it = root.find("mechanics"); it != root.end())
    {
        auto& m = config.mechanics;
        check_keys(*it, "mechanics",
                   {"E", "nu", "f_t", "eps_f", "l_intl", "alpha",
                    "residual_stiffness", "body_force", "max_iterations",
                    "damage_tolerance"});
        read(*it, "mechanics", "E", m.youngs_modulus);
        read(*it, "mechanics", "nu", m.poisson_ratio);
        read(*it, "mechanics", "f_t", m.tensile_strength);
        read(*it, "mechanics", "eps_f", m.critical_strain);
        read(*it, "mechanics", "l_intl", m.internal_length);
        read(*it, "mechanics", "alpha", m.thermal_expansion);
        read(*it, "mechanics", "residual_stiffness", m.residual_stiffness);
        read(*it, "mechanics", "body_force", m.body_force);
        read(*it, "mechanics", "max_iterations", m.max_iterations);
        read(*it, "mechanics", "damage_tolerance", m.damage_tolerance);
    }

    if (auto const it = root.find("climate"); it != root.end())
    {
        if (!it->is_string())
        {
            throw ConfigError("'climate' must be a name or a path");
        }
        config.climate_file = resolve_climate(it->get<std::string>(), base_dir);
    }

    if (auto const it = root.find("boundary"); it != root.end())
    {
        auto& b = config.boundary;
        check_keys(*it, "boundary",
                   {"alpha_h", "beta_v", "alpha_swr", "theta_int", "phi_int"});
        read(*it, "boundary", "alpha_h", b.heat_transfer);
        read(*it, "boundary", "beta_v", b.vapor_transfer);
        read(*it, "boundary", "alpha_swr", b.shortwave_absorption);
        read(*it, "boundary", "theta_int", b.interior_temperature);
        read(*it, "boundary", "phi_int", b.interior_humidity);
    }

    if (auto const it = root.find("initial"); it != root.end())
    {
        check_keys(*it, "initial", {"theta", "phi"});
        read(*it, "initial", "theta", config.initial_temperature);
        read(*it, "initial", "phi", config.initial_humidity);
    }

    if (auto const it = root.find("time"); it != root.end())
    {
        check_keys(*it, "time", {"dt_s", "steps", "gamma", "max_halvings"});
        read(*it, "time", "dt_s", config.time.step);
        read(*it, "time", "steps", config.time.steps);
        read(*it, "time", "gamma", config.time.gamma);
        read(*it, "time", "max_halvings", config.time.max_halvings);
    }

    if (auto const it = root.find("solver"); it != root.end())
    {
        check_keys(*it, "solver",
                   {"tolerance", "max_iterations", "relaxation",
                    "lumped_capacity", "chord_heat_capacity"});
        read(*it, "solver", "tolerance", config.solver.tolerance);
        read(*it, "solver", "max_iterations", config.solver.max_iterations);
        read(*it, "solver", "relaxation", config.solver.relaxation);
        read(*it, "solver", "lumped_capacity", config.solver.lumped_capacity);
        read(*it, "solver", "chord_heat_capacity",
             config.solver.chord_heat_capacity);
    }

    if (auto const it = root.find("probes"); it != root.end())
    {
        check_keys(*it, "probes", {"points", "nodes"});
        if (auto const p = it->find("points"); p != it->end())
        {
            config.probe_points = read_points(*p, "probes.points");
        }
        if (auto const n = it->find("nodes"); n != it->end())
        {
            std::vector<std::size_t> nodes;
            read(*it, "probes", "nodes", nodes);
            config.probe_nodes = std::move(nodes);
        }
    }

    if (auto const it = root.find("output"); it != root.end())
    {
        check_keys(*it, "output", {"directory", "snapshot_every"});
        std::string dir;
        read(*it, "output", "directory", dir);
        if (!dir.empty())
        {
            fs::path path(dir);
            config.output_directory = path.is_absolute() ? path : base_dir / path;
        }
        read(*it, "output", "snapshot_every", config.snapshot_every);
    }

    config.validate();
    return config;
}

SimulationConfig load_config(fs::path const& path)
{
    std::string text;
    try
    {
        text = detail::read_text_file(path);
    }
    catch (IoError const& e)
    {
        throw ConfigError(e.what());
    }
    return parse_config(text, path.has_parent_path() ? path.parent_path()
                                                     : fs::path("."));
}

}  // namespace frost::driver
