#include "frost/driver.hpp"

#include <cmath>

#include <fmt/format.h>

#include "frost/error.hpp"

namespace frost::driver
{
namespace
{
namespace fs = std::filesystem;

mesh::Mesh build_mesh(SimulationConfig const& config)
{
    if (!config.mesh_file.empty())
    {
        return mesh::read_mesh_file(config.mesh_file);
    }
    return mesh::generate_lshape(config.lshape.outer, config.lshape.thickness,
                                 config.lshape.h);
}

SimulationConfig prepared(SimulationConfig config)
{
    config.validate();
    config.transport.derive();
    return config;
}

std::vector<std::size_t> resolve_probes(SimulationConfig const& config,
                                        mesh::Mesh const& mesh)
{
    if (!config.probe_nodes.empty())
    {
        for (auto const node : config.probe_nodes)
        {
            if (node >= mesh.node_count())
            {
                throw ConfigError(fmt::format(
                    "probe node {} does not exist ({} nodes)", node,
                    mesh.node_count()));
            }
        }
        return config.probe_nodes;
    }
    std::vector<std::size_t> nodes;
    nodes.reserve(config.probe_points.size());
    for (auto const& p : config.probe_points)
    {
        nodes.push_back(mesh.nearest_node(p));
    }
    return nodes;
}

FieldSnapshot snapshot_of(transport::TransportState const& transport,
                          mechanics::MechState const& mech,
                          std::vector<double> const& pore_pressure)
{
    return {transport.theta, transport.phi,    mech.u,
            pore_pressure,   mech.damage,      mech.kappa};
}
}  // namespace

Simulation::Simulation(SimulationConfig config)
    : config_(prepared(std::move(config))),
      mesh_(build_mesh(config_)),
      psd_(ice::PoreSizeDistribution::read_file(config_.psd_file)),
      climate_(climate::read_climate_file(config_.climate_file)),
      probes_(resolve_probes(config_, mesh_))
{
    try
    {
        psd_.check_porosity(config_.ice.porosity);
    }
    catch (InvalidPsd const& e)
    {
        throw ConfigError(fmt::format("PSD '{}': {}", config_.psd_file.string(),
                                      e.what()));
    }
}

std::vector<double> Simulation::pore_pressure(Eigen::VectorXd const& theta) const
{
    std::vector<double> result(mesh_.element_count());
    for (std::size_t e = 0; e < mesh_.element_count(); ++e)
    {
        double centroid = 0.0;
        for (auto const n : mesh_.element(e).nodes)
        {
            centroid += theta[static_cast<Eigen::Index>(n)];
        }
        result[e] = ice::average_pore_pressure(centroid / 3.0, psd_, config_.ice);
    }
    return result;
}

RunSummary Simulation::run(fs::path const& out_dir,
                           StepObserver const& observer) const
{
    auto const& cfg = config_;
    transport::HygrothermalCoefficients const model(
        cfg.transport, cfg.ice, psd_, cfg.ice_content_model);

    auto const& climate = climate_;
    auto const bc = cfg.boundary;
    transport::BoundaryProvider provider = [&climate, bc](double t) {
        auto const s = climate.sample(t);
        transport::BoundaryState state;
        state[static_cast<std::size_t>(mesh::BoundaryTag::Exterior)] =
            transport::SurfaceExchange{bc.heat_transfer,
                                       s.temperature,
                                       bc.vapor_transfer,
                                       s.humidity,
                                       bc.shortwave_absorption * s.solar,
                                       s.rain};
        state[static_cast<std::size_t>(mesh::BoundaryTag::Interior)] =
            transport::SurfaceExchange{bc.heat_transfer,
                                       bc.interior_temperature,
                                       bc.vapor_transfer,
                                       bc.interior_humidity,
                                       0.0,
                                       0.0};
        return state;
    };
    transport::TransportProblem const problem(mesh_, model, provider);
    mechanics::MechanicsSolver const solid(mesh_, cfg.mechanics);

    auto const nodes = static_cast<Eigen::Index>(mesh_.node_count());
    RunSummary summary;
    summary.probe_nodes = probes_;
    summary.transport = problem.initial_state(
        Eigen::VectorXd::Constant(nodes, cfg.initial_temperature),
        Eigen::VectorXd::Constant(nodes, cfg.initial_humidity), 0.0,
        cfg.solver.lumped_capacity);
    summary.mechanics = mechanics::undamaged_state(mesh_);
    summary.pore_pressure = pore_pressure(summary.transport.theta);

    if (!out_dir.empty())
    {
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec)
        {
            throw IoError(fmt::format("cannot create output directory '{}': {}",
                                      out_dir.string(), ec.message()));
        }
    }

    // Advances by dt, splitting the interval on failure.
    std::function<transport::TransportState(transport::TransportState const&,
                                            double, int, int&)>
        advance = [&](transport::TransportState const& state, double dt,
                      int depth, int& solves) {
            try
            {
                ++solves;
                return problem.step(state, dt, cfg.time.gamma, cfg.solver);
            }
            catch (StepFailure const& failure)
            {
                if (depth >= cfg.time.max_halvings)
                {
                    throw StepFailure(
                        fmt::format("transport step at t = {} h failed after "
                                    "{} halvings: {}",
                                    state.time / 3600.0, depth, failure.what()),
                        failure.residual(), failure.iterations());
                }
                auto const half = advance(state, 0.5 * dt, depth + 1, solves);
                return advance(half, 0.5 * dt, depth + 1, solves);
            }
        };

    for (int step = 1; step <= cfg.time.steps; ++step)
    {
        int solves = 0;
        summary.transport = advance(summary.transport, cfg.time.step, 0, solves);
        summary.substeps += solves;

        summary.pore_pressure = pore_pressure(summary.transport.theta);
        mechanics::MechLoads const loads{summary.transport.theta,
                                         cfg.initial_temperature,
                                         summary.pore_pressure};
        summary.mechanics = solid.solve(loads, summary.mechanics);
        if (!summary.mechanics.converged)
        {
            ++summary.unconverged_mechanics;
        }

        double const time_h = summary.transport.time / 3600.0;
        auto const nodal_pressure = nodal_average(mesh_, summary.pore_pressure);
        auto const nodal_damage = nodal_average(mesh_, summary.mechanics.damage);
        for (auto const node : probes_)
        {
            auto const i = static_cast<Eigen::Index>(node);
            summary.records.push_back(
                {time_h, node, summary.transport.theta[i],
                 summary.transport.phi[i], nodal_pressure[node],
                 nodal_damage[node],
                 std::hypot(summary.mechanics.u[2 * i],
                            summary.mechanics.u[2 * i + 1])});
        }

        if (observer)
        {
            observer(StepReport{step, climate_.sample(summary.transport.time),
                                summary.transport, summary.pore_pressure,
                                summary.mechanics, solves});
        }

        bool const periodic =
            cfg.snapshot_every > 0 && step % cfg.snapshot_every == 0;
        if (!out_dir.empty() && (periodic || step == cfg.time.steps))
        {
            auto const path = out_dir / fmt::format("field_{:04d}.vtk", step);
            write_field_snapshot(mesh_,
                                 snapshot_of(summary.transport,
                                             summary.mechanics,
                                             summary.pore_pressure),
                                 path);
            summary.snapshots.push_back(path);
        }
    }

    if (!out_dir.empty())
    {
        summary.probe_file = out_dir / "probes.csv";
        write_probe_csv(summary.records, summary.probe_file);
    }
    return summary;
}

}  // namespace frost::driver
