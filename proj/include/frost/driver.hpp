#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "frost/climate.hpp"
#include "frost/constitutive.hpp"
#include "frost/ice.hpp"
#include "frost/mechanics.hpp"
#include "frost/mesh.hpp"
#include "frost/transport.hpp"

namespace frost::driver
{
struct LShapeSpec
{
    double outer = 1.0;
    double thickness = 0.4;
    double h = 0.045;
};

/// Transfer coefficients and interior set-points.
struct BoundaryParams
{
    double heat_transfer = 8.0;          // alpha_h [W m^-2 K^-1]
    double vapor_transfer = 5.6e-8;      // beta_v
    double shortwave_absorption = 0.6;   // alpha_swr [-]
    double interior_temperature = 24.0;  // [degC]
    double interior_humidity = 0.6;      // [-]
};

struct TimeParams
{
    double step = 3600.0;  // [s]
    int steps = 744;
    double gamma = 0.5;
    int max_halvings = 4;
};

struct SimulationConfig
{
    /// Mesh file; when empty the L-shape generator is used.
    std::filesystem::path mesh_file;
    LShapeSpec lshape;

    constitutive::TransportParams transport = constitutive::TransportParams::defaults();
    ice::IceParams ice;
    ice::IceContentModel ice_content_model = ice::IceContentModel::FreezableFraction;
    std::filesystem::path psd_file;
    mechanics::MechParams mechanics;

    std::filesystem::path climate_file;
    BoundaryParams boundary;
    double initial_temperature = 14.0;
    double initial_humidity = 0.5;

    TimeParams time;
    transport::SolverOptions solver;

    /// Probe locations; each maps to the nearest mesh node. Explicit node
    /// ids take precedence when non-empty.
    std::vector<mesh::Point> probe_points;
    std::vector<std::size_t> probe_nodes;

    std::filesystem::path output_directory = "out";
    int snapshot_every = 24;  // 0 disables periodic snapshots

    /// Throws ConfigError.
    void validate() const;
};

/// Directory holding the bundled PSD tables and climate records.
std::filesystem::path data_directory();

/// Named bundled resources ("spec01", "winter_744h") or paths relative to
/// base_dir.
std::filesystem::path resolve_psd(std::string_view name,
                                  std::filesystem::path const& base_dir);
std::filesystem::path resolve_climate(std::string_view name,
                                      std::filesystem::path const& base_dir);

/// Parses a JSON configuration; missing keys keep their defaults.
/// Throws ConfigError.
SimulationConfig parse_config(std::string_view json_text,
                              std::filesystem::path const& base_dir);
SimulationConfig load_config(std::filesystem::path const& path);

/// Configuration with every default in place (reference scenario).
SimulationConfig default_config();

struct ProbeRecord
{
    double time_h = 0.0;
    std::size_t node = 0;
    double theta = 0.0;
    double phi = 0.0;
    double pore_pressure = 0.0;
    double damage = 0.0;
    double displacement = 0.0;
};

/// Everything known at the end of one step.
struct StepReport
{
    int step = 0;  // 1-based; 0 is the initial state
    climate::ClimateSample climate;
    transport::TransportState const& transport;
    std::vector<double> const& pore_pressure;  // per element
    mechanics::MechState const& mechanics;
    int substeps = 1;
};

using StepObserver = std::function<void(StepReport const&)>;

struct RunSummary
{
    transport::TransportState transport;
    mechanics::MechState mechanics;
    std::vector<double> pore_pressure;
    std::vector<ProbeRecord> records;
    std::vector<std::size_t> probe_nodes;
    std::vector<std::filesystem::path> snapshots;
    std::filesystem::path probe_file;
    int substeps = 0;  // total transport solves
    int unconverged_mechanics = 0;  // damage loops that hit the cap
};

/// A model instance: mesh, material models and boundary data built from a
/// configuration.
class Simulation
{
public:
    explicit Simulation(SimulationConfig config);

    mesh::Mesh const& mesh() const { return mesh_; }
    SimulationConfig const& config() const { return config_; }
    ice::PoreSizeDistribution const& psd() const { return psd_; }
    climate::ClimateSeries const& climate() const { return climate_; }
    std::vector<std::size_t> const& probe_nodes() const { return probes_; }

    /// Element pore pressure from the centroid temperature.
    std::vector<double> pore_pressure(Eigen::VectorXd const& theta) const;

    /// Runs all steps. Writes probes.csv and snapshots into out_dir when it
    /// is non-empty. Throws StepFailure when a step fails after all
    /// halvings and IoError on output failures.
    RunSummary run(std::filesystem::path const& out_dir = {},
                   StepObserver const& observer = {}) const;

private:
    SimulationConfig config_;
    mesh::Mesh mesh_;
    ice::PoreSizeDistribution psd_;
    climate::ClimateSeries climate_;
    std::vector<std::size_t> probes_;
};

/// Nodal average of an element field over the adjacent elements.
std::vector<double> nodal_average(mesh::Mesh const& mesh,
                                  std::vector<double> const& element_field);

void write_probe_csv(std::vector<ProbeRecord> const& records,
                     std::filesystem::path const& path);
std::string format_probe_csv(std::vector<ProbeRecord> const& records);
std::vector<ProbeRecord> parse_probe_csv(std::string_view text);

struct FieldSnapshot
{
    Eigen::VectorXd theta;
    Eigen::VectorXd phi;
    Eigen::VectorXd displacement;  // (x0, y0, x1, ...)
    std::vector<double> pore_pressure;
    std::vector<double> damage;
    std::vector<double> kappa;
};

/// Legacy ASCII VTK unstructured grid.
std::string format_field_snapshot(mesh::Mesh const& mesh,
                                  FieldSnapshot const& fields);
void write_field_snapshot(mesh::Mesh const& mesh, FieldSnapshot const& fields,
                          std::filesystem::path const& path);

}  // namespace frost::driver
