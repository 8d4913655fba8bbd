#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "frost/driver.hpp"
#include "frost/error.hpp"

using namespace frost;
using namespace frost::driver;
namespace fs = std::filesystem;

namespace
{
fs::path scratch(std::string const& name)
{
    auto const dir = fs::temp_directory_path() /
                     ("frost_test_" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string read_file(fs::path const& path)
{
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(fs::path const& path, std::string const& text)
{
    std::ofstream(path, std::ios::binary) << text;
}

SimulationConfig small_config(int steps)
{
    auto config = default_config();
    config.lshape.h = 0.1;
    config.time.steps = steps;
    config.snapshot_every = 0;
    return config;
}

int run_cli(std::string const& arguments)
{
    char const* binary = std::getenv("FROSTSIM");
    REQUIRE(binary != nullptr);
    int const status =
        std::system((std::string(binary) + " " + arguments + " > /dev/null 2>&1").c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

fs::path reference_config()
{
    return data_directory() / "config" / "reference.json";
}
}  // namespace

TEST_CASE("bundled reference configuration")
{
    auto const config = load_config(reference_config());
    CHECK_NOTHROW(config.validate());
    CHECK(config.time.steps == 744);
    CHECK(config.time.step == 3600.0);
    CHECK(config.ice.porosity == 0.35);
    CHECK(config.mechanics.porosity == 0.35);
    CHECK(config.lshape.h == 0.045);
    CHECK(config.probe_points.size() == 4);
    CHECK(config.solver.chord_heat_capacity);
    CHECK(fs::exists(config.psd_file));
    CHECK(fs::exists(config.climate_file));

    auto const spec02 = load_config(data_directory() / "config" / "reference_spec02.json");
    CHECK(spec02.ice.porosity == 0.13);
    CHECK(spec02.psd_file.filename() == "spec02.csv");
}

TEST_CASE("configuration parsing")
{
    auto const base = fs::path(".");
    auto const empty = parse_config("{}", base);
    CHECK(empty.time.steps == 744);
    CHECK(empty.boundary.heat_transfer == 8.0);
    CHECK(empty.psd_file.filename() == "spec01.csv");

    auto const custom = parse_config(R"({
        // comments are allowed
        "time": {"steps": 3, "gamma": 1.0},
        "transport": {"capillary_exponent_variant": "kuenzel"},
        "ice": {"ice_content_model": "none"},
        "solver": {"chord_heat_capacity": false},
        "probes": {"nodes": [0, 5]}
    })", base);
    CHECK(custom.time.steps == 3);
    CHECK(custom.time.gamma == 1.0);
    CHECK(custom.transport.capillary_exponent ==
          constitutive::CapillaryExponent::Kuenzel);
    CHECK(custom.ice_content_model == ice::IceContentModel::None);
    CHECK_FALSE(custom.solver.chord_heat_capacity);
    CHECK(custom.probe_nodes == std::vector<std::size_t>{0, 5});

    CHECK_THROWS_AS(parse_config(R"({"tyme": {}})", base), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"time": {"step": 3}})", base), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"time": {"steps": "many"}})", base), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"time": {"dt_s": -1}})", base), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"ice": {"psd": "missing_psd"}})", base), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"transport": {"w_80": 200}})", base), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"mechanics": {"eps_f": 1e-5}})", base), ConfigError);
    CHECK_THROWS_AS(parse_config("{", base), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("porosity must match the pore size distribution")
{
    auto config = small_config(1);
    config.ice.porosity = 0.2;
    config.mechanics.porosity = 0.2;
    CHECK_THROWS_AS(Simulation{config}, ConfigError);

    auto probes = small_config(1);
    probes.probe_nodes = {100000};
    CHECK_THROWS_AS(Simulation{probes}, ConfigError);
}

TEST_CASE("a body in equilibrium with its surroundings stays unchanged")
{
    auto const dir = scratch("equilibrium");
    write_file(dir / "still.csv",
               "time_h,theta_ext_C,phi_ext,rain_kg_m2_s,swr_W_m2\n"
               "0,24,0.6,0,0\n");
    auto config = small_config(1);
    config.climate_file = dir / "still.csv";
    config.initial_temperature = 24.0;
    config.initial_humidity = 0.6;
    Simulation const sim(config);
    auto const summary = sim.run();
    CHECK((summary.transport.theta.array() - 24.0).abs().maxCoeff() < 1e-10);
    CHECK((summary.transport.phi.array() - 0.6).abs().maxCoeff() < 1e-10);
    CHECK(summary.mechanics.u.lpNorm<Eigen::Infinity>() < 1e-15);
    for (double d : summary.mechanics.damage)
    {
        CHECK(d == 0.0);
    }
    for (double p : summary.pore_pressure)
    {
        CHECK(p == 0.0);
    }
}

TEST_CASE("each step feeds the current transport state to the mechanics")
{
    auto const config = small_config(6);
    Simulation const sim(config);
    int seen = 0;
    auto const summary = sim.run({}, [&](StepReport const& report) {
        ++seen;
        CHECK(report.step == seen);
        CHECK(report.transport.time == doctest::Approx(3600.0 * seen));
        CHECK(report.pore_pressure == sim.pore_pressure(report.transport.theta));
        CHECK(report.climate.temperature ==
              sim.climate().sample(report.transport.time).temperature);
    });
    CHECK(seen == 6);
    CHECK(summary.records.size() == 6 * sim.probe_nodes().size());
    CHECK(summary.records.front().time_h == 1.0);
    CHECK(summary.records.back().time_h == 6.0);
}

TEST_CASE("repeated runs are identical")
{
    auto const config = small_config(24);
    Simulation const sim(config);
    auto const a = format_probe_csv(sim.run().records);
    auto const b = format_probe_csv(Simulation(config).run().records);
    CHECK(a == b);
}

TEST_CASE("probe nodes map to the nearest mesh nodes")
{
    Simulation const sim(small_config(1));
    auto const& m = sim.mesh();
    REQUIRE(sim.probe_nodes().size() == 4);
    auto const& exterior = m.node(sim.probe_nodes()[0]);
    CHECK(exterior.x == 0.0);
    CHECK(exterior.y == doctest::Approx(0.7));
}

TEST_CASE("probe CSV")
{
    CHECK(format_probe_csv({}) == "time_h,node,theta_C,phi,p_p_Pa,d_w,u_mag_m\n");

    std::vector<ProbeRecord> const records{
        {1.0, 3, -2.5, 0.8, 1.25e6, 0.0, 1e-7},
        {1.0, 7, 4.0 / 3.0, 0.1 + 0.2, 0.0, 0.5, 0.0},
        {2.0, 3, -3.75, 0.85, 2.5e6, 1e-3, 2e-7},
        {2.0, 7, 1.0, 0.31, 0.0, 0.5, 1.0 / 3.0}};
    auto const text = format_probe_csv(records);
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);

    auto const dir = scratch("probes");
    write_probe_csv(records, dir / "probes.csv");
    auto const back = parse_probe_csv(read_file(dir / "probes.csv"));
    REQUIRE(back.size() == records.size());
    for (std::size_t k = 0; k < records.size(); ++k)
    {
        CHECK(back[k].time_h == records[k].time_h);
        CHECK(back[k].node == records[k].node);
        CHECK(back[k].theta == records[k].theta);
        CHECK(back[k].phi == records[k].phi);
        CHECK(back[k].pore_pressure == records[k].pore_pressure);
        CHECK(back[k].damage == records[k].damage);
        CHECK(back[k].displacement == records[k].displacement);
    }
    CHECK_THROWS_AS(write_probe_csv(records, dir / "missing" / "probes.csv"), IoError);
    CHECK_THROWS_AS(parse_probe_csv("time_h,node,theta_C,phi,p_p_Pa,d_w,u_mag_m\n"
                                    "1,2.5,0,0,0,0,0\n"),
                    ParseError);
}

TEST_CASE("field snapshot")
{
    auto const m = mesh::load_mesh(R"(nodes 4
0 0 0
1 1 0
2 1 1
3 0 1
elements 2
0 0 1 2
1 0 2 3
bedges 4
0 0 EXT
0 1 A
1 1 B
1 2 INT
)");
    FieldSnapshot fields;
    fields.theta = Eigen::Vector4d(-1.5, 0.0, 2.25, 10.0);
    fields.phi = Eigen::Vector4d(0.5, 0.6, 0.7, 1.0);
    fields.displacement = Eigen::VectorXd::LinSpaced(8, 0.0, 7e-6);
    fields.pore_pressure = {1.5e6, 0.0};
    fields.damage = {0.25, 0.0};
    fields.kappa = {1e-3, 0.0};

    auto const text = format_field_snapshot(m, fields);
    auto const golden = read_file(fs::path(FROST_FIXTURE_DIR) / "two_triangles.vtk");
    CHECK(text == golden);

    // the sections declare the right sizes
    CHECK(text.find("POINTS 4 double") != std::string::npos);
    CHECK(text.find("CELLS 2 8") != std::string::npos);
    CHECK(text.find("CELL_TYPES 2") != std::string::npos);
    CHECK(text.find("POINT_DATA 4") != std::string::npos);
    CHECK(text.find("CELL_DATA 2") != std::string::npos);

    fields.damage.pop_back();
    CHECK_THROWS_AS(format_field_snapshot(m, fields), InvalidParameters);
}

TEST_CASE("snapshots and probe files are written")
{
    auto const dir = scratch("outputs");
    auto config = small_config(5);
    config.snapshot_every = 2;
    auto const summary = Simulation(config).run(dir);
    REQUIRE(summary.snapshots.size() == 3);
    CHECK(summary.snapshots[0].filename() == "field_0002.vtk");
    CHECK(summary.snapshots[2].filename() == "field_0005.vtk");
    for (auto const& path : summary.snapshots)
    {
        CHECK(fs::exists(path));
    }
    auto const records = parse_probe_csv(read_file(summary.probe_file));
    CHECK(records.size() == summary.records.size());
}

TEST_CASE("command-line exit codes")
{
    auto const dir = scratch("cli");
    auto const reference = reference_config().string();
    CHECK(run_cli("check-config " + reference) == 0);
    CHECK(run_cli("check-config /nonexistent/config.json") == 2);
    write_file(dir / "bad.json", R"({"time": {"stepz": 1}})");
    CHECK(run_cli("check-config " + (dir / "bad.json").string()) == 2);
    CHECK(run_cli("no-such-command") == 2);

    CHECK(run_cli("make-mesh --outer 1 --thickness 0.4 --h 0.1 --out " +
                  (dir / "mesh.txt").string()) == 0);
    CHECK(mesh::read_mesh_file(dir / "mesh.txt").element_count() > 0);
    CHECK(run_cli("make-mesh --outer 1 --thickness 0.4 --h 2 --out " +
                  (dir / "bad_mesh.txt").string()) == 2);

    CHECK(run_cli("material-curves --config " + reference + " --out " +
                  (dir / "curves").string()) == 0);
    CHECK(fs::exists(dir / "curves" / "sorption.csv"));

    write_file(dir / "short.json",
               R"({"mesh": {"h": 0.1}, "time": {"steps": 2}, "output": {"snapshot_every": 0}})");
    CHECK(run_cli("run --config " + (dir / "short.json").string() + " --out " +
                  (dir / "run").string()) == 0);
    CHECK(fs::exists(dir / "run" / "probes.csv"));
    write_file(dir / "blocker", "");
    CHECK(run_cli("run --config " + (dir / "short.json").string() + " --out " +
                  (dir / "blocker" / "run").string()) == 4);
}
