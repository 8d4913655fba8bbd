#include <fstream>

#include <fmt/format.h>

#include "csv.hpp"
#include "frost/driver.hpp"
#include "frost/error.hpp"

namespace frost::driver
{
namespace
{
void write_text(std::filesystem::path const& path, std::string const& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    }
    out << text;
    out.close();
    if (!out)
    {
        throw IoError(fmt::format("failed writing '{}'", path.string()));
    }
}

constexpr std::string_view probe_header =
    "time_h,node,theta_C,phi,p_p_Pa,d_w,u_mag_m";
}  // namespace

std::vector<double> nodal_average(mesh::Mesh const& mesh,
                                  std::vector<double> const& element_field)
{
    std::vector<double> sum(mesh.node_count(), 0.0);
    std::vector<int> count(mesh.node_count(), 0);
    for (std::size_t e = 0; e < mesh.element_count(); ++e)
    {
        for (auto const n : mesh.element(e).nodes)
        {
            sum[n] += element_field[e];
            ++count[n];
        }
    }
    for (std::size_t n = 0; n < sum.size(); ++n)
    {
        sum[n] /= count[n];
    }
    return sum;
}

std::string format_probe_csv(std::vector<ProbeRecord> const& records)
{
    std::string text(probe_header);
    text += '\n';
    for (auto const& r : records)
    {
        text += fmt::format("{:.17g},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                            r.time_h, r.node, r.theta, r.phi, r.pore_pressure,
                            r.damage, r.displacement);
    }
    return text;
}

void write_probe_csv(std::vector<ProbeRecord> const& records,
                     std::filesystem::path const& path)
{
    write_text(path, format_probe_csv(records));
}

std::vector<ProbeRecord> parse_probe_csv(std::string_view text)
{
    auto const rows = detail::parse_csv(
        text, {"time_h", "node", "theta_C", "phi", "p_p_Pa", "d_w", "u_mag_m"});
    std::vector<ProbeRecord> records;
    records.reserve(rows.size());
    for (auto const& row : rows)
    {
        auto const& v = row.values;
        if (v[1] < 0.0 || v[1] != static_cast<double>(static_cast<std::size_t>(v[1])))
        {
            throw ParseError(row.line, "node must be a non-negative integer");
        }
        records.push_back({v[0], static_cast<std::size_t>(v[1]), v[2], v[3],
                           v[4], v[5], v[6]});
    }
    return records;
}

std::string format_field_snapshot(mesh::Mesh const& mesh,
                                  FieldSnapshot const& fields)
{
    auto const nodes = mesh.node_count();
    auto const cells = mesh.element_count();
    auto const check = [](std::size_t have, std::size_t want, char const* what) {
        if (have != want)
        {
            throw InvalidParameters(fmt::format(
                "snapshot field '{}' has {} values, expected {}", what, have,
                want));
        }
    };
    check(static_cast<std::size_t>(fields.theta.size()), nodes, "theta");
    check(static_cast<std::size_t>(fields.phi.size()), nodes, "phi");
    check(static_cast<std::size_t>(fields.displacement.size()), 2 * nodes, "u");
    check(fields.pore_pressure.size(), cells, "p_p");
    check(fields.damage.size(), cells, "d_w");
    check(fields.kappa.size(), cells, "kappa");

    fmt::memory_buffer out;
    auto it = std::back_inserter(out);
    fmt::format_to(it, "# vtk DataFile Version 3.0\nfrost field snapshot\n"
                       "ASCII\nDATASET UNSTRUCTURED_GRID\n");
    fmt::format_to(it, "POINTS {} double\n", nodes);
    for (auto const& p : mesh.nodes())
    {
        fmt::format_to(it, "{:.17g} {:.17g} 0\n", p.x, p.y);
    }
    fmt::format_to(it, "CELLS {} {}\n", cells, 4 * cells);
    for (auto const& e : mesh.elements())
    {
        fmt::format_to(it, "3 {} {} {}\n", e.nodes[0], e.nodes[1], e.nodes[2]);
    }
    fmt::format_to(it, "CELL_TYPES {}\n", cells);
    for (std::size_t e = 0; e < cells; ++e)
    {
        fmt::format_to(it, "5\n");
    }

    auto const scalars = [&](char const* name, auto const& values,
                             std::size_t count) {
        fmt::format_to(it, "SCALARS {} double 1\nLOOKUP_TABLE default\n", name);
        for (std::size_t i = 0; i < count; ++i)
        {
            fmt::format_to(it, "{:.17g}\n", values[static_cast<long>(i)]);
        }
    };
    fmt::format_to(it, "POINT_DATA {}\n", nodes);
    scalars("theta_C", fields.theta, nodes);
    scalars("phi", fields.phi, nodes);
    fmt::format_to(it, "VECTORS u_m double\n");
    for (std::size_t n = 0; n < nodes; ++n)
    {
        auto const i = static_cast<Eigen::Index>(2 * n);
        fmt::format_to(it, "{:.17g} {:.17g} 0\n", fields.displacement[i],
                       fields.displacement[i + 1]);
    }
    fmt::format_to(it, "CELL_DATA {}\n", cells);
    scalars("p_p_Pa", fields.pore_pressure, cells);
    scalars("d_w", fields.damage, cells);
    scalars("kappa", fields.kappa, cells);
    return fmt::to_string(out);
}

void write_field_snapshot(mesh::Mesh const& mesh, FieldSnapshot const& fields,
                          std::filesystem::path const& path)
{
    write_text(path, format_field_snapshot(mesh, fields));
}

}  // namespace frost::driver
