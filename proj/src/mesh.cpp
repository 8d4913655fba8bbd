#include "frost/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "frost/error.hpp"

namespace frost::mesh
{
std::string_view to_string(BoundaryTag tag)
{
    switch (tag)
    {
        case BoundaryTag::Exterior:
            return "EXT";
        case BoundaryTag::Interior:
            return "INT";
        case BoundaryTag::SupportA:
            return "A";
        case BoundaryTag::SupportB:
            return "B";
    }
    return "?";
}

BoundaryTag parse_tag(std::string_view text)
{
    for (auto const tag : all_tags)
    {
        if (text == to_string(tag))
        {
            return tag;
        }
    }
    throw InvalidMesh("unknown boundary tag '" + std::string(text) + "'");
}

ShapeGradients shape_gradients(Point const& a, Point const& b, Point const& c)
{
    double const twice_area =
        (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    double const scale = std::max({std::hypot(b.x - a.x, b.y - a.y),
                                   std::hypot(c.x - b.x, c.y - b.y),
                                   std::hypot(a.x - c.x, a.y - c.y)});
    if (!(twice_area > 1e-12 * scale * scale))
    {
        throw DegenerateElement(0, 0.5 * twice_area);
    }
    ShapeGradients s;
    s.area = 0.5 * twice_area;
    s.gradients[0] = {(b.y - c.y) / twice_area, (c.x - b.x) / twice_area};
    s.gradients[1] = {(c.y - a.y) / twice_area, (a.x - c.x) / twice_area};
    s.gradients[2] = {(a.y - b.y) / twice_area, (b.x - a.x) / twice_area};
    return s;
}

namespace
{
using EdgeKey = std::pair<std::size_t, std::size_t>;

EdgeKey make_key(std::size_t a, std::size_t b)
{
    return a < b ? EdgeKey{a, b} : EdgeKey{b, a};
}

double signed_area(Point const& a, Point const& b, Point const& c)
{
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

// Local edge index after swapping nodes 1 and 2.
constexpr std::array<int, 3> flipped_edge{2, 1, 0};
}  // namespace

Mesh::Mesh(std::vector<Point> nodes, std::vector<Element> elements,
           std::vector<BoundaryEdge> boundary_edges)
    : nodes_(std::move(nodes)),
      elements_(std::move(elements)),
      boundary_edges_(std::move(boundary_edges))
{
    if (nodes_.empty() || elements_.empty())
    {
        throw InvalidMesh("mesh needs at least one node and one element");
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i)
    {
        if (!std::isfinite(nodes_[i].x) || !std::isfinite(nodes_[i].y))
        {
            throw InvalidMesh(fmt::format("node {} has non-finite coordinates", i));
        }
    }

    std::vector<bool> flipped(elements_.size(), false);
    std::vector<bool> used(nodes_.size(), false);
    shapes_.reserve(elements_.size());
    for (std::size_t e = 0; e < elements_.size(); ++e)
    {
        auto& nodes_of = elements_[e].nodes;
        for (auto const n : nodes_of)
        {
            if (n >= nodes_.size())
            {
                throw InvalidMesh(fmt::format(
                    "element {} references missing node {}", e, n));
            }
            used[n] = true;
        }
        if (nodes_of[0] == nodes_of[1] || nodes_of[1] == nodes_of[2] ||
            nodes_of[0] == nodes_of[2])
        {
            throw DegenerateElement(e, 0.0);
        }
        if (signed_area(nodes_[nodes_of[0]], nodes_[nodes_of[1]],
                        nodes_[nodes_of[2]]) < 0.0)
        {
            std::swap(nodes_of[1], nodes_of[2]);
            flipped[e] = true;
        }
        try
        {
            shapes_.push_back(shape_gradients(nodes_[nodes_of[0]],
                                              nodes_[nodes_of[1]],
                                              nodes_[nodes_of[2]]));
        }
        catch (DegenerateElement const&)
        {
            throw DegenerateElement(
                e, signed_area(nodes_[nodes_of[0]], nodes_[nodes_of[1]],
                               nodes_[nodes_of[2]]));
        }
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i)
    {
        if (!used[i])
        {
            throw InvalidMesh(fmt::format("node {} belongs to no element", i));
        }
    }

    std::map<EdgeKey, int> edge_count;
    for (auto const& el : elements_)
    {
        for (int k = 0; k < 3; ++k)
        {
            auto const key = make_key(el.nodes[k], el.nodes[(k + 1) % 3]);
            if (++edge_count[key] > 2)
            {
                throw InvalidMesh(fmt::format(
                    "edge ({}, {}) is shared by more than two elements",
                    key.first, key.second));
            }
        }
    }

    std::map<EdgeKey, bool> tagged;
    for (auto& edge : boundary_edges_)
    {
        if (edge.element >= elements_.size() || edge.local_edge < 0 ||
            edge.local_edge > 2)
        {
            throw InvalidMesh(fmt::format(
                "boundary edge ({}, {}) does not exist", edge.element,
                edge.local_edge));
        }
        if (flipped[edge.element])
        {
            edge.local_edge = flipped_edge[edge.local_edge];
        }
        auto const [a, b] = edge_nodes(edge);
        auto const key = make_key(a, b);
        if (edge_count[key] != 1)
        {
            throw InvalidMesh(fmt::format(
                "tagged edge ({}, {}) is not on the domain boundary", a, b));
        }
        if (tagged[key])
        {
            throw InvalidMesh(
                fmt::format("boundary edge ({}, {}) is tagged twice", a, b));
        }
        tagged[key] = true;
    }
    std::vector<std::size_t> boundary_nodes;
    for (auto const& [key, count] : edge_count)
    {
        if (count == 1)
        {
            if (!tagged[key])
            {
                throw InvalidMesh(fmt::format(
                    "boundary edge ({}, {}) carries no tag", key.first,
                    key.second));
            }
            boundary_nodes.push_back(key.first);
            boundary_nodes.push_back(key.second);
        }
    }
    std::sort(boundary_nodes.begin(), boundary_nodes.end());
    boundary_nodes.erase(
        std::unique(boundary_nodes.begin(), boundary_nodes.end()),
        boundary_nodes.end());

    // A node lying inside a boundary segment means a hanging node.
    for (auto const& edge : boundary_edges_)
    {
        auto const [a, b] = edge_nodes(edge);
        Point const& pa = nodes_[a];
        Point const& pb = nodes_[b];
        double const length = std::hypot(pb.x - pa.x, pb.y - pa.y);
        for (auto const n : boundary_nodes)
        {
            if (n == a || n == b)
            {
                continue;
            }
            Point const& p = nodes_[n];
            double const t = ((p.x - pa.x) * (pb.x - pa.x) +
                              (p.y - pa.y) * (pb.y - pa.y)) /
                             (length * length);
            double const cross = (pb.x - pa.x) * (p.y - pa.y) -
                                 (pb.y - pa.y) * (p.x - pa.x);
            if (t > 1e-9 && t < 1.0 - 1e-9 &&
                std::abs(cross) < 1e-9 * length * length)
            {
                throw InvalidMesh(fmt::format(
                    "hanging node {} on boundary edge ({}, {})", n, a, b));
            }
        }
    }
}

Point Mesh::centroid(std::size_t e) const
{
    auto const& n = elements_[e].nodes;
    return {(nodes_[n[0]].x + nodes_[n[1]].x + nodes_[n[2]].x) / 3.0,
            (nodes_[n[0]].y + nodes_[n[1]].y + nodes_[n[2]].y) / 3.0};
}

std::pair<std::size_t, std::size_t> Mesh::edge_nodes(
    BoundaryEdge const& edge) const
{
    auto const& n = elements_[edge.element].nodes;
    return {n[edge.local_edge], n[(edge.local_edge + 1) % 3]};
}

double Mesh::edge_length(BoundaryEdge const& edge) const
{
    auto const [a, b] = edge_nodes(edge);
    return std::hypot(nodes_[b].x - nodes_[a].x, nodes_[b].y - nodes_[a].y);
}

std::vector<std::size_t> Mesh::tagged_nodes(BoundaryTag tag) const
{
    std::vector<std::size_t> result;
    for (auto const& edge : boundary_edges_)
    {
        if (edge.tag == tag)
        {
            auto const [a, b] = edge_nodes(edge);
            result.push_back(a);
            result.push_back(b);
        }
    }
    std::sort(result.begin(), result.end());
    result.erase(std::unique(result.begin(), result.end()), result.end());
    return result;
}

std::size_t Mesh::nearest_node(Point const& p) const
{
    std::size_t best = 0;
    double best_distance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes_.size(); ++i)
    {
        double const d = std::hypot(nodes_[i].x - p.x, nodes_[i].y - p.y);
        if (d < best_distance)
        {
            best_distance = d;
            best = i;
        }
    }
    return best;
}

Mesh generate_lshape(double outer, double thickness, double h)
{
    if (!(std::isfinite(outer) && std::isfinite(thickness) &&
          std::isfinite(h)) ||
        !(thickness > 0.0) || !(outer > thickness) || !(h > 0.0) ||
        !(h <= thickness))
    {
        throw InvalidGeometry(fmt::format(
            "L-shape needs 0 < thickness < outer and 0 < h <= thickness "
            "(outer={}, thickness={}, h={})",
            outer, thickness, h));
    }
    auto const divisions = [h](double length) {
        return std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(length / h - 1e-9)));
    };
    std::size_t const nt = divisions(thickness);
    std::size_t const no = divisions(outer - thickness);
    std::size_t const n = nt + no;

    std::vector<double> coord(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
    {
        coord[i] = i <= nt ? thickness * static_cast<double>(i) /
                                 static_cast<double>(nt)
                           : thickness + (outer - thickness) *
                                             static_cast<double>(i - nt) /
                                             static_cast<double>(no);
    }

    auto const cell_inside = [&](std::size_t i, std::size_t j) {
        return i < n && j < n && (i < nt || j < nt);
    };

    constexpr auto none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> grid_id((n + 1) * (n + 1), none);
    std::vector<Point> nodes;
    for (std::size_t j = 0; j <= n; ++j)
    {
        for (std::size_t i = 0; i <= n; ++i)
        {
            if (i <= nt || j <= nt)
            {
                grid_id[j * (n + 1) + i] = nodes.size();
                nodes.push_back({coord[i], coord[j]});
            }
        }
    }

    std::vector<Element> elements;
    std::vector<BoundaryEdge> edges;
    for (std::size_t j = 0; j < n; ++j)
    {
        for (std::size_t i = 0; i < n; ++i)
        {
            if (!cell_inside(i, j))
            {
                continue;
            }
            std::size_t const centre = nodes.size();
            nodes.push_back({0.5 * (coord[i] + coord[i + 1]),
                             0.5 * (coord[j] + coord[j + 1])});
            std::array<std::size_t, 4> const corner{
                grid_id[j * (n + 1) + i], grid_id[j * (n + 1) + i + 1],
                grid_id[(j + 1) * (n + 1) + i + 1],
                grid_id[(j + 1) * (n + 1) + i]};
            // sides: bottom, right, top, left
            std::array<std::optional<BoundaryTag>, 4> side_tag;
            if (j == 0)
            {
                side_tag[0] = BoundaryTag::Exterior;
            }
            if (i + 1 == n)
            {
                side_tag[1] = BoundaryTag::SupportA;
            }
            else if (!cell_inside(i + 1, j))
            {
                side_tag[1] = BoundaryTag::Interior;
            }
            if (j + 1 == n)
            {
                side_tag[2] = BoundaryTag::SupportB;
            }
            else if (!cell_inside(i, j + 1))
            {
                side_tag[2] = BoundaryTag::Interior;
            }
            if (i == 0)
            {
                side_tag[3] = BoundaryTag::Exterior;
            }
            for (std::size_t s = 0; s < 4; ++s)
            {
                if (side_tag[s])
                {
                    edges.push_back({elements.size(), 0, *side_tag[s]});
                }
                elements.push_back({{corner[s], corner[(s + 1) % 4], centre}});
            }
        }
    }
    return Mesh(std::move(nodes), std::move(elements), std::move(edges));
}

namespace
{
class LineReader
{
public:
    explicit LineReader(std::string_view text) : text_(text) {}

    /// Next non-empty line with comments stripped, split into tokens.
    std::optional<std::vector<std::string_view>> next()
    {
        while (position_ < text_.size())
        {
            auto end = text_.find('\n', position_);
            if (end == std::string_view::npos)
            {
                end = text_.size();
            }
            auto line = text_.substr(position_, end - position_);
            position_ = end + 1;
            ++line_number_;
            if (auto const hash = line.find('#'); hash != std::string_view::npos)
            {
                line = line.substr(0, hash);
            }
            std::vector<std::string_view> tokens;
            std::size_t i = 0;
            while (i < line.size())
            {
                while (i < line.size() &&
                       (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
                {
                    ++i;
                }
                std::size_t const start = i;
                while (i < line.size() && line[i] != ' ' && line[i] != '\t' &&
                       line[i] != '\r')
                {
                    ++i;
                }
                if (i > start)
                {
                    tokens.push_back(line.substr(start, i - start));
                }
            }
            if (!tokens.empty())
            {
                return tokens;
            }
        }
        return std::nullopt;
    }

    std::size_t line() const { return line_number_; }

private:
    std::string_view text_;
    std::size_t position_ = 0;
    std::size_t line_number_ = 0;
};

std::size_t to_index(std::string_view token, std::size_t line)
{
    std::size_t value = 0;
    auto const [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
    {
        throw ParseError(line, "expected a non-negative integer, got '" +
                                   std::string(token) + "'");
    }
    return value;
}

double to_double(std::string_view token, std::size_t line)
{
    std::string const s(token);
    std::size_t consumed = 0;
    double value = 0.0;
    try
    {
        value = std::stod(s, &consumed);
    }
    catch (std::exception const&)
    {
        consumed = 0;
    }
    if (consumed != s.size() || s.empty())
    {
        throw ParseError(line, "expected a number, got '" + s + "'");
    }
    return value;
}

std::vector<std::string_view> expect_line(LineReader& reader,
                                          std::size_t fields,
                                          std::string_view what)
{
    auto tokens = reader.next();
    if (!tokens)
    {
        throw ParseError(reader.line(),
                         "unexpected end of file while reading " +
                             std::string(what));
    }
    if (tokens->size() != fields)
    {
        throw ParseError(reader.line(),
                         fmt::format("expected {} fields in {} line, got {}",
                                     fields, what, tokens->size()));
    }
    return *tokens;
}

std::size_t expect_header(LineReader& reader, std::string_view keyword)
{
    auto const tokens = expect_line(reader, 2, std::string(keyword) + " header");
    if (tokens[0] != keyword)
    {
        throw ParseError(reader.line(),
                         fmt::format("expected '{} <count>', got '{}'", keyword,
                                     tokens[0]));
    }
    return to_index(tokens[1], reader.line());
}
}  // namespace

Mesh load_mesh(std::string_view text)
{
    LineReader reader(text);

    std::size_t const node_count = expect_header(reader, "nodes");
    std::vector<Point> nodes(node_count);
    std::vector<bool> seen(node_count, false);
    for (std::size_t k = 0; k < node_count; ++k)
    {
        auto const t = expect_line(reader, 3, "node");
        std::size_t const id = to_index(t[0], reader.line());
        if (id >= node_count)
        {
            throw ParseError(reader.line(),
                             fmt::format("node id {} out of range 0..{}", id,
                                         node_count - 1));
        }
        if (seen[id])
        {
            throw ParseError(reader.line(),
                             fmt::format("duplicate node id {}", id));
        }
        seen[id] = true;
        nodes[id] = {to_double(t[1], reader.line()),
                     to_double(t[2], reader.line())};
    }

    std::size_t const element_count = expect_header(reader, "elements");
    std::vector<Element> elements(element_count);
    std::vector<bool> seen_element(element_count, false);
    for (std::size_t k = 0; k < element_count; ++k)
    {
        auto const t = expect_line(reader, 4, "element");
        std::size_t const id = to_index(t[0], reader.line());
        if (id >= element_count || seen_element[id])
        {
            throw ParseError(reader.line(),
                             fmt::format("invalid or duplicate element id {}", id));
        }
        seen_element[id] = true;
        for (std::size_t c = 0; c < 3; ++c)
        {
            std::size_t const n = to_index(t[c + 1], reader.line());
            if (n >= node_count)
            {
                throw ParseError(
                    reader.line(),
                    fmt::format("element {} references node {} but only {} "
                                "nodes exist (dangling reference)",
                                id, n, node_count));
            }
            elements[id].nodes[c] = n;
        }
    }

    std::vector<BoundaryEdge> edges;
    if (auto const header = reader.next())
    {
        if (header->size() != 2 || (*header)[0] != "bedges")
        {
            throw ParseError(reader.line(), "expected 'bedges <count>'");
        }
        std::size_t const edge_count = to_index((*header)[1], reader.line());
        edges.reserve(edge_count);
        for (std::size_t k = 0; k < edge_count; ++k)
        {
            auto const t = expect_line(reader, 3, "boundary edge");
            std::size_t const element = to_index(t[0], reader.line());
            std::size_t const local = to_index(t[1], reader.line());
            if (element >= element_count || local > 2)
            {
                throw ParseError(reader.line(),
                                 fmt::format("boundary edge ({}, {}) does not exist",
                                             element, local));
            }
            BoundaryTag tag{};
            try
            {
                tag = parse_tag(t[2]);
            }
            catch (InvalidMesh const& e)
            {
                throw ParseError(reader.line(), e.what());
            }
            edges.push_back({element, static_cast<int>(local), tag});
        }
    }
    if (reader.next())
    {
        throw ParseError(reader.line(), "trailing content after mesh sections");
    }
    return Mesh(std::move(nodes), std::move(elements), std::move(edges));
}

Mesh read_mesh_file(std::filesystem::path const& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw IoError("cannot open mesh file " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return load_mesh(buffer.str());
}

std::string write_mesh(Mesh const& mesh)
{
    std::string out = "# frostsim triangular mesh\n";
    out += fmt::format("nodes {}\n", mesh.node_count());
    for (std::size_t i = 0; i < mesh.node_count(); ++i)
    {
        out += fmt::format("{} {:.17g} {:.17g}\n", i, mesh.node(i).x,
                           mesh.node(i).y);
    }
    out += fmt::format("elements {}\n", mesh.element_count());
    for (std::size_t e = 0; e < mesh.element_count(); ++e)
    {
        auto const& n = mesh.element(e).nodes;
        out += fmt::format("{} {} {} {}\n", e, n[0], n[1], n[2]);
    }
    out += fmt::format("bedges {}\n", mesh.boundary_edges().size());
    for (auto const& edge : mesh.boundary_edges())
    {
        out += fmt::format("{} {} {}\n", edge.element, edge.local_edge,
                           to_string(edge.tag));
    }
    return out;
}

void save_mesh(Mesh const& mesh, std::filesystem::path const& path)
{
    std::ofstream out(path);
    if (!out)
    {
        throw IoError("cannot write mesh file " + path.string());
    }
    out << write_mesh(mesh);
    if (!out)
    {
        throw IoError("failed writing mesh file " + path.string());
    }
}

}  // namespace frost::mesh
