#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace frost::mesh
{
/// Boundary groups: exterior and interior faces, and the two roller
/// supports (A: u_x = 0, B: u_y = 0).
enum class BoundaryTag
{
    Exterior,
    Interior,
    SupportA,
    SupportB
};

inline constexpr std::array<BoundaryTag, 4> all_tags{
    BoundaryTag::Exterior, BoundaryTag::Interior, BoundaryTag::SupportA,
    BoundaryTag::SupportB};

std::string_view to_string(BoundaryTag tag);

/// Parses EXT, INT, A or B; throws InvalidMesh otherwise.
BoundaryTag parse_tag(std::string_view text);

struct Point
{
    double x = 0.0;
    double y = 0.0;
};

/// Linear (CST) triangle; nodes stored counterclockwise.
struct Element
{
    std::array<std::size_t, 3> nodes{};
};

/// Local edge k of an element joins its nodes k and (k+1) % 3.
struct BoundaryEdge
{
    std::size_t element = 0;
    int local_edge = 0;
    BoundaryTag tag = BoundaryTag::Exterior;
};

struct ShapeGradients
{
    std::array<Point, 3> gradients;
    double area = 0.0;
};

/// Gradients of the three linear shape functions of triangle (a, b, c).
/// Throws DegenerateElement (element id 0) if the signed area is not
/// positive.
ShapeGradients shape_gradients(Point const& a, Point const& b, Point const& c);

class Mesh
{
public:
    /// Validates the input. Clockwise triangles are reoriented (with their
    /// boundary-edge indices remapped).
    Mesh(std::vector<Point> nodes, std::vector<Element> elements,
         std::vector<BoundaryEdge> boundary_edges);

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t element_count() const { return elements_.size(); }

    std::vector<Point> const& nodes() const { return nodes_; }
    std::vector<Element> const& elements() const { return elements_; }
    std::vector<BoundaryEdge> const& boundary_edges() const
    {
        return boundary_edges_;
    }

    Point const& node(std::size_t i) const { return nodes_[i]; }
    Element const& element(std::size_t e) const { return elements_[e]; }
    ShapeGradients const& shape(std::size_t e) const { return shapes_[e]; }
    double area(std::size_t e) const { return shapes_[e].area; }
    Point centroid(std::size_t e) const;

    std::pair<std::size_t, std::size_t> edge_nodes(
        BoundaryEdge const& edge) const;
    double edge_length(BoundaryEdge const& edge) const;

    /// Sorted unique node ids lying on edges with the given tag.
    std::vector<std::size_t> tagged_nodes(BoundaryTag tag) const;

    /// Node closest to p (lowest id on ties).
    std::size_t nearest_node(Point const& p) const;

private:
    std::vector<Point> nodes_;
    std::vector<Element> elements_;
    std::vector<BoundaryEdge> boundary_edges_;
    std::vector<ShapeGradients> shapes_;
};

/// L-shaped wall corner: the union of [0, outer] x [0, thickness] and
/// [0, thickness] x [0, outer]. Faces x = 0 and y = 0 are exterior, the
/// two re-entrant faces are interior, the leg end x = outer is support A
/// and the leg end y = outer is support B. Each square cell of the
/// structured grid is split into four triangles around its centre.
Mesh generate_lshape(double outer, double thickness, double h);

/// Parses the line-oriented mesh format (`nodes`, `elements`, `bedges`
/// sections, `#` comments).
Mesh load_mesh(std::string_view text);
Mesh read_mesh_file(std::filesystem::path const& path);

std::string write_mesh(Mesh const& mesh);
void save_mesh(Mesh const& mesh, std::filesystem::path const& path);

}  // namespace frost::mesh
