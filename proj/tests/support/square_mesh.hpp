#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "frost/mesh.hpp"

namespace frost::testing
{
/// Unit square split into cells x cells squares, each cut along the
/// diagonal. Faces: x = 0 exterior, x = 1 interior, y = 0 support A and
/// y = 1 support B.
inline mesh::Mesh unit_square(int cells)
{
    using namespace frost::mesh;
    auto const id = [cells](int i, int j) {
        return static_cast<std::size_t>(j * (cells + 1) + i);
    };
    std::vector<Point> nodes;
    for (int j = 0; j <= cells; ++j)
    {
        for (int i = 0; i <= cells; ++i)
        {
            nodes.push_back({static_cast<double>(i) / cells,
                             static_cast<double>(j) / cells});
        }
    }
    std::vector<Element> elements;
    std::vector<BoundaryEdge> edges;
    for (int j = 0; j < cells; ++j)
    {
        for (int i = 0; i < cells; ++i)
        {
            auto const lower = elements.size();
            elements.push_back({{id(i, j), id(i + 1, j), id(i + 1, j + 1)}});
            elements.push_back({{id(i, j), id(i + 1, j + 1), id(i, j + 1)}});
            if (j == 0)
            {
                edges.push_back({lower, 0, BoundaryTag::SupportA});
            }
            if (i == cells - 1)
            {
                edges.push_back({lower, 1, BoundaryTag::Interior});
            }
            if (j == cells - 1)
            {
                edges.push_back({lower + 1, 1, BoundaryTag::SupportB});
            }
            if (i == 0)
            {
                edges.push_back({lower + 1, 2, BoundaryTag::Exterior});
            }
        }
    }
    return Mesh(std::move(nodes), std::move(elements), std::move(edges));
}

/// Nodes on the boundary of the unit square.
inline std::vector<std::size_t> square_boundary_nodes(mesh::Mesh const& m)
{
    std::vector<std::size_t> result;
    for (std::size_t i = 0; i < m.node_count(); ++i)
    {
        auto const& p = m.node(i);
        double const tol = 1e-12;
        if (p.x < tol || p.y < tol || p.x > 1.0 - tol || p.y > 1.0 - tol)
        {
            result.push_back(i);
        }
    }
    return result;
}

}  // namespace frost::testing
