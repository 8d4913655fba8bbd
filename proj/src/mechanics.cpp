#include "frost/mechanics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseCholesky>
#include <fmt/format.h>

#include "constraints.hpp"
#include "frost/error.hpp"

namespace frost::mechanics
{
void MechParams::validate() const
{
    if (!(youngs_modulus > 0.0))
    {
        throw InvalidParameters("Young's modulus must be positive");
    }
    if (!(poisson_ratio > 0.0 && poisson_ratio < 0.5))
    {
        throw InvalidParameters(
            fmt::format("Poisson's ratio {} outside (0, 0.5)", poisson_ratio));
    }
    double const eps0 = elastic_limit_strain();
    if (!(eps0 > 0.0 && critical_strain > eps0))
    {
        throw InvalidParameters(fmt::format(
            "need eps_f > eps_0 > 0 (eps_0={}, eps_f={})", eps0,
            critical_strain));
    }
    if (!(internal_length > 0.0))
    {
        throw InvalidParameters("internal length must be positive");
    }
    if (!(porosity >= 0.0 && porosity <= 1.0))
    {
        throw InvalidParameters("porosity outside [0, 1]");
    }
    if (!(residual_stiffness > 0.0 && residual_stiffness < 1.0))
    {
        throw InvalidParameters("residual stiffness outside (0, 1)");
    }
    if (max_iterations < 1 || !(damage_tolerance > 0.0))
    {
        throw InvalidParameters("invalid damage iteration controls");
    }
}

double biot_coefficient(double porosity)
{
    if (!(porosity >= 0.0 && porosity <= 1.0))
    {
        throw DomainError(fmt::format("porosity {} outside [0, 1]", porosity));
    }
    return 2.0 * porosity / (porosity + 1.0);
}

Eigen::Matrix3d elastic_stiffness(double youngs_modulus, double poisson_ratio)
{
    double const E = youngs_modulus;
    double const nu = poisson_ratio;
    double const factor = E / ((1.0 + nu) * (1.0 - 2.0 * nu));
    Eigen::Matrix3d d;
    d << factor * (1.0 - nu), factor * nu, 0.0,  //
        factor * nu, factor * (1.0 - nu), 0.0,   //
        0.0, 0.0, E / (2.0 * (1.0 + nu));
    return d;
}

double mazars_equivalent_strain(Voigt const& strain)
{
    double const mean = 0.5 * (strain[0] + strain[1]);
    double const radius = std::hypot(0.5 * (strain[0] - strain[1]),
                                     0.5 * strain[2]);
    double const e1 = std::max(mean + radius, 0.0);
    double const e2 = std::max(mean - radius, 0.0);
    return std::sqrt(e1 * e1 + e2 * e2);
}

double damage_function(double kappa, MechParams const& p)
{
    double const eps0 = p.elastic_limit_strain();
    if (kappa <= eps0)
    {
        return 0.0;
    }
    if (kappa >= p.critical_strain)
    {
        return 1.0;
    }
    return (kappa - eps0) / (p.critical_strain - eps0);
}

NonlocalAverage::NonlocalAverage(mesh::Mesh const& mesh,
                                 double internal_length)
{
    if (!(internal_length > 0.0))
    {
        throw InvalidParameters("internal length must be positive");
    }
    auto const count = static_cast<Eigen::Index>(mesh.element_count());
    std::vector<mesh::Point> centroid(mesh.element_count());
    for (std::size_t e = 0; e < mesh.element_count(); ++e)
    {
        centroid[e] = mesh.centroid(e);
    }
    double const cutoff = 3.0 * internal_length;
    double const two_l2 = 2.0 * internal_length * internal_length;

    std::vector<Eigen::Triplet<double>> entries;
    for (Eigen::Index i = 0; i < count; ++i)
    {
        auto const& ci = centroid[static_cast<std::size_t>(i)];
        std::vector<std::pair<Eigen::Index, double>> row;
        double sum = 0.0;
        for (Eigen::Index j = 0; j < count; ++j)
        {
            auto const& cj = centroid[static_cast<std::size_t>(j)];
            double const d2 = (ci.x - cj.x) * (ci.x - cj.x) +
                              (ci.y - cj.y) * (ci.y - cj.y);
            if (d2 > cutoff * cutoff)
            {
                continue;
            }
            double const w = std::exp(-d2 / two_l2) *
                             mesh.area(static_cast<std::size_t>(j));
            row.emplace_back(j, w);
            sum += w;
        }
        for (auto const& [j, w] : row)
        {
            entries.emplace_back(i, j, w / sum);
        }
    }
    weights_.resize(count, count);
    weights_.setFromTriplets(entries.begin(), entries.end());
}

std::vector<double> NonlocalAverage::apply(std::span<double const> field) const
{
    if (static_cast<Eigen::Index>(field.size()) != weights_.cols())
    {
        throw InvalidParameters("field size does not match the element count");
    }
    Eigen::Map<Vector const> in(field.data(),
                                static_cast<Eigen::Index>(field.size()));
    Vector const out = weights_ * in;
    return {out.data(), out.data() + out.size()};
}

MechState undamaged_state(mesh::Mesh const& mesh)
{
    MechState s;
    s.u = Vector::Zero(static_cast<Eigen::Index>(2 * mesh.node_count()));
    s.kappa.assign(mesh.element_count(), 0.0);
    s.damage.assign(mesh.element_count(), 0.0);
    return s;
}

namespace
{
/// Strain-displacement matrix of a CST element (3 x 6).
Eigen::Matrix<double, 3, 6> strain_matrix(mesh::ShapeGradients const& shape)
{
    Eigen::Matrix<double, 3, 6> b = Eigen::Matrix<double, 3, 6>::Zero();
    for (int a = 0; a < 3; ++a)
    {
        double const gx = shape.gradients[a].x;
        double const gy = shape.gradients[a].y;
        b(0, 2 * a) = gx;
        b(1, 2 * a + 1) = gy;
        b(2, 2 * a) = gy;
        b(2, 2 * a + 1) = gx;
    }
    return b;
}
}  // namespace

MechanicsSolver::MechanicsSolver(mesh::Mesh const& mesh, MechParams params,
                                 std::vector<DisplacementConstraint> constraints,
                                 bool use_supports)
    : mesh_(mesh),
      params_(params),
      elasticity_(elastic_stiffness(params.youngs_modulus, params.poisson_ratio)),
      biot_(biot_coefficient(params.porosity)),
      nonlocal_(mesh, params.internal_length)
{
    params_.validate();
    auto const dofs = 2 * mesh_.node_count();
    fixed_.assign(dofs, false);
    fixed_value_ = Vector::Zero(static_cast<Eigen::Index>(dofs));
    if (use_supports)
    {
        for (auto const node : mesh_.tagged_nodes(mesh::BoundaryTag::SupportA))
        {
            fixed_[2 * node] = true;
        }
        for (auto const node : mesh_.tagged_nodes(mesh::BoundaryTag::SupportB))
        {
            fixed_[2 * node + 1] = true;
        }
    }
    for (auto const& c : constraints)
    {
        if (c.node >= mesh_.node_count() || c.component < 0 || c.component > 1)
        {
            throw InvalidParameters(fmt::format(
                "invalid displacement constraint on node {}", c.node));
        }
        auto const dof = 2 * c.node + static_cast<std::size_t>(c.component);
        fixed_[dof] = true;
        fixed_value_[static_cast<Eigen::Index>(dof)] = c.value;
    }
}

Voigt MechanicsSolver::strain(Vector const& u, std::size_t element) const
{
    auto const& nodes = mesh_.element(element).nodes;
    Eigen::Matrix<double, 6, 1> ue;
    for (int a = 0; a < 3; ++a)
    {
        ue[2 * a] = u[static_cast<Eigen::Index>(2 * nodes[a])];
        ue[2 * a + 1] = u[static_cast<Eigen::Index>(2 * nodes[a] + 1)];
    }
    return strain_matrix(mesh_.shape(element)) * ue;
}

Voigt MechanicsSolver::thermal_strain(MechLoads const& loads,
                                      std::size_t element) const
{
    if (loads.nodal_temperature.size() == 0)
    {
        return Voigt::Zero();
    }
    auto const& nodes = mesh_.element(element).nodes;
    double theta = 0.0;
    for (auto const n : nodes)
    {
        theta += loads.nodal_temperature[static_cast<Eigen::Index>(n)] / 3.0;
    }
    double const e =
        params_.thermal_expansion * (theta - loads.reference_temperature);
    return {e, e, 0.0};
}

Voigt MechanicsSolver::effective_stress(MechState const& state,
                                        MechLoads const& loads,
                                        std::size_t element) const
{
    double const intact = std::max(1.0 - state.damage[element],
                                   params_.residual_stiffness);
    return intact * elasticity_ *
           (strain(state.u, element) - thermal_strain(loads, element));
}

Voigt MechanicsSolver::total_stress(MechState const& state,
                                    MechLoads const& loads,
                                    std::size_t element) const
{
    double const p =
        loads.pore_pressure.empty() ? 0.0 : loads.pore_pressure[element];
    return effective_stress(state, loads, element) -
           biot_ * p * Voigt(1.0, 1.0, 0.0);
}

std::vector<double> MechanicsSolver::equivalent_strain(
    Vector const& u, MechLoads const& loads) const
{
    std::vector<double> result(mesh_.element_count());
    for (std::size_t e = 0; e < mesh_.element_count(); ++e)
    {
        result[e] =
            mazars_equivalent_strain(strain(u, e) - thermal_strain(loads, e));
    }
    return result;
}

Vector MechanicsSolver::solve_displacements(
    MechLoads const& loads, std::vector<double> const& damage) const
{
    auto const dofs = static_cast<Eigen::Index>(2 * mesh_.node_count());
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(mesh_.element_count() * 36);
    Vector force = Vector::Zero(dofs);

    for (std::size_t e = 0; e < mesh_.element_count(); ++e)
    {
        auto const& shape = mesh_.shape(e);
        auto const& nodes = mesh_.element(e).nodes;
        auto const b = strain_matrix(shape);
        double const intact =
            std::max(1.0 - damage[e], params_.residual_stiffness);
        Eigen::Matrix<double, 6, 6> const ke =
            shape.area * intact * b.transpose() * elasticity_ * b;

        double const p =
            loads.pore_pressure.empty() ? 0.0 : loads.pore_pressure[e];
        Voigt const stress_load = intact * elasticity_ * thermal_strain(loads, e) +
                                  biot_ * p * Voigt(1.0, 1.0, 0.0);
        Eigen::Matrix<double, 6, 1> fe = shape.area * b.transpose() * stress_load;
        for (int a = 0; a < 3; ++a)
        {
            fe[2 * a] += params_.body_force[0] * shape.area / 3.0;
            fe[2 * a + 1] += params_.body_force[1] * shape.area / 3.0;
        }

        std::array<Eigen::Index, 6> global{};
        for (int a = 0; a < 3; ++a)
        {
            global[2 * a] = static_cast<Eigen::Index>(2 * nodes[a]);
            global[2 * a + 1] = static_cast<Eigen::Index>(2 * nodes[a] + 1);
        }
        for (int i = 0; i < 6; ++i)
        {
            force[global[i]] += fe[i];
            for (int j = 0; j < 6; ++j)
            {
                entries.emplace_back(global[i], global[j], ke(i, j));
            }
        }
    }

    Eigen::SparseMatrix<double> stiffness(dofs, dofs);
    stiffness.setFromTriplets(entries.begin(), entries.end());
    detail::eliminate_prescribed(stiffness, force, fixed_, fixed_value_);

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
    solver.compute(stiffness);
    if (solver.info() != Eigen::Success)
    {
        throw SolverError("mechanical stiffness matrix is singular");
    }
    Vector u = solver.solve(force);
    if (solver.info() != Eigen::Success || !u.allFinite() ||
        (solver.vectorD().array() <= 0.0).any())
    {
        throw SolverError(
            "mechanical stiffness matrix is singular (insufficient supports?)");
    }
    return u;
}

MechState MechanicsSolver::solve(MechLoads const& loads,
                                 MechState const& previous) const
{
    auto const count = mesh_.element_count();
    if (previous.kappa.size() != count || previous.damage.size() != count)
    {
        throw InvalidParameters("mechanical history does not match the mesh");
    }
    if (!loads.pore_pressure.empty() && loads.pore_pressure.size() != count)
    {
        throw InvalidParameters("pore pressure must be given per element");
    }

    MechState state;
    state.damage = previous.damage;
    state.converged = false;
    std::vector<double> kappa(count);
    for (int iteration = 1; iteration <= params_.max_iterations; ++iteration)
    {
        state.u = solve_displacements(loads, state.damage);
        state.iterations = iteration;
        auto const averaged = nonlocal_.apply(equivalent_strain(state.u, loads));
        double change = 0.0;
        for (std::size_t e = 0; e < count; ++e)
        {
            kappa[e] = std::max(previous.kappa[e], averaged[e]);
            double const d = damage_function(kappa[e], params_);
            change = std::max(change, std::abs(d - state.damage[e]));
            state.damage[e] = d;
        }
        if (change < params_.damage_tolerance)
        {
            state.converged = true;
            break;
        }
    }
    state.kappa = std::move(kappa);
    return state;
}

}  // namespace frost::mechanics
