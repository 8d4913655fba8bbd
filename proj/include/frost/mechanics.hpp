#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "frost/mesh.hpp"

namespace frost::mechanics
{
using Vector = Eigen::VectorXd;
/// Voigt strain {e_xx, e_yy, gamma_xy} or stress {s_xx, s_yy, s_xy}.
using Voigt = Eigen::Vector3d;

struct MechParams
{
    double youngs_modulus = 1e10;    // E [Pa]
    double poisson_ratio = 0.2;      // nu [-]
    double tensile_strength = 2.5e6; // f_t [Pa]
    double critical_strain = 2.5e-3; // eps_f [-]
    double internal_length = 1e-3;   // l_intl [m]
    double thermal_expansion = 1.2e-5;  // alpha [K^-1]
    double porosity = 0.35;          // n [-]
    double residual_stiffness = 1e-6;   // stiffness kept at full damage
    std::array<double, 2> body_force{0.0, 0.0};  // [N m^-3]
    int max_iterations = 30;
    double damage_tolerance = 1e-4;

    /// eps_0 = f_t / E
    double elastic_limit_strain() const
    {
        return tensile_strength / youngs_modulus;
    }

    /// Throws InvalidParameters.
    void validate() const;
};

/// b = 2n / (n + 1).
double biot_coefficient(double porosity);

/// Plane-strain isotropic elasticity matrix acting on Voigt strains.
Eigen::Matrix3d elastic_stiffness(double youngs_modulus, double poisson_ratio);

/// sqrt(sum <eps_I>^2) over the in-plane principal strains and eps_z = 0.
double mazars_equivalent_strain(Voigt const& strain);

/// Linear softening: 0 up to eps_0, 1 from eps_f, linear in between.
double damage_function(double kappa, MechParams const& p);

/// Gaussian-weighted average over element centroids, truncated at three
/// internal lengths and normalised per target element.
class NonlocalAverage
{
public:
    NonlocalAverage(mesh::Mesh const& mesh, double internal_length);

    std::vector<double> apply(std::span<double const> field) const;

    Eigen::SparseMatrix<double, Eigen::RowMajor> const& weights() const
    {
        return weights_;
    }

private:
    Eigen::SparseMatrix<double, Eigen::RowMajor> weights_;
};

struct MechState
{
    Vector u;                    // nodal displacements (x0, y0, x1, ...)
    std::vector<double> kappa;   // per element
    std::vector<double> damage;  // per element
    bool converged = true;
    int iterations = 0;
};

MechState undamaged_state(mesh::Mesh const& mesh);

/// Prescribed displacement component (0: x, 1: y).
struct DisplacementConstraint
{
    std::size_t node = 0;
    int component = 0;
    double value = 0.0;
};

struct MechLoads
{
    Vector nodal_temperature;          // [degC]
    double reference_temperature = 0;  // stress-free temperature
    std::vector<double> pore_pressure; // per element [Pa]
};

/// Quasi-static plane-strain equilibrium with Biot effective stress
///   sigma = (1 - d) D_e (eps - eps_th) - b p_p i
/// solved by secant iteration on the nonlocal damage field.
class MechanicsSolver
{
public:
    /// Supports: u_x = 0 on support-A edges and u_y = 0 on support-B edges
    /// (when use_supports), plus any extra constraints.
    MechanicsSolver(mesh::Mesh const& mesh, MechParams params,
                    std::vector<DisplacementConstraint> constraints = {},
                    bool use_supports = true);

    /// Throws SolverError if the stiffness is singular. A damage loop that
    /// does not settle returns its last iterate with converged = false.
    MechState solve(MechLoads const& loads, MechState const& previous) const;

    Voigt strain(Vector const& u, std::size_t element) const;
    Voigt thermal_strain(MechLoads const& loads, std::size_t element) const;
    Voigt effective_stress(MechState const& state, MechLoads const& loads,
                           std::size_t element) const;
    Voigt total_stress(MechState const& state, MechLoads const& loads,
                       std::size_t element) const;

    /// Local equivalent strain of the mechanical strain per element.
    std::vector<double> equivalent_strain(Vector const& u,
                                          MechLoads const& loads) const;

    NonlocalAverage const& nonlocal() const { return nonlocal_; }
    MechParams const& params() const { return params_; }
    double biot() const { return biot_; }

private:
    Vector solve_displacements(MechLoads const& loads,
                               std::vector<double> const& damage) const;

    mesh::Mesh const& mesh_;
    MechParams params_;
    Eigen::Matrix3d elasticity_;
    double biot_;
    NonlocalAverage nonlocal_;
    std::vector<bool> fixed_;
    Vector fixed_value_;
};

}  // namespace frost::mechanics
