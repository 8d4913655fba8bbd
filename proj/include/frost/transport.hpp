#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "frost/constitutive.hpp"
#include "frost/ice.hpp"
#include "frost/mesh.hpp"

namespace frost::transport
{
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Coefficients of the coupled heat (theta) and moisture (phi) balance at
/// one point:
///   c_tt dtheta/dt = div(k_tt grad theta + k_tp grad phi)
///   c_pp dphi/dt   = div(k_pt grad theta + k_pp grad phi)
struct CoefficientSet
{
    double k_tt = 0.0;
    double k_tp = 0.0;
    double k_pt = 0.0;
    double k_pp = 0.0;
    double c_tt = 0.0;
    double c_pp = 0.0;
};

class CoefficientModel
{
public:
    virtual ~CoefficientModel() = default;
    virtual CoefficientSet evaluate(double theta, double phi) const = 0;

    /// Coefficients at (theta, phi) with the heat capacity averaged over
    /// the temperature interval [theta_old, theta]. The default uses the
    /// point value.
    virtual CoefficientSet evaluate_over_interval(double theta_old,
                                                  double theta,
                                                  double phi) const
    {
        (void)theta_old;
        return evaluate(theta, phi);
    }
};

class ConstantCoefficients final : public CoefficientModel
{
public:
    explicit ConstantCoefficients(CoefficientSet values) : values_(values) {}
    CoefficientSet evaluate(double, double) const override { return values_; }

private:
    CoefficientSet values_;
};

/// Kuenzel transport coefficients with the latent heat of pore ice.
/// The vapour term div(delta_v grad(phi p_sat)) is expanded as
/// delta_v p_sat grad phi + delta_v phi p_sat' grad theta.
class HygrothermalCoefficients final : public CoefficientModel
{
public:
    HygrothermalCoefficients(constitutive::TransportParams transport,
                             ice::IceParams ice, ice::PoreSizeDistribution psd,
                             ice::IceContentModel ice_model =
                                 ice::IceContentModel::FreezableFraction);

    CoefficientSet evaluate(double theta, double phi) const override;

    /// Latent heat term as the chord -h_i (w_i(theta) - w_i(theta_old)) /
    /// (theta - theta_old), sensible terms with the mean ice content.
    CoefficientSet evaluate_over_interval(double theta_old, double theta,
                                          double phi) const override;

    constitutive::TransportParams const& transport_params() const
    {
        return transport_;
    }

private:
    constitutive::TransportParams transport_;
    ice::IceParams ice_;
    ice::PoreSizeDistribution psd_;
    ice::IceContentModel ice_model_;
};

/// Exchange with the surroundings on one boundary group. Robin terms
/// give an outward flux heat_transfer (theta - ambient_temperature) and
/// vapor_transfer (phi - ambient_humidity); the fluxes are inflows.
struct SurfaceExchange
{
    double heat_transfer = 0.0;        // alpha_h [W m^-2 K^-1]
    double ambient_temperature = 0.0;  // [degC]
    double vapor_transfer = 0.0;       // beta_v
    double ambient_humidity = 0.0;     // [-]
    double heat_flux = 0.0;            // [W m^-2]
    double moisture_flux = 0.0;        // [kg m^-2 s^-1]
};

/// Conditions per boundary tag (indexed by the enum value); an empty
/// entry is an adiabatic, impermeable face.
using BoundaryState = std::array<std::optional<SurfaceExchange>, 4>;
using BoundaryProvider = std::function<BoundaryState(double time)>;

enum class Field
{
    Temperature,
    Humidity
};

struct DirichletCondition
{
    Field field = Field::Temperature;
    std::vector<std::size_t> nodes;
    std::function<double(mesh::Point const&, double time)> value;
};

struct TransportState
{
    double time = 0.0;
    Vector theta;  // nodal temperature [degC]
    Vector phi;    // nodal relative humidity [-]
    Vector rate;   // d/dt of (theta, phi) stacked
    int iterations = 0;  // nonlinear iterations of the step that produced it
};

/// Global system K r + C dr/dt = F with r = (theta, phi).
struct AssembledSystem
{
    SparseMatrix conductivity;
    SparseMatrix capacity;
    Vector load;
};

struct LinearSystem
{
    SparseMatrix matrix;
    Vector rhs;
};

struct IterationOptions
{
    double tolerance = 1e-6;
    int max_iterations = 50;
    double relaxation = 0.7;
    /// Convergence is checked per block of this size (0: whole vector).
    Eigen::Index block_size = 0;
};

struct IterationResult
{
    Vector solution;
    int iterations = 0;
    bool converged = false;
    std::vector<double> residuals;   // relative residual of each iterate
    std::vector<double> increments;  // relative increment of each solve
};

/// Under-relaxed fixed-point (Picard) iteration
///   r_{k+1} = (1 - w) r_k + w A(r_k)^{-1} b(r_k).
/// Converged when the relative increment or the relative residual falls
/// below the tolerance. Throws SolverError on a singular system or when
/// the residual grows tenfold over five iterations.
IterationResult nonlinear_iterate(
    std::function<LinearSystem(Vector const&)> const& build, Vector guess,
    IterationOptions const& options);

struct SolverOptions
{
    double tolerance = 1e-6;
    int max_iterations = 50;
    double relaxation = 0.7;
    bool lumped_capacity = false;
    /// Heat capacity averaged over each step (enthalpy chord) instead of
    /// the point derivative at the current iterate.
    bool chord_heat_capacity = true;
};

class TransportProblem
{
public:
    TransportProblem(mesh::Mesh const& mesh, CoefficientModel const& model,
                     BoundaryProvider boundary,
                     std::vector<DirichletCondition> dirichlet = {});

    /// Coefficients frozen at the element centroids of the given fields.
    /// Rain is not applied to nodes flagged in rain_blocked. With
    /// theta_old the heat capacity is averaged from theta_old to theta.
    AssembledSystem assemble(Vector const& theta, Vector const& phi,
                             double time, bool lumped_capacity = false,
                             std::vector<bool> const& rain_blocked = {},
                             Vector const* theta_old = nullptr) const;

    /// State at t0 with the rate taken from C r' = F - K r.
    TransportState initial_state(Vector theta, Vector phi, double t0,
                                 bool lumped_capacity = false) const;

    /// One step of the generalised midpoint rule; throws StepFailure.
    TransportState step(TransportState const& state, double dt, double gamma,
                        SolverOptions const& options) const;

    mesh::Mesh const& mesh() const { return mesh_; }

private:
    void apply_dirichlet(SparseMatrix& matrix, Vector& rhs, double time) const;

    mesh::Mesh const& mesh_;
    CoefficientModel const& model_;
    BoundaryProvider boundary_;
    std::vector<DirichletCondition> dirichlet_;
};

}  // namespace frost::transport
