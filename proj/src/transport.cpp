#include "frost/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef FROST_HAVE_KLU
#include <Eigen/KLUSupport>
#else
#include <Eigen/SparseLU>
#endif
#include <fmt/format.h>

#include "constraints.hpp"
#include "frost/error.hpp"

namespace frost::transport
{
HygrothermalCoefficients::HygrothermalCoefficients(
    constitutive::TransportParams transport, ice::IceParams ice,
    ice::PoreSizeDistribution psd, ice::IceContentModel ice_model)
    : transport_(std::move(transport)),
      ice_(ice),
      psd_(std::move(psd)),
      ice_model_(ice_model)
{
}

CoefficientSet HygrothermalCoefficients::evaluate(double theta,
                                                  double phi) const
{
    namespace c = constitutive;
    double const w = c::water_content(phi, transport_);
    double const p_sat = c::saturation_pressure(theta);
    double const dp_sat = c::saturation_pressure_derivative(theta);
    double const delta_v = c::vapor_permeability(theta, transport_);
    double const h_v = c::latent_heat_vapor(theta);
    auto const ice =
        ice::ice_content(theta, phi, psd_, ice_, transport_, ice_model_);

    CoefficientSet s;
    s.k_tt = c::thermal_conductivity(w, transport_) +
             h_v * delta_v * phi * dp_sat;
    s.k_tp = h_v * delta_v * p_sat;
    s.k_pt = delta_v * phi * dp_sat;
    s.k_pp = c::liquid_conductivity(phi, transport_) + delta_v * p_sat;
    s.c_tt = c::effective_heat_capacity(theta, phi, transport_, ice);
    s.c_pp = c::moisture_capacity(phi, transport_);
    return s;
}

CoefficientSet HygrothermalCoefficients::evaluate_over_interval(
    double theta_old, double theta, double phi) const
{
    CoefficientSet s = evaluate(theta, phi);
    if (std::abs(theta - theta_old) < 1e-6)
    {
        return s;
    }
    auto const now =
        ice::ice_content(theta, phi, psd_, ice_, transport_, ice_model_);
    auto const before =
        ice::ice_content(theta_old, phi, psd_, ice_, transport_, ice_model_);
    constitutive::IceContent mean;
    mean.content = 0.5 * (now.content + before.content);
    mean.derivative = (now.content - before.content) / (theta - theta_old);
    s.c_tt = constitutive::effective_heat_capacity(theta, phi, transport_, mean);
    return s;
}

namespace
{
using Triplet = Eigen::Triplet<double>;

double relative_norm(Vector const& numerator, Vector const& scale_a,
                     Vector const& scale_b, Eigen::Index block)
{
    Eigen::Index const n = numerator.size();
    Eigen::Index const size = block > 0 ? block : n;
    double worst = 0.0;
    for (Eigen::Index start = 0; start < n; start += size)
    {
        Eigen::Index const len = std::min(size, n - start);
        double const scale = std::max({scale_a.segment(start, len).norm(),
                                       scale_b.segment(start, len).norm(),
                                       1e-300});
        worst = std::max(worst, numerator.segment(start, len).norm() / scale);
    }
    return worst;
}

double relative_increment(Vector const& change, Vector const& value,
                          Eigen::Index block)
{
    Eigen::Index const n = change.size();
    Eigen::Index const size = block > 0 ? block : n;
    double worst = 0.0;
    for (Eigen::Index start = 0; start < n; start += size)
    {
        Eigen::Index const len = std::min(size, n - start);
        double const rms_change =
            change.segment(start, len).norm() / std::sqrt(double(len));
        double const rms_value =
            value.segment(start, len).norm() / std::sqrt(double(len));
        worst = std::max(worst, rms_change / std::max(rms_value, 1e-3));
    }
    return worst;
}

#ifdef FROST_HAVE_KLU
using SparseSolver = Eigen::KLU<SparseMatrix>;
#else
using SparseSolver = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;
#endif

/// Factorises and solves; the symbolic analysis is redone only when the
/// sparsity pattern changes.
Vector solve_sparse(SparseSolver& lu, bool& analysed, SparseMatrix const& matrix,
                    Vector const& rhs)
{
    if (!analysed)
    {
        lu.analyzePattern(matrix);
        analysed = true;
    }
    lu.factorize(matrix);
    if (lu.info() != Eigen::Success)
    {
        throw SolverError("singular linear system in transport solve");
    }
    Vector x = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !x.allFinite())
    {
        throw SolverError("linear solve failed in transport solve");
    }
    return x;
}

Vector solve_sparse(SparseMatrix const& matrix, Vector const& rhs)
{
    SparseSolver lu;
    bool analysed = false;
    return solve_sparse(lu, analysed, matrix, rhs);
}
}  // namespace

IterationResult nonlinear_iterate(
    std::function<LinearSystem(Vector const&)> const& build, Vector guess,
    IterationOptions const& options)
{
    if (!(options.tolerance > 0.0))
    {
        throw InvalidParameters("iteration tolerance must be positive");
    }
    if (!(options.relaxation > 0.0 && options.relaxation <= 1.0))
    {
        throw InvalidParameters(fmt::format(
            "relaxation factor {} outside (0, 1]", options.relaxation));
    }
    if (options.max_iterations < 1)
    {
        throw InvalidParameters("at least one iteration is required");
    }

    IterationResult result;
    Vector r = std::move(guess);
    SparseSolver lu;
    bool analysed = false;
    Eigen::Index pattern_nonzeros = -1;
    for (int k = 0; k < options.max_iterations; ++k)
    {
        LinearSystem system = build(r);
        system.matrix.makeCompressed();
        if (system.matrix.nonZeros() != pattern_nonzeros)
        {
            analysed = false;
            pattern_nonzeros = system.matrix.nonZeros();
        }
        Vector const product = system.matrix * r;
        double const residual = relative_norm(product - system.rhs, system.rhs,
                                              product, options.block_size);
        result.residuals.push_back(residual);
        if (k > 0 && residual < options.tolerance)
        {
            result.converged = true;
            result.iterations = k;
            result.solution = std::move(r);
            return result;
        }
        auto const m = result.residuals.size();
        if (m > 5 && residual > 10.0 * result.residuals[m - 6])
        {
            throw SolverError(fmt::format(
                "nonlinear iteration diverges (residual {:.3e} after {} "
                "iterations)",
                residual, k));
        }

        Vector const solved = solve_sparse(lu, analysed, system.matrix, system.rhs);
        double const increment =
            relative_increment(solved - r, solved, options.block_size);
        result.increments.push_back(increment);
        r = (1.0 - options.relaxation) * r + options.relaxation * solved;
        if (increment < options.tolerance)
        {
            result.converged = true;
            result.iterations = k + 1;
            result.solution = std::move(r);
            return result;
        }
    }
    result.iterations = options.max_iterations;
    result.solution = std::move(r);
    return result;
}

TransportProblem::TransportProblem(mesh::Mesh const& mesh,
                                   CoefficientModel const& model,
                                   BoundaryProvider boundary,
                                   std::vector<DirichletCondition> dirichlet)
    : mesh_(mesh),
      model_(model),
      boundary_(std::move(boundary)),
      dirichlet_(std::move(dirichlet))
{
    for (auto const& d : dirichlet_)
    {
        for (auto const n : d.nodes)
        {
            if (n >= mesh_.node_count())
            {
                throw InvalidParameters(
                    fmt::format("Dirichlet node {} does not exist", n));
            }
        }
    }
}

AssembledSystem TransportProblem::assemble(
    Vector const& theta, Vector const& phi, double time, bool lumped_capacity,
    std::vector<bool> const& rain_blocked, Vector const* theta_old) const
{
    auto const n = static_cast<Eigen::Index>(mesh_.node_count());
    std::vector<Triplet> k_entries;
    std::vector<Triplet> c_entries;
    k_entries.reserve(mesh_.element_count() * 36 + mesh_.boundary_edges().size() * 8);
    c_entries.reserve(mesh_.element_count() * 18);
    Vector load = Vector::Zero(2 * n);

    for (std::size_t e = 0; e < mesh_.element_count(); ++e)
    {
        auto const& nodes = mesh_.element(e).nodes;
        auto const& shape = mesh_.shape(e);
        double theta_c = 0.0;
        double phi_c = 0.0;
        double theta_old_c = 0.0;
        for (auto const i : nodes)
        {
            theta_c += theta[static_cast<Eigen::Index>(i)] / 3.0;
            phi_c += phi[static_cast<Eigen::Index>(i)] / 3.0;
            if (theta_old)
            {
                theta_old_c += (*theta_old)[static_cast<Eigen::Index>(i)] / 3.0;
            }
        }
        phi_c = std::clamp(phi_c, 0.0, 1.0);

        CoefficientSet coef;
        try
        {
            coef = theta_old
                       ? model_.evaluate_over_interval(theta_old_c, theta_c, phi_c)
                       : model_.evaluate(theta_c, phi_c);
        }
        catch (DomainError const& error)
        {
            throw DomainError(fmt::format("element {}: {}", e, error.what()));
        }

        for (int a = 0; a < 3; ++a)
        {
            auto const ia = static_cast<Eigen::Index>(nodes[a]);
            for (int b = 0; b < 3; ++b)
            {
                auto const ib = static_cast<Eigen::Index>(nodes[b]);
                double const s = shape.area *
                                 (shape.gradients[a].x * shape.gradients[b].x +
                                  shape.gradients[a].y * shape.gradients[b].y);
                k_entries.emplace_back(ia, ib, coef.k_tt * s);
                k_entries.emplace_back(ia, n + ib, coef.k_tp * s);
                k_entries.emplace_back(n + ia, ib, coef.k_pt * s);
                k_entries.emplace_back(n + ia, n + ib, coef.k_pp * s);

                double const m =
                    lumped_capacity ? (a == b ? shape.area / 3.0 : 0.0)
                                    : shape.area / 12.0 * (a == b ? 2.0 : 1.0);
                if (m != 0.0)
                {
                    c_entries.emplace_back(ia, ib, coef.c_tt * m);
                    c_entries.emplace_back(n + ia, n + ib, coef.c_pp * m);
                }
            }
        }
    }

    // Edge integrals by Simpson's rule, exact for products of linear
    // shape functions.
    auto const boundary = boundary_ ? boundary_(time) : BoundaryState{};
    for (auto const& edge : mesh_.boundary_edges())
    {
        auto const& condition = boundary[static_cast<std::size_t>(edge.tag)];
        if (!condition)
        {
            continue;
        }
        auto const [a, b] = mesh_.edge_nodes(edge);
        double const length = mesh_.edge_length(edge);
        std::array<Eigen::Index, 2> const ends{static_cast<Eigen::Index>(a),
                                               static_cast<Eigen::Index>(b)};
        for (int i = 0; i < 2; ++i)
        {
            for (int j = 0; j < 2; ++j)
            {
                double const m = length * (i == j ? 1.0 / 3.0 : 1.0 / 6.0);
                if (condition->heat_transfer != 0.0)
                {
                    k_entries.emplace_back(ends[i], ends[j],
                                           condition->heat_transfer * m);
                }
                if (condition->vapor_transfer != 0.0)
                {
                    k_entries.emplace_back(n + ends[i], n + ends[j],
                                           condition->vapor_transfer * m);
                }
            }
            double const half = 0.5 * length;
            load[ends[i]] += half * (condition->heat_transfer *
                                         condition->ambient_temperature +
                                     condition->heat_flux);
            load[n + ends[i]] +=
                half * condition->vapor_transfer * condition->ambient_humidity;
            bool const blocked =
                !rain_blocked.empty() &&
                rain_blocked[static_cast<std::size_t>(ends[i])];
            if (!blocked)
            {
                load[n + ends[i]] += half * condition->moisture_flux;
            }
        }
    }

    AssembledSystem system;
    system.conductivity.resize(2 * n, 2 * n);
    system.conductivity.setFromTriplets(k_entries.begin(), k_entries.end());
    system.capacity.resize(2 * n, 2 * n);
    system.capacity.setFromTriplets(c_entries.begin(), c_entries.end());
    system.load = std::move(load);
    return system;
}

void TransportProblem::apply_dirichlet(SparseMatrix& matrix, Vector& rhs,
                                       double time) const
{
    if (dirichlet_.empty())
    {
        return;
    }
    auto const n = static_cast<Eigen::Index>(mesh_.node_count());
    std::vector<bool> fixed(static_cast<std::size_t>(2 * n), false);
    Vector value = Vector::Zero(2 * n);
    for (auto const& d : dirichlet_)
    {
        Eigen::Index const offset = d.field == Field::Temperature ? 0 : n;
        for (auto const node : d.nodes)
        {
            auto const dof = offset + static_cast<Eigen::Index>(node);
            fixed[static_cast<std::size_t>(dof)] = true;
            value[dof] = d.value(mesh_.node(node), time);
        }
    }
    detail::eliminate_prescribed(matrix, rhs, fixed, value);
}

TransportState TransportProblem::initial_state(Vector theta, Vector phi,
                                               double t0,
                                               bool lumped_capacity) const
{
    auto const n = static_cast<Eigen::Index>(mesh_.node_count());
    if (theta.size() != n || phi.size() != n)
    {
        throw InvalidParameters("initial fields do not match the node count");
    }
    auto system = assemble(theta, phi, t0, lumped_capacity);
    Vector r(2 * n);
    r << theta, phi;
    Vector rhs = system.load - system.conductivity * r;
    SparseMatrix capacity = system.capacity;

    // The rate of a prescribed dof is the time derivative of its data.
    if (!dirichlet_.empty())
    {
        double const h = 1e-6 * std::max(1.0, std::abs(t0));
        std::vector<bool> fixed(static_cast<std::size_t>(2 * n), false);
        Vector rate_fixed = Vector::Zero(2 * n);
        for (auto const& d : dirichlet_)
        {
            Eigen::Index const offset = d.field == Field::Temperature ? 0 : n;
            for (auto const node : d.nodes)
            {
                auto const dof = offset + static_cast<Eigen::Index>(node);
                fixed[static_cast<std::size_t>(dof)] = true;
                rate_fixed[dof] = (d.value(mesh_.node(node), t0 + h) -
                                   d.value(mesh_.node(node), t0)) /
                                  h;
            }
        }
        detail::eliminate_prescribed(capacity, rhs, fixed, rate_fixed);
    }

    TransportState state;
    state.time = t0;
    state.rate = solve_sparse(capacity, rhs);
    state.theta = std::move(theta);
    state.phi = std::move(phi);
    return state;
}

TransportState TransportProblem::step(TransportState const& state, double dt,
                                      double gamma,
                                      SolverOptions const& options) const
{
    if (!(dt > 0.0))
    {
        throw InvalidParameters("time step must be positive");
    }
    if (!(gamma >= 0.0 && gamma <= 1.0))
    {
        throw InvalidParameters(
            fmt::format("integration parameter {} outside [0, 1]", gamma));
    }
    auto const n = static_cast<Eigen::Index>(mesh_.node_count());
    double const t_new = state.time + dt;

    Vector r_old(2 * n);
    r_old << state.theta, state.phi;
    Vector const predictor = r_old + dt * (1.0 - gamma) * state.rate;

    std::vector<bool> rain_blocked(static_cast<std::size_t>(n), false);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        rain_blocked[static_cast<std::size_t>(i)] = state.phi[i] >= 1.0;
    }

    auto const build = [&](Vector const& r) {
        Vector const theta = r.head(n);
        Vector const phi = r.tail(n).cwiseMax(0.0).cwiseMin(1.0);
        for (Eigen::Index i = 0; i < n; ++i)
        {
            if (r[n + i] >= 1.0)
            {
                rain_blocked[static_cast<std::size_t>(i)] = true;
            }
        }
        auto system = assemble(theta, phi, t_new, options.lumped_capacity,
                               rain_blocked,
                               options.chord_heat_capacity ? &state.theta
                                                           : nullptr);
        LinearSystem linear;
        linear.matrix = gamma * dt * system.conductivity + system.capacity;
        linear.rhs = gamma * dt * system.load + system.capacity * predictor;
        apply_dirichlet(linear.matrix, linear.rhs, t_new);
        return linear;
    };

    IterationOptions iteration;
    iteration.tolerance = options.tolerance;
    iteration.max_iterations = options.max_iterations;
    iteration.relaxation = options.relaxation;
    iteration.block_size = n;

    IterationResult result;
    try
    {
        result = nonlinear_iterate(build, r_old, iteration);
    }
    catch (SolverError const& error)
    {
        throw StepFailure(fmt::format("transport step to t = {} s failed: {}",
                                      t_new, error.what()),
                          std::numeric_limits<double>::quiet_NaN(), 0);
    }
    catch (DomainError const& error)
    {
        throw StepFailure(fmt::format("transport step to t = {} s left the "
                                      "material-law range: {}",
                                      t_new, error.what()),
                          std::numeric_limits<double>::quiet_NaN(), 0);
    }
    if (!result.converged)
    {
        double const last =
            result.residuals.empty() ? 0.0 : result.residuals.back();
        throw StepFailure(
            fmt::format("transport step to t = {} s did not converge in {} "
                        "iterations (residual {:.3e})",
                        t_new, result.iterations, last),
            last, result.iterations);
    }

    Vector r_new = std::move(result.solution);
    r_new.tail(n) = r_new.tail(n).cwiseMax(0.0).cwiseMin(1.0);

    TransportState next;
    next.time = t_new;
    if (gamma > 0.0)
    {
        next.rate = (r_new - r_old) / (gamma * dt) -
                    (1.0 - gamma) / gamma * state.rate;
    }
    else
    {
        auto system = assemble(r_new.head(n), r_new.tail(n), t_new,
                               options.lumped_capacity, rain_blocked);
        next.rate = solve_sparse(system.capacity,
                                 system.load - system.conductivity * r_new);
    }
    next.theta = r_new.head(n);
    next.phi = r_new.tail(n);
    next.iterations = result.iterations;
    return next;
}

}  // namespace frost::transport
