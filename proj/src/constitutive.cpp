#include "frost/constitutive.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "frost/error.hpp"

namespace frost::constitutive
{
namespace
{
void check_humidity(double phi)
{
    if (!(phi >= 0.0 && phi <= 1.0))
    {
        throw DomainError(
            fmt::format("relative humidity {} outside [0, 1]", phi));
    }
}

void check_absolute_temperature(double theta)
{
    if (!(theta > -constants::zero_celsius))
    {
        throw DomainError(
            fmt::format("temperature {} degC below absolute zero", theta));
    }
}
}  // namespace

double derive_b_phi(double free_water_saturation, double water_content_80)
{
    double const wf = free_water_saturation;
    double const w80 = water_content_80;
    if (!(w80 > 0.0 && w80 < wf))
    {
        throw InvalidParameters(
            fmt::format("need 0 < w_80 < w_f (w_80={}, w_f={})", w80, wf));
    }
    double const denominator = 0.8 * wf - w80;
    if (!(denominator > 0.0))
    {
        throw InvalidParameters(fmt::format(
            "w_80={} >= 0.8 w_f gives no sorption factor above one", w80));
    }
    double const b = 0.8 * (wf - w80) / denominator;
    if (!(b > 1.0) || b > 1e6)
    {
        throw InvalidParameters(
            fmt::format("sorption approximation factor {} outside (1, 1e6]", b));
    }
    return b;
}

void TransportParams::derive()
{
    auto const positive = [](double v, char const* name) {
        if (!(v > 0.0) || !std::isfinite(v))
        {
            throw InvalidParameters(std::string(name) + " must be positive");
        }
    };
    positive(free_water_saturation, "w_f");
    positive(water_content_80, "w_80");
    positive(dry_thermal_conductivity, "lambda_0");
    positive(bulk_density, "rho_s");
    positive(vapor_resistance, "mu");
    positive(water_absorption, "a");
    positive(solid_heat_capacity, "c_s");
    positive(liquid_heat_capacity, "c_l");
    positive(ice_heat_capacity, "c_i");
    positive(ice_melting_enthalpy, "h_i");
    if (!(thermal_conductivity_supplement >= 0.0))
    {
        throw InvalidParameters("b_tcs must be non-negative");
    }
    approximation_factor =
        derive_b_phi(free_water_saturation, water_content_80);
}

TransportParams TransportParams::defaults()
{
    TransportParams p;
    p.derive();
    return p;
}

double water_content(double phi, TransportParams const& p)
{
    check_humidity(phi);
    double const b = p.approximation_factor;
    return p.free_water_saturation * (b - 1.0) * phi / (b - phi);
}

double moisture_capacity(double phi, TransportParams const& p)
{
    check_humidity(phi);
    double const b = p.approximation_factor;
    return p.free_water_saturation * (b - 1.0) * b / ((b - phi) * (b - phi));
}

double relative_humidity_from_water_content(double w, TransportParams const& p)
{
    if (!(w >= 0.0 && w <= p.free_water_saturation))
    {
        throw DomainError(fmt::format("water content {} outside [0, w_f]", w));
    }
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i)
    {
        double const mid = 0.5 * (lo + hi);
        (water_content(mid, p) < w ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

namespace
{
struct MagnusCoefficients
{
    double a;
    double theta0;
};

MagnusCoefficients magnus(double theta)
{
    if (!(theta >= -40.0 && theta <= 60.0))
    {
        throw DomainError(fmt::format(
            "temperature {} degC outside the saturation-pressure range "
            "[-40, 60]",
            theta));
    }
    return theta < 0.0 ? MagnusCoefficients{22.44, 272.44}
                       : MagnusCoefficients{17.08, 234.18};
}
}  // namespace

double saturation_pressure(double theta)
{
    auto const [a, theta0] = magnus(theta);
    return 611.0 * std::exp(a * theta / (theta0 + theta));
}

double saturation_pressure_derivative(double theta)
{
    auto const [a, theta0] = magnus(theta);
    double const s = theta0 + theta;
    return 611.0 * std::exp(a * theta / s) * a * theta0 / (s * s);
}

double vapor_permeability(double theta, TransportParams const& p)
{
    check_absolute_temperature(theta);
    double const T = theta + constants::zero_celsius;
    // total pressure equals atmospheric pressure, so p_a / p = 1
    double const delta = 2.306e-5 / (constants::vapor_gas_constant * T) *
                         std::pow(T / constants::zero_celsius, 1.81);
    return delta / p.vapor_resistance;
}

double capillary_transport_coefficient(double phi, TransportParams const& p)
{
    double const w = water_content(phi, p);
    double const wf = p.free_water_saturation;
    double const exponent = p.capillary_exponent == CapillaryExponent::Literal
                                ? 3.0 * w / (wf - 1.0)
                                : 3.0 * (w / wf - 1.0);
    double const ratio = p.water_absorption / wf;
    return 3.8 * ratio * ratio * std::pow(10.0, exponent);
}

double liquid_conductivity(double phi, TransportParams const& p)
{
    return capillary_transport_coefficient(phi, p) * moisture_capacity(phi, p);
}

double thermal_conductivity(double w, TransportParams const& p)
{
    if (!(w >= 0.0))
    {
        throw DomainError(fmt::format("negative water content {}", w));
    }
    return p.dry_thermal_conductivity *
           (1.0 + p.thermal_conductivity_supplement * w / p.bulk_density);
}

double latent_heat_vapor(double theta)
{
    check_absolute_temperature(theta);
    double const T = theta + constants::zero_celsius;
    return 2.5008e6 *
           std::pow(constants::zero_celsius / T, 0.167 + 3.67e-4 * T);
}

double effective_heat_capacity(double theta, double phi,
                               TransportParams const& p, IceContent const& ice)
{
    check_absolute_temperature(theta);
    double const w = water_content(phi, p);
    return p.bulk_density * p.solid_heat_capacity +
           (w - ice.content) * p.liquid_heat_capacity +
           ice.content * p.ice_heat_capacity -
           p.ice_melting_enthalpy * ice.derivative;
}

}  // namespace frost::constitutive
