#pragma once

namespace frost::constitutive
{
namespace constants
{
inline constexpr double atmospheric_pressure = 101325.0;  // Pa
inline constexpr double vapor_gas_constant = 461.5;       // J kg^-1 K^-1
inline constexpr double gas_constant = 8314.41;           // J mol^-1 K^-1 as printed
inline constexpr double molar_mass_water = 18.01528;      // only used via R_v
inline constexpr double zero_celsius = 273.15;            // K
}  // namespace constants

/// Exponent of the capillary transport coefficient D_l = 3.8 (a/w_f)^2 10^x.
enum class CapillaryExponent
{
    Literal,  ///< x = 3 w / (w_f - 1)
    Kuenzel   ///< x = 3 (w / w_f - 1)
};

/// Hygrothermal properties of the mortar. Call derive() after changing
/// w_f or w_80 so the sorption approximation factor follows.
struct TransportParams
{
    double free_water_saturation = 160.0;      // w_f  [kg m^-3]
    double water_content_80 = 23.0;            // w_80 [kg m^-3]
    double dry_thermal_conductivity = 0.45;    // lambda_0 [W m^-1 K^-1]
    double thermal_conductivity_supplement = 9.0;  // b_tcs [-]
    double bulk_density = 1670.0;              // rho_s [kg m^-3]
    double vapor_resistance = 9.63;            // mu [-]
    double water_absorption = 0.82;            // a [kg m^-2 s^-0.5]
    double solid_heat_capacity = 1000.0;       // c_s [J kg^-1 K^-1]
    double liquid_heat_capacity = 4187.0;      // c_l
    double ice_heat_capacity = 2100.0;         // c_i
    double ice_melting_enthalpy = 3.34e5;      // h_i [J kg^-1]
    CapillaryExponent capillary_exponent = CapillaryExponent::Literal;

    double approximation_factor = 0.0;  // b_phi, set by derive()

    /// Validates the record and sets approximation_factor; throws
    /// InvalidParameters.
    void derive();

    static TransportParams defaults();
};

/// Heat content derivative contributions of the ice phase.
struct IceContent
{
    double content = 0.0;     // w_i [kg m^-3]
    double derivative = 0.0;  // dw_i / dtheta [kg m^-3 K^-1], <= 0
};

/// b_phi such that the sorption isotherm passes through (0.8, w_80).
double derive_b_phi(double free_water_saturation, double water_content_80);

double water_content(double phi, TransportParams const& p);
double moisture_capacity(double phi, TransportParams const& p);

/// Inverse of water_content by bisection; w in [0, w_f].
double relative_humidity_from_water_content(double w, TransportParams const& p);

/// Saturation vapour pressure [Pa]; theta in [-40, 60] degC.
double saturation_pressure(double theta);
double saturation_pressure_derivative(double theta);

double vapor_permeability(double theta, TransportParams const& p);

double capillary_transport_coefficient(double phi, TransportParams const& p);
double liquid_conductivity(double phi, TransportParams const& p);

double thermal_conductivity(double w, TransportParams const& p);

/// Evaporation enthalpy [J kg^-1] with the base taken in kelvin.
double latent_heat_vapor(double theta);

/// dH/dtheta of the moist, partially frozen material [J m^-3 K^-1].
double effective_heat_capacity(double theta, double phi,
                               TransportParams const& p, IceContent const& ice);

}  // namespace frost::constitutive
