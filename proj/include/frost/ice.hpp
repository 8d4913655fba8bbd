#pragma once

#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "frost/constitutive.hpp"

namespace frost::ice
{
struct IceParams
{
    double surface_tension = 0.0409;  // gamma_li [N m^-1]
    double melting_entropy = 1.2e6;   // Delta s_m [Pa K^-1]
    double porosity = 0.35;           // n [-]
    double liquid_pressure = 0.0;     // p_l [Pa], gauge

    /// Throws InvalidParameters.
    void validate() const;
};

/// How the ice content entering the heat capacity is modelled.
enum class IceContentModel
{
    FreezableFraction,  ///< w_i = w(phi) psi(r_cr) / n
    None                ///< w_i = 0, no latent heat of freezing
};

/// Cumulative porosity psi(r): volume fraction of pores with radius
/// greater than r. Interpolated log-linearly in r between table points.
class PoreSizeDistribution
{
public:
    /// Throws InvalidPsd unless radii are positive and strictly increasing,
    /// psi is non-increasing and non-negative, and sizes agree.
    PoreSizeDistribution(std::vector<double> radii, std::vector<double> psi);

    /// Parses CSV with header `radius_m,cum_porosity`.
    static PoreSizeDistribution from_csv(std::string_view text);
    static PoreSizeDistribution read_file(std::filesystem::path const& path);

    std::span<double const> radii() const { return radii_; }
    std::span<double const> psi() const { return psi_; }

    /// psi at the smallest tabulated radius, i.e. the total porosity.
    double total_porosity() const { return psi_.front(); }

    double cumulative(double r) const;

    /// Each bin split into `factor` log-uniform sub-bins; psi interpolated.
    PoreSizeDistribution refined(int factor) const;

    /// Throws InvalidPsd if psi at the first radius differs from n.
    void check_porosity(double porosity, double tolerance = 1e-6) const;

private:
    std::vector<double> radii_;
    std::vector<double> psi_;
};

/// Adsorbed unfreezable water layer [m]; theta < 0.
double adsorbed_layer(double theta);

/// Curvature radius of the liquid/ice interface [m]; theta < 0.
double interface_radius(double theta, IceParams const& p);

/// Smallest pore radius that can host ice [m]; +inf for theta >= 0.
double critical_radius(double theta, IceParams const& p);

/// Local crystallisation pressure on the walls of a frozen pore [Pa].
/// Requires theta < 0 and r >= critical_radius(theta).
double wall_pressure(double r, double theta, IceParams const& p);

/// Pore pressure averaged over the frozen part of the pore system [Pa];
/// equals p_l for theta >= 0.
double average_pore_pressure(double theta, PoreSizeDistribution const& psd,
                             IceParams const& p);

/// Ice content and its temperature derivative (centred difference).
constitutive::IceContent ice_content(
    double theta, double phi, PoreSizeDistribution const& psd,
    IceParams const& p, constitutive::TransportParams const& transport,
    IceContentModel model = IceContentModel::FreezableFraction);

}  // namespace frost::ice
