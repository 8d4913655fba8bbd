#include "frost/ice.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "csv.hpp"
#include "frost/error.hpp"

namespace frost::ice
{
void IceParams::validate() const
{
    if (!(surface_tension > 0.0))
    {
        throw InvalidParameters("liquid/ice surface tension must be positive");
    }
    if (!(melting_entropy > 0.0))
    {
        throw InvalidParameters("melting entropy must be positive");
    }
    if (!(porosity > 0.0 && porosity < 1.0))
    {
        throw InvalidParameters(
            fmt::format("porosity {} outside (0, 1)", porosity));
    }
    if (!std::isfinite(liquid_pressure))
    {
        throw InvalidParameters("liquid pressure must be finite");
    }
}

PoreSizeDistribution::PoreSizeDistribution(std::vector<double> radii,
                                           std::vector<double> psi)
    : radii_(std::move(radii)), psi_(std::move(psi))
{
    if (radii_.size() != psi_.size())
    {
        throw InvalidPsd("radius and porosity columns differ in length");
    }
    if (radii_.size() < 2)
    {
        throw InvalidPsd("pore size distribution needs at least two radii");
    }
    for (std::size_t i = 0; i < radii_.size(); ++i)
    {
        if (!(radii_[i] > 0.0) || !std::isfinite(radii_[i]))
        {
            throw InvalidPsd(fmt::format("radius {} is not positive", i));
        }
        if (!(psi_[i] >= 0.0 && psi_[i] < 1.0))
        {
            throw InvalidPsd(
                fmt::format("cumulative porosity {} outside [0, 1)", psi_[i]));
        }
        if (i > 0 && !(radii_[i] > radii_[i - 1]))
        {
            throw InvalidPsd("radii must be strictly increasing");
        }
        if (i > 0 && psi_[i] > psi_[i - 1])
        {
            throw InvalidPsd("cumulative porosity must be non-increasing");
        }
    }
}

PoreSizeDistribution PoreSizeDistribution::from_csv(std::string_view text)
{
    auto const table = detail::parse_csv(text, {"radius_m", "cum_porosity"});
    std::vector<double> radii;
    std::vector<double> psi;
    for (auto const& row : table)
    {
        radii.push_back(row.values[0]);
        psi.push_back(row.values[1]);
    }
    return PoreSizeDistribution(std::move(radii), std::move(psi));
}

PoreSizeDistribution PoreSizeDistribution::read_file(
    std::filesystem::path const& path)
{
    return from_csv(detail::read_text_file(path));
}

double PoreSizeDistribution::cumulative(double r) const
{
    if (r <= radii_.front())
    {
        return psi_.front();
    }
    if (r >= radii_.back())
    {
        return psi_.back();
    }
    auto const upper = std::upper_bound(radii_.begin(), radii_.end(), r);
    std::size_t const j = static_cast<std::size_t>(upper - radii_.begin()) - 1;
    double const t =
        std::log(r / radii_[j]) / std::log(radii_[j + 1] / radii_[j]);
    return psi_[j] + t * (psi_[j + 1] - psi_[j]);
}

PoreSizeDistribution PoreSizeDistribution::refined(int factor) const
{
    if (factor < 1)
    {
        throw InvalidPsd("refinement factor must be at least one");
    }
    std::vector<double> radii;
    std::vector<double> psi;
    for (std::size_t j = 0; j + 1 < radii_.size(); ++j)
    {
        double const ratio = std::log(radii_[j + 1] / radii_[j]);
        for (int k = 0; k < factor; ++k)
        {
            double const t = static_cast<double>(k) / factor;
            radii.push_back(radii_[j] * std::exp(t * ratio));
            psi.push_back(psi_[j] + t * (psi_[j + 1] - psi_[j]));
        }
    }
    radii.push_back(radii_.back());
    psi.push_back(psi_.back());
    return PoreSizeDistribution(std::move(radii), std::move(psi));
}

void PoreSizeDistribution::check_porosity(double porosity,
                                          double tolerance) const
{
    if (std::abs(psi_.front() - porosity) > tolerance)
    {
        throw InvalidPsd(fmt::format(
            "cumulative porosity at the smallest radius is {} but the total "
            "porosity is {}",
            psi_.front(), porosity));
    }
}

namespace
{
void check_frozen(double theta)
{
    if (!(theta < 0.0))
    {
        throw DomainError(fmt::format(
            "ice radii are defined below 0 degC only (theta = {})", theta));
    }
}
}  // namespace

double adsorbed_layer(double theta)
{
    check_frozen(theta);
    return 1.97e-9 * std::cbrt(1.0 / std::abs(theta));
}

double interface_radius(double theta, IceParams const& p)
{
    check_frozen(theta);
    return 2.0 * p.surface_tension / (p.melting_entropy * std::abs(theta));
}

double critical_radius(double theta, IceParams const& p)
{
    if (theta >= 0.0)
    {
        return std::numeric_limits<double>::infinity();
    }
    return interface_radius(theta, p) + adsorbed_layer(theta);
}

double wall_pressure(double r, double theta, IceParams const& p)
{
    double const r_ir = interface_radius(theta, p);
    double const r_ar = adsorbed_layer(theta);
    // r_cr - r_ar equals r_ir, so compare through the same difference
    if (!(r - r_ar >= r_ir * (1.0 - 1e-12)))
    {
        throw DomainError(fmt::format(
            "pore radius {} m is below the critical radius {} m", r,
            r_ir + r_ar));
    }
    return p.surface_tension * (2.0 / r_ir - 1.0 / (r - r_ar));
}

double average_pore_pressure(double theta, PoreSizeDistribution const& psd,
                             IceParams const& p)
{
    if (theta >= 0.0)
    {
        return p.liquid_pressure;
    }
    psd.check_porosity(p.porosity);
    double const r_cr = critical_radius(theta, p);
    auto const radii = psd.radii();
    auto const psi = psd.psi();

    double integral = 0.0;
    for (std::size_t j = 0; j + 1 < radii.size(); ++j)
    {
        double const r_high = radii[j + 1];
        if (r_high <= r_cr)
        {
            continue;
        }
        double r_low = radii[j];
        double psi_low = psi[j];
        if (r_low < r_cr)
        {
            r_low = r_cr;
            psi_low = psd.cumulative(r_cr);
        }
        double const dpsi = psi_low - psi[j + 1];
        if (dpsi <= 0.0)
        {
            continue;
        }
        integral += wall_pressure(std::sqrt(r_low * r_high), theta, p) * dpsi;
    }
    // pores larger than the last tabulated radius
    if (psi.back() > 0.0)
    {
        integral +=
            wall_pressure(std::max(radii.back(), r_cr), theta, p) * psi.back();
    }
    return p.liquid_pressure + integral / p.porosity;
}

namespace
{
double freezable_water(double theta, double water, PoreSizeDistribution const& psd,
                       IceParams const& p)
{
    if (theta >= 0.0)
    {
        return 0.0;
    }
    double const fraction = psd.cumulative(critical_radius(theta, p)) / p.porosity;
    return water * std::min(fraction, 1.0);
}
}  // namespace

constitutive::IceContent ice_content(
    double theta, double phi, PoreSizeDistribution const& psd,
    IceParams const& p, constitutive::TransportParams const& transport,
    IceContentModel model)
{
    if (model == IceContentModel::None)
    {
        return {};
    }
    double const w = constitutive::water_content(phi, transport);
    constexpr double step = 0.01;
    double const content = freezable_water(theta, w, psd, p);
    double const derivative = (freezable_water(theta + step, w, psd, p) -
                               freezable_water(theta - step, w, psd, p)) /
                              (2.0 * step);
    return {content, std::min(derivative, 0.0)};
}

}  // namespace frost::ice
