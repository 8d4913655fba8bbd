#include "frost/climate.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "csv.hpp"
#include "frost/error.hpp"

namespace frost::climate
{
ClimateSeries::ClimateSeries(std::vector<double> times,
                             std::vector<ClimateSample> samples)
    : times_(std::move(times)), samples_(std::move(samples))
{
    if (times_.empty() || times_.size() != samples_.size())
    {
        throw InvalidParameters("climate series needs matching, non-empty columns");
    }
    for (std::size_t i = 0; i < times_.size(); ++i)
    {
        auto const& s = samples_[i];
        if (!std::isfinite(times_[i]) || !std::isfinite(s.temperature))
        {
            throw InvalidParameters(fmt::format("climate record {} is not finite", i));
        }
        if (i > 0 && !(times_[i] > times_[i - 1]))
        {
            throw InvalidParameters(
                fmt::format("climate times must increase (record {})", i));
        }
        if (!(s.humidity >= 0.0 && s.humidity <= 1.0))
        {
            throw InvalidParameters(fmt::format(
                "exterior humidity {} outside [0, 1] (record {})", s.humidity, i));
        }
        if (!(s.rain >= 0.0) || !(s.solar >= 0.0))
        {
            throw InvalidParameters(
                fmt::format("negative rain or solar flux (record {})", i));
        }
    }
}

ClimateSeries ClimateSeries::constant(ClimateSample const& sample)
{
    return ClimateSeries({0.0}, {sample});
}

ClimateSample ClimateSeries::sample(double t) const
{
    if (t <= times_.front())
    {
        return samples_.front();
    }
    if (t >= times_.back())
    {
        return samples_.back();
    }
    auto const upper = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t const j = static_cast<std::size_t>(upper - times_.begin()) - 1;
    double const w = (t - times_[j]) / (times_[j + 1] - times_[j]);
    auto const lerp = [w](double a, double b) { return a + w * (b - a); };
    auto const& a = samples_[j];
    auto const& b = samples_[j + 1];
    return {lerp(a.temperature, b.temperature), lerp(a.humidity, b.humidity),
            lerp(a.rain, b.rain), lerp(a.solar, b.solar)};
}

ClimateSeries load_climate(std::string_view text)
{
    auto const rows = detail::parse_csv(
        text, {"time_h", "theta_ext_C", "phi_ext", "rain_kg_m2_s", "swr_W_m2"});
    std::vector<double> times;
    std::vector<ClimateSample> samples;
    for (auto const& row : rows)
    {
        auto const& v = row.values;
        if (!times.empty() && !(v[0] * 3600.0 > times.back()))
        {
            throw ParseError(row.line, "climate times must strictly increase");
        }
        if (!(v[2] >= 0.0 && v[2] <= 1.0))
        {
            throw ParseError(row.line, fmt::format(
                                           "exterior humidity {} outside [0, 1]", v[2]));
        }
        if (!(v[3] >= 0.0) || !(v[4] >= 0.0))
        {
            throw ParseError(row.line, "rain and solar fluxes must be non-negative");
        }
        times.push_back(v[0] * 3600.0);
        samples.push_back({v[1], v[2], v[3], v[4]});
    }
    if (rows.empty())
    {
        throw ParseError(1, "climate file has no records");
    }
    return ClimateSeries(std::move(times), std::move(samples));
}

ClimateSeries read_climate_file(std::filesystem::path const& path)
{
    return load_climate(detail::read_text_file(path));
}

}  // namespace frost::climate
