#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

namespace frost::climate
{
struct ClimateSample
{
    double temperature = 0.0;  // theta_ext [degC]
    double humidity = 0.0;     // phi_ext [-]
    double rain = 0.0;         // driving-rain flux [kg m^-2 s^-1]
    double solar = 0.0;        // incident short-wave flux [W m^-2]
};

/// Exterior climate record; times are stored in seconds.
class ClimateSeries
{
public:
    /// Throws InvalidParameters if the series is empty, times do not
    /// strictly increase, humidity leaves [0, 1] or a flux is negative.
    ClimateSeries(std::vector<double> times, std::vector<ClimateSample> samples);

    /// Single-knot series: the same values at all times.
    static ClimateSeries constant(ClimateSample const& sample);

    std::vector<double> const& times() const { return times_; }
    std::vector<ClimateSample> const& samples() const { return samples_; }
    std::size_t size() const { return times_.size(); }

    /// Piecewise-linear inside the record, first/last values held outside.
    ClimateSample sample(double t) const;

private:
    std::vector<double> times_;
    std::vector<ClimateSample> samples_;
};

/// CSV with header `time_h,theta_ext_C,phi_ext,rain_kg_m2_s,swr_W_m2`;
/// errors name the offending line.
ClimateSeries load_climate(std::string_view text);
ClimateSeries read_climate_file(std::filesystem::path const& path);

}  // namespace frost::climate
