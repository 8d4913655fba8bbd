#include <doctest.h>

#include "frost/climate.hpp"
#include "frost/driver.hpp"
#include "frost/error.hpp"

using namespace frost;
using namespace frost::climate;

namespace
{
constexpr char const* header = "time_h,theta_ext_C,phi_ext,rain_kg_m2_s,swr_W_m2\n";
}

TEST_CASE("two-row record")
{
    auto const series = load_climate(std::string(header) +
                                     "1,10,0.5,0,100\n"
                                     "2,20,0.7,1e-4,0\n");
    REQUIRE(series.size() == 2);
    CHECK(series.times()[0] == 3600.0);
    CHECK(series.times()[1] == 7200.0);
}

TEST_CASE("sampling interpolates linearly and holds the end values")
{
    auto const series = load_climate(std::string(header) +
                                     "1,10,0.5,0,100\n"
                                     "2,20,0.7,1e-4,0\n");
    auto const knot = series.sample(3600.0);
    CHECK(knot.temperature == 10.0);
    CHECK(knot.humidity == 0.5);
    CHECK(knot.solar == 100.0);

    auto const mid = series.sample(5400.0);
    CHECK(mid.temperature == doctest::Approx(15.0).epsilon(1e-15));
    CHECK(mid.humidity == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(mid.rain == doctest::Approx(5e-5).epsilon(1e-15));
    CHECK(mid.solar == doctest::Approx(50.0).epsilon(1e-15));

    auto const after = series.sample(1e6);
    CHECK(after.temperature == 20.0);
    CHECK(after.rain == 1e-4);
    auto const before = series.sample(0.0);
    CHECK(before.temperature == 10.0);

    // continuity across a knot
    double const eps = 1e-6;
    CHECK(series.sample(3600.0 + eps).temperature ==
          doctest::Approx(knot.temperature).epsilon(1e-8));
}

TEST_CASE("bundled winter record reproduces its knots")
{
    auto const series = read_climate_file(driver::data_directory() / "climate" /
                                          "winter_744h.csv");
    CHECK(series.size() == 745);
    bool below_zero = false;
    bool rain = false;
    for (std::size_t i = 0; i < series.size(); ++i)
    {
        auto const s = series.sample(series.times()[i]);
        CHECK(s.temperature == series.samples()[i].temperature);
        CHECK(s.humidity == series.samples()[i].humidity);
        below_zero = below_zero || s.temperature < 0.0;
        rain = rain || s.rain > 0.0;
    }
    CHECK(below_zero);
    CHECK(rain);
}

TEST_CASE("invalid rows name their line")
{
    try
    {
        load_climate(std::string(header) + "0,1,0.5,0,0\n1,1,1.2,0,0\n");
        FAIL("expected a parse error");
    }
    catch (ParseError const& e)
    {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(load_climate(std::string(header) + "1,1,0.5,0,0\n1,2,0.5,0,0\n"),
                    ParseError);
    CHECK_THROWS_AS(load_climate(std::string(header) + "1,1,0.5,-1,0\n"), ParseError);
    CHECK_THROWS_AS(load_climate(std::string(header)), ParseError);
    CHECK_THROWS_AS(load_climate("time,theta\n1,2\n"), ParseError);
    CHECK_THROWS_AS(load_climate(std::string(header) + "1,abc,0.5,0,0\n"), ParseError);
    CHECK_THROWS_AS(read_climate_file("/nonexistent/climate.csv"), IoError);
}

TEST_CASE("constant series")
{
    auto const series = ClimateSeries::constant({-3.0, 0.9, 0.0, 10.0});
    CHECK(series.sample(-100.0).temperature == -3.0);
    CHECK(series.sample(1e9).solar == 10.0);
    CHECK_THROWS_AS(ClimateSeries({}, {}), InvalidParameters);
}
