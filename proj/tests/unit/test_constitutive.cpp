#include <doctest.h>

#include <cmath>

#include "frost/constitutive.hpp"
#include "frost/error.hpp"

using namespace frost;
using namespace frost::constitutive;

namespace
{
TransportParams table_params()
{
    return TransportParams::defaults();
}
}  // namespace

TEST_CASE("sorption factor from the 80 percent water content")
{
    auto const p = table_params();
    CHECK(p.approximation_factor == doctest::Approx(1.043810).epsilon(1e-6));
    CHECK(std::abs(water_content(0.8, p) - 23.0) < 1e-9);
    CHECK(p.approximation_factor > 1.0);

    double const b = derive_b_phi(100.0, 50.0);
    TransportParams q;
    q.free_water_saturation = 100.0;
    q.water_content_80 = 50.0;
    q.derive();
    CHECK(q.approximation_factor == b);
    CHECK(std::abs(water_content(0.8, q) - 50.0) < 1e-9);
}

TEST_CASE("sorption factor limits")
{
    // w_80 approaching 0.8 w_f sends b_phi to infinity
    CHECK_THROWS_AS(derive_b_phi(160.0, 0.8 * 160.0 * (1.0 - 1e-9)),
                    InvalidParameters);
    CHECK_THROWS_AS(derive_b_phi(160.0, 0.8 * 160.0), InvalidParameters);
    CHECK_THROWS_AS(derive_b_phi(160.0, 150.0), InvalidParameters);
    CHECK_THROWS_AS(derive_b_phi(160.0, 0.0), InvalidParameters);
    CHECK_THROWS_AS(derive_b_phi(160.0, 170.0), InvalidParameters);

    auto p = table_params();
    p.bulk_density = 0.0;
    CHECK_THROWS_AS(p.derive(), InvalidParameters);
}

TEST_CASE("water retention function")
{
    auto const p = table_params();
    CHECK(water_content(0.0, p) == 0.0);
    CHECK(water_content(1.0, p) == doctest::Approx(160.0).epsilon(1e-14));
    CHECK(std::abs(water_content(0.8, p) - 23.0) < 1e-6);
    CHECK_THROWS_AS(water_content(-0.01, p), DomainError);
    CHECK_THROWS_AS(water_content(1.01, p), DomainError);
}

TEST_CASE("moisture capacity is the derivative of the retention function")
{
    auto const p = table_params();
    double const b = p.approximation_factor;
    CHECK(moisture_capacity(0.0, p) ==
          doctest::Approx(160.0 * (b - 1.0) / b).epsilon(1e-14));

    double const h = 1e-6;
    for (int i = 1; i < 100; ++i)
    {
        double const phi = i / 100.0;
        double const fd =
            (water_content(phi + h, p) - water_content(phi - h, p)) / (2 * h);
        CHECK(moisture_capacity(phi, p) == doctest::Approx(fd).epsilon(1e-6));
    }

    double previous = 0.0;
    for (int i = 0; i <= 100; ++i)
    {
        double const c = moisture_capacity(i / 100.0, p);
        CHECK(c > previous);
        previous = c;
    }
}

TEST_CASE("inverse retention function round trip")
{
    auto const p = table_params();
    for (int i = 0; i <= 50; ++i)
    {
        double const phi = i / 50.0;
        double const w = water_content(phi, p);
        CHECK(std::abs(relative_humidity_from_water_content(w, p) - phi) < 1e-10);
    }
    CHECK_THROWS_AS(relative_humidity_from_water_content(161.0, p), DomainError);
}

TEST_CASE("saturation vapour pressure")
{
    CHECK(saturation_pressure(0.0) == 611.0);
    CHECK(std::abs(saturation_pressure(-1e-12) - 611.0) < 1e-9);
    CHECK(saturation_pressure(20.0) ==
          doctest::Approx(611.0 * std::exp(17.08 * 20.0 / 254.18)).epsilon(1e-14));
    CHECK(saturation_pressure(20.0) == doctest::Approx(2339.0).epsilon(2e-3));
    CHECK(saturation_pressure(-10.0) ==
          doctest::Approx(611.0 * std::exp(-224.4 / 262.44)).epsilon(1e-14));
    CHECK(saturation_pressure(-10.0) == doctest::Approx(260.0).epsilon(2e-3));
    CHECK_THROWS_AS(saturation_pressure(-41.0), DomainError);
    CHECK_THROWS_AS(saturation_pressure(61.0), DomainError);

    for (double theta : {-30.0, -5.0, -0.5, 0.5, 10.0, 45.0})
    {
        double const h = 1e-5;
        double const fd =
            (saturation_pressure(theta + h) - saturation_pressure(theta - h)) /
            (2 * h);
        CHECK(saturation_pressure_derivative(theta) ==
              doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("vapour permeability")
{
    auto p = table_params();
    p.vapor_resistance = 1.0;
    CHECK(vapor_permeability(0.0, p) ==
          doctest::Approx(2.306e-5 / (461.5 * 273.15)).epsilon(1e-14));
    CHECK(vapor_permeability(0.0, p) == doctest::Approx(1.829e-10).epsilon(1e-3));
    auto const q = table_params();
    CHECK(vapor_permeability(10.0, q) ==
          doctest::Approx(vapor_permeability(10.0, p) / 9.63).epsilon(1e-14));
}

TEST_CASE("capillary transport coefficient")
{
    auto p = table_params();
    double const ratio = 0.82 / 160.0;
    CHECK(capillary_transport_coefficient(0.0, p) ==
          doctest::Approx(3.8 * ratio * ratio).epsilon(1e-14));

    double const literal = 3.8 * ratio * ratio * std::pow(10.0, 3.0 * 23.0 / 159.0);
    CHECK(capillary_transport_coefficient(0.8, p) ==
          doctest::Approx(literal).epsilon(1e-8));
    // golden value of the liquid conductivity, frozen from the first run
    CHECK(liquid_conductivity(0.8, p) ==
          doctest::Approx(literal * moisture_capacity(0.8, p)).epsilon(1e-8));
    CHECK(liquid_conductivity(0.8, p) == doctest::Approx(3.3368911344e-02).epsilon(1e-9));

    p.capillary_exponent = CapillaryExponent::Kuenzel;
    double const kuenzel = 3.8 * ratio * ratio * std::pow(10.0, 3.0 * (23.0 / 160.0 - 1.0));
    CHECK(capillary_transport_coefficient(0.8, p) ==
          doctest::Approx(kuenzel).epsilon(1e-8));
}

TEST_CASE("thermal conductivity")
{
    auto const p = table_params();
    CHECK(thermal_conductivity(0.0, p) == 0.45);
    CHECK(thermal_conductivity(160.0, p) ==
          doctest::Approx(0.45 * (1.0 + 9.0 * 160.0 / 1670.0)).epsilon(1e-14));
    CHECK(thermal_conductivity(160.0, p) == doctest::Approx(0.8379).epsilon(1e-4));
    CHECK_THROWS_AS(thermal_conductivity(-1.0, p), DomainError);
}

TEST_CASE("evaporation enthalpy")
{
    CHECK(latent_heat_vapor(0.0) == 2.5008e6);
    CHECK(latent_heat_vapor(20.0) == doctest::Approx(2.45e6).epsilon(5e-3));
    CHECK(latent_heat_vapor(20.0) < latent_heat_vapor(0.0));
    CHECK(latent_heat_vapor(40.0) < latent_heat_vapor(20.0));
}

TEST_CASE("effective heat capacity")
{
    auto const p = table_params();
    CHECK(effective_heat_capacity(10.0, 0.0, p, {}) == 1.67e6);
    CHECK(effective_heat_capacity(10.0, 0.8, p, {}) ==
          doctest::Approx(1.67e6 + 23.0 * 4187.0).epsilon(1e-12));

    // frozen state: part of the water is ice and freezing releases heat
    IceContent const ice{10.0, -2.0};
    double const frozen = effective_heat_capacity(-5.0, 0.8, p, ice);
    CHECK(frozen == doctest::Approx(1.67e6 + 13.0 * 4187.0 + 10.0 * 2100.0 +
                                    2.0 * 3.34e5)
                        .epsilon(1e-12));
    CHECK(frozen > effective_heat_capacity(5.0, 0.8, p, {}));
}

TEST_CASE("coefficients are finite and non-negative on the guarded domain")
{
    for (auto variant : {CapillaryExponent::Literal, CapillaryExponent::Kuenzel})
    {
        auto p = table_params();
        p.capillary_exponent = variant;
        for (int i = 0; i <= 20; ++i)
        {
            double const phi = i / 20.0;
            double const dl = liquid_conductivity(phi, p);
            CHECK(std::isfinite(dl));
            CHECK(dl >= 0.0);
            CHECK(thermal_conductivity(water_content(phi, p), p) > 0.0);
        }
        for (int theta = -40; theta <= 60; theta += 5)
        {
            CHECK(saturation_pressure(theta) > 0.0);
            CHECK(vapor_permeability(theta, p) > 0.0);
            CHECK(latent_heat_vapor(theta) > 0.0);
        }
    }
}
