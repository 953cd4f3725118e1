#include <doctest.h>

#include <stdexcept>

#include "gridpeak/load_model.hpp"
#include "gridpeak/rng.hpp"

using gridpeak::ZipCoefficients;
using gridpeak::ZipLoad;

namespace {

ZipLoad make_load(double cz, double ci, double cp, double p0 = 1000.0, double q0 = 300.0) {
    ZipLoad load;
    load.bus = 1;
    load.baseline_p_kw.fill(p0);
    load.baseline_q_kvar.fill(q0);
    load.zip = {cz, ci, cp, cz, ci, cp};
    return load;
}

} // namespace

TEST_CASE("demand at reference voltage reproduces the baseline") {
    const ZipLoad load = make_load(0.3, 0.45, 0.25);
    CHECK(gridpeak::zip_active(load, 7, 1.0) == doctest::Approx(1000.0).epsilon(1e-12));
    CHECK(gridpeak::zip_reactive(load, 7, 1.0) == doctest::Approx(300.0).epsilon(1e-12));
}

TEST_CASE("pure impedance load scales with the voltage squared") {
    const ZipLoad load = make_load(1.0, 0.0, 0.0);
    CHECK(gridpeak::zip_active(load, 0, 0.95) == doctest::Approx(902.5).epsilon(1e-12));
    CHECK(gridpeak::zip_reactive(load, 0, 0.95) == doctest::Approx(270.75).epsilon(1e-12));
}

TEST_CASE("mixed polynomial matches a direct evaluation") {
    for (int k = 0; k < 200; ++k) {
        const double cz = 2.0 * gridpeak::uniform01(99, k, 0) - 0.5;
        const double ci = 1.5 * gridpeak::uniform01(99, k, 1) - 0.5;
        const double cp = 1.0 - cz - ci;
        if (cp < -2.0 || cp > 2.0) continue;
        const double v = 0.8 + 0.4 * gridpeak::uniform01(99, k, 2);
        const ZipLoad load = make_load(cz, ci, cp);
        const double expect = 1000.0 * (cz * v * v + ci * v + cp);
        CHECK(gridpeak::zip_active(load, 3, v) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("reactive demand is driven by the reactive baseline, not the active one") {
    ZipLoad load = make_load(1.0, 0.0, 0.0, 1000.0, 250.0);
    const double q = gridpeak::zip_reactive(load, 12, 0.9);
    CHECK(q == doctest::Approx(250.0 * 0.81).epsilon(1e-12));
    CHECK(q != doctest::Approx(1000.0 * 0.81).epsilon(1e-6));
}

TEST_CASE("non-reference metering voltage rescales the polynomial argument") {
    ZipLoad load = make_load(1.0, 0.0, 0.0);
    load.ref_voltage_pu = 0.95;
    CHECK(gridpeak::zip_active(load, 0, 0.95) == doctest::Approx(1000.0).epsilon(1e-12));
}

TEST_CASE("coefficient triples must sum to one") {
    ZipCoefficients bad{0.3, 0.3, 0.5, 0.2, 0.3, 0.5};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    ZipCoefficients good{0.3, 0.3, 0.4, 0.2, 0.3, 0.5};
    CHECK_NOTHROW(good.validate());
    // defect just past the tolerance
    ZipCoefficients off{0.3, 0.3, 0.4 + 2e-9, 0.2, 0.3, 0.5};
    CHECK_THROWS_AS(off.validate(), std::invalid_argument);
}

TEST_CASE("coefficients outside [-2, 2] are rejected even when the sum is right") {
    ZipCoefficients wild{2.5, -2.0, 0.5, 0.0, 0.0, 1.0};
    CHECK_THROWS_AS(wild.validate(), std::invalid_argument);
    // negative members are fine inside the band
    ZipCoefficients negative{1.5, -1.2, 0.7, 0.0, 0.0, 1.0};
    CHECK_NOTHROW(negative.validate());
}

TEST_CASE("non-physical voltage is a domain error") {
    const ZipLoad load = make_load(0.3, 0.3, 0.4);
    CHECK_THROWS_AS(gridpeak::zip_active(load, 0, 0.0), std::domain_error);
    CHECK_THROWS_AS(gridpeak::zip_active(load, 0, -0.5), std::domain_error);
    CHECK_THROWS_AS(gridpeak::zip_reactive(load, 0, 0.0), std::domain_error);
}

TEST_CASE("curtailment fraction scales both powers and is range checked") {
    const ZipLoad load = make_load(0.2, 0.3, 0.5);
    const auto [p, q] = gridpeak::effective_injection(load, 5, 1.0, 0.25);
    CHECK(p == doctest::Approx(750.0).epsilon(1e-12));
    CHECK(q == doctest::Approx(225.0).epsilon(1e-12));
    CHECK_THROWS_AS(gridpeak::effective_injection(load, 5, 1.0, -0.01), std::domain_error);
    CHECK_THROWS_AS(gridpeak::effective_injection(load, 5, 1.0, 1.01), std::domain_error);
    const auto [pz, qz] = gridpeak::effective_injection(load, 5, 1.0, 1.0);
    CHECK(pz == doctest::Approx(0.0));
    CHECK(qz == doctest::Approx(0.0));
}

TEST_CASE("hourly profile is indexed per hour") {
    ZipLoad load = make_load(0.0, 0.0, 1.0);
    for (int h = 0; h < 24; ++h) load.baseline_p_kw[static_cast<std::size_t>(h)] = 100.0 + h;
    CHECK(gridpeak::zip_active(load, 0, 1.0) == doctest::Approx(100.0));
    CHECK(gridpeak::zip_active(load, 23, 1.0) == doctest::Approx(123.0));
}
