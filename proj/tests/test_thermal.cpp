#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "gridpeak/grid.hpp"
#include "gridpeak/io.hpp"
#include "gridpeak/thermal.hpp"
#include "oracle/oracles.hpp"

using gridpeak::ThermalComponentState;
using gridpeak::ThermalLadderSpec;
using gridpeak::WeatherSample;

namespace {

const std::string kData = GRIDPEAK_DATA_DIR;

ThermalLadderSpec transformer_spec() {
    ThermalLadderSpec spec;
    spec.model = gridpeak::ThermalModel::ladder;
    spec.loops = {{2.0, 0.0016}, {0.5, 0.0006}};
    spec.hot_spot_limit_c = 110.0;
    spec.dielectric_rise_k = 5.0;
    spec.hotspot_rise_k_per_w = 0.0002;
    spec.conductor = {0.43, 0.004, 25.0};
    return spec;
}

ThermalLadderSpec overhead_spec() {
    ThermalLadderSpec spec;
    spec.model = gridpeak::ThermalModel::heat_balance;
    spec.loops = {{0.25, 1.0}};
    spec.hot_spot_limit_c = 80.0;
    spec.conductor = {8.9e-4, 0.004, 25.0};
    spec.cooling = {0.9, 0.9, 0.8, 0.8, 0.0125};
    return spec;
}

ThermalComponentState zero_state(const ThermalLadderSpec& spec, const WeatherSample& wx) {
    ThermalComponentState state;
    state.loop_rises_k.assign(spec.loops.size(), 0.0);
    state.hot_spot_c = wx.ambient_c + spec.dielectric_rise_k;
    return state;
}

} // namespace

TEST_CASE("one step of one time constant covers 63.2 percent of the rise") {
    ThermalLadderSpec spec = transformer_spec();
    spec.loops = {{2.0, 0.0016}}; // single loop isolates the exponential
    spec.hotspot_rise_k_per_w = 0.0;
    const WeatherSample wx{25.0, 0.61, 0.0};
    const ThermalComponentState start = zero_state(spec, wx);

    const auto after = gridpeak::ladder_step(spec, start, 200.0, wx, 2.0);
    const double watts = gridpeak::conductor_loss_w(spec, 200.0, start.hot_spot_c);
    const double steady = 0.0016 * watts;
    const double fraction = after.loop_rises_k[0] / steady;
    CHECK(fraction > 0.627);
    CHECK(fraction < 0.637);

    // forward-Euler cross-check of the same step at one-second resolution
    const double euler = oracles::euler_loop_rise(2.0, 0.0016, watts, 1.0, 2.0);
    CHECK(after.loop_rises_k[0] == doctest::Approx(euler).epsilon(0.005));
}

TEST_CASE("equilibrium is a fixed point of the step function") {
    const ThermalLadderSpec spec = transformer_spec();
    const WeatherSample wx{30.0, 1.0, 200.0};
    const auto eq = gridpeak::equilibrium_state(spec, 180.0, wx);
    const auto stepped = gridpeak::ladder_step(spec, eq, 180.0, wx, 0.5);
    CHECK(stepped.hot_spot_c == doctest::Approx(eq.hot_spot_c).epsilon(1e-9));
    for (std::size_t k = 0; k < eq.loop_rises_k.size(); ++k)
        CHECK(stepped.loop_rises_k[k] == doctest::Approx(eq.loop_rises_k[k]).epsilon(1e-9));
}

TEST_CASE("a long hold settles onto the equilibrium") {
    const ThermalLadderSpec spec = overhead_spec();
    const WeatherSample wx{35.0, 0.61, 800.0};
    const auto eq = gridpeak::equilibrium_state(spec, 120.0, wx);
    auto state = zero_state(spec, wx);
    state = gridpeak::simulate_hold(spec, state, 120.0, wx, 24.0, 10.0 / 3600.0);
    CHECK(state.hot_spot_c == doctest::Approx(eq.hot_spot_c).epsilon(1e-6));
}

TEST_CASE("steady ampacity puts the equilibrium hot spot at the limit") {
    for (const auto* spec_name : {"transformer", "overhead"}) {
        const ThermalLadderSpec spec =
            std::string(spec_name) == "transformer" ? transformer_spec() : overhead_spec();
        const WeatherSample wx{35.0, 1.5, 600.0};
        const double amps = gridpeak::steady_ampacity(spec, wx);
        REQUIRE(amps > 0.0);
        const auto eq = gridpeak::equilibrium_state(spec, amps, wx);
        CHECK(eq.hot_spot_c <= spec.hot_spot_limit_c + 1e-6);
        CHECK(eq.hot_spot_c > spec.hot_spot_limit_c - 0.5); // 0.1 A bisection slack
    }
}

TEST_CASE("ambient at or above the limit yields zero ampacity") {
    const ThermalLadderSpec spec = overhead_spec();
    CHECK(gridpeak::steady_ampacity(spec, {80.0, 2.0, 0.0}) == 0.0);
    CHECK(gridpeak::steady_ampacity(spec, {95.0, 2.0, 0.0}) == 0.0);
}

TEST_CASE("ampacity falls with ambient and rises with wind") {
    const ThermalLadderSpec spec = overhead_spec();
    double last = 1e9;
    for (const double amb : {10.0, 25.0, 40.0, 55.0}) {
        const double amps = gridpeak::steady_ampacity(spec, {amb, 1.0, 500.0});
        CHECK(amps < last);
        last = amps;
    }
    last = 0.0;
    for (const double wind : {0.0, 0.61, 2.0, 5.0}) {
        const double amps = gridpeak::steady_ampacity(spec, {30.0, wind, 500.0});
        CHECK(amps > last);
        last = amps;
    }
}

TEST_CASE("a cold component carries more than its steady ampacity for an hour") {
    const ThermalLadderSpec spec = transformer_spec();
    const WeatherSample wx{28.0, 0.61, 0.0};
    const double steady = gridpeak::steady_ampacity(spec, wx);
    const auto cold = gridpeak::equilibrium_state(spec, 0.3 * steady, wx);
    const double dynamic = gridpeak::dynamic_rating(spec, cold, wx);
    CHECK(dynamic > steady * 1.02);

    // holding the dynamic rating for the hour must not cross the limit
    const auto dense = oracles::dense_hold(spec, cold, dynamic, wx, 1.0);
    CHECK(dense.max_hotspot_c <= spec.hot_spot_limit_c + 0.5);
}

TEST_CASE("an overheated component rates zero until it cools") {
    const ThermalLadderSpec spec = transformer_spec();
    const WeatherSample wx{30.0, 0.61, 0.0};
    auto hot = gridpeak::equilibrium_state(spec, gridpeak::steady_ampacity(spec, wx), wx);
    for (double& rise : hot.loop_rises_k) rise *= 1.4;
    hot.hot_spot_c = spec.hot_spot_limit_c + 15.0;
    CHECK(gridpeak::dynamic_rating(spec, hot, wx) == 0.0);
}

TEST_CASE("certification weather takes the worse of the two adjacent hours") {
    gridpeak::WeatherSeries series(24);
    for (int h = 0; h < 24; ++h) series[static_cast<std::size_t>(h)] = {20.0 + h, 2.0, 100.0};
    const auto rising = gridpeak::certification_sample(series, 5);
    CHECK(rising.ambient_c == doctest::Approx(26.0)); // next hour is warmer
    CHECK(rising.wind_mps == doctest::Approx(2.0));

    for (int h = 0; h < 24; ++h) series[static_cast<std::size_t>(h)].ambient_c = 44.0 - h;
    const auto falling = gridpeak::certification_sample(series, 5);
    CHECK(falling.ambient_c == doctest::Approx(39.0)); // this hour is warmer

    const auto last = gridpeak::certification_sample(series, 23);
    CHECK(last.ambient_c == doctest::Approx(21.0)); // no successor to consider
    CHECK_THROWS_AS((void)gridpeak::certification_sample(series, 24), gridpeak::InputError);
}

TEST_CASE("static schedule replicates the nameplate, dynamic responds to weather") {
    const auto net = gridpeak::load_network(kData + "/feeder20.json");
    const auto weather = gridpeak::load_weather_csv(kData + "/weather_cool_windy.csv");
    std::vector<ThermalComponentState> init;
    init.reserve(net.branches.size());
    const std::vector<double> idle(net.branches.size(), 0.0);
    init = gridpeak::equilibrium_states(net, idle, weather[0]);

    const auto fixed = gridpeak::rating_schedule(net, weather,
                                                 gridpeak::RatingMode::static_rating, init);
    for (std::size_t b = 0; b < net.branches.size(); ++b)
        for (int h = 0; h < 24; ++h)
            CHECK(fixed.ampacity_a(static_cast<Eigen::Index>(b), h) ==
                  doctest::Approx(net.branches[b].static_rating_a));

    const auto dyn = gridpeak::rating_schedule(net, weather,
                                               gridpeak::RatingMode::dynamic_rating, init);
    for (std::size_t b = 0; b < net.branches.size(); ++b)
        for (int h = 10; h <= 21; ++h)
            CHECK(dyn.ampacity_a(static_cast<Eigen::Index>(b), h) >
                  net.branches[b].static_rating_a);
}

TEST_CASE("hot still weather derates below the nameplate") {
    const auto net = gridpeak::load_network(kData + "/feeder20.json");
    const auto weather = gridpeak::load_weather_csv(kData + "/weather_hot_still.csv");
    // hour 14 is the 42 C peak; steady ampacity sits under the static rating
    for (const auto& br : net.branches) {
        const double amps = gridpeak::steady_ampacity(br.thermal, weather[14]);
        CHECK(amps < br.static_rating_a);
    }
}

TEST_CASE("spec validation rejects degenerate ladders") {
    ThermalLadderSpec spec = transformer_spec();
    spec.loops.clear();
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = transformer_spec();
    spec.loops[0].tau_h = 0.0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = transformer_spec();
    spec.hot_spot_limit_c = -10.0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("electrical resistance never goes negative") {
    const ThermalLadderSpec spec = transformer_spec();
    CHECK(gridpeak::conductor_loss_w(spec, 100.0, -400.0) >= 0.0);
}
