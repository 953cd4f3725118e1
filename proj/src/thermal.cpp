#include "gridpeak/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gridpeak/errors.hpp"
#include "gridpeak/grid.hpp"

namespace gridpeak {

namespace {

constexpr double kStefanBoltzmann = 5.670374419e-8; // W m^-2 K^-4
constexpr double kKelvin = 273.15;
constexpr double kRatingSubStepH = 10.0 / 3600.0;
constexpr double kTempSlack = 1e-7; // absorbs rounding in limit comparisons

double resistance_ohm(const ConductorResistance& c, double temp_c) {
    return c.r0 * std::max(0.0, 1.0 + c.alpha_per_k * (temp_c - c.theta_ref_c));
}

double solar_gain_w(const ThermalLadderSpec& spec, const WeatherSample& w) {
    if (spec.model != ThermalModel::heat_balance) return 0.0;
    return spec.cooling.absorptivity * w.solar_wm2 * spec.cooling.diameter_m;
}

/// Convective plus radiative cooling at conductor temperature T, W per unit
/// length. Both terms vanish at T == ambient.
double cooling_w(const CoolingParams& c, const WeatherSample& w, double temp_c) {
    const double h = c.conv_a + c.conv_b * std::sqrt(std::max(0.0, w.wind_mps));
    const double tk = temp_c + kKelvin;
    const double ak = w.ambient_c + kKelvin;
    const double conv = h * (temp_c - w.ambient_c);
    const double rad = c.emissivity * kStefanBoltzmann * c.diameter_m *
                       (tk * tk * tk * tk - ak * ak * ak * ak);
    return conv + rad;
}

/// Largest I with predicate(I) true; predicate must be monotone (true below
/// some threshold). Bisection to 0.1 A within at most 20 iterations after
/// bracketing.
template <class Feasible>
double bisect_current(Feasible&& feasible) {
    if (!feasible(0.0)) return 0.0;
    double lo = 0.0;
    double hi = 10.0;
    for (int i = 0; i < 24 && feasible(hi); ++i) {
        lo = hi;
        hi *= 2.0;
    }
    for (int i = 0; i < 20 && (hi - lo) > 0.1; ++i) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? lo : hi) = mid;
    }
    return lo;
}

/// Total effective thermal resistance of the loop stack in K/W. For the
/// heat-balance model this is re-derived from the weather so that the ladder's
/// steady state at the hot-spot limit coincides with the steady heat balance.
double total_loop_resistance(const ThermalLadderSpec& spec, const WeatherSample& w) {
    if (spec.model == ThermalModel::ladder) {
        double sum = 0.0;
        for (const auto& l : spec.loops) sum += l.t_k_per_w;
        return sum;
    }
    const double limit = spec.hot_spot_limit_c;
    const double headroom = limit - spec.dielectric_rise_k - w.ambient_c;
    if (headroom > 0.01) {
        const double i_ss = steady_ampacity(spec, w);
        const double w_lim = i_ss * i_ss * resistance_ohm(spec.conductor, limit) +
                             solar_gain_w(spec, w);
        if (w_lim > 1e-9) return headroom / w_lim;
    }
    // No headroom left: fall back to the cooling curve linearised at ambient.
    const auto& c = spec.cooling;
    const double ak = w.ambient_c + kKelvin;
    const double h = c.conv_a + c.conv_b * std::sqrt(std::max(0.0, w.wind_mps)) +
                     4.0 * c.emissivity * kStefanBoltzmann * c.diameter_m * ak * ak * ak;
    return 1.0 / std::max(h, 1e-9);
}

/// Per-loop resistances: ladder loops carry their own values, heat-balance
/// loops split the weather-derived total by their configured shares.
std::vector<double> loop_resistances(const ThermalLadderSpec& spec, const WeatherSample& w) {
    std::vector<double> t(spec.loops.size(), 0.0);
    if (spec.model == ThermalModel::ladder) {
        for (std::size_t k = 0; k < spec.loops.size(); ++k) t[k] = spec.loops[k].t_k_per_w;
        return t;
    }
    const double total = total_loop_resistance(spec, w);
    double share_sum = 0.0;
    for (const auto& l : spec.loops) share_sum += l.t_k_per_w;
    for (std::size_t k = 0; k < spec.loops.size(); ++k) {
        const double share = share_sum > 0.0 ? spec.loops[k].t_k_per_w / share_sum
                                             : 1.0 / static_cast<double>(spec.loops.size());
        t[k] = total * share;
    }
    return t;
}

double assemble_hot_spot(const ThermalLadderSpec& spec, const WeatherSample& w,
                         std::span<const double> rises, double loss_w) {
    double sum = 0.0;
    for (double r : rises) sum += r;
    return spec.dielectric_rise_k + w.ambient_c + sum + spec.hotspot_rise_k_per_w * loss_w;
}

} // namespace

void ThermalLadderSpec::validate() const {
    if (loops.empty()) throw std::invalid_argument("thermal spec has no loops");
    for (const auto& l : loops) {
        if (!(l.tau_h > 0.0)) throw std::invalid_argument("thermal loop tau must be positive");
        if (l.t_k_per_w < 0.0) throw std::invalid_argument("thermal loop resistance negative");
    }
    if (!(hot_spot_limit_c > 0.0)) throw std::invalid_argument("hot-spot limit must be positive");
    if (conductor.r0 < 0.0) throw std::invalid_argument("conductor resistance negative");
    if (model == ThermalModel::ladder) {
        double sum = hotspot_rise_k_per_w;
        for (const auto& l : loops) sum += l.t_k_per_w;
        if (!(sum > 0.0)) throw std::invalid_argument("ladder spec has zero thermal resistance");
    } else {
        if (!(cooling.diameter_m > 0.0)) throw std::invalid_argument("conductor diameter must be positive");
        if (!(cooling.conv_a > 0.0) && !(cooling.conv_b > 0.0) && !(cooling.emissivity > 0.0)) {
            throw std::invalid_argument("heat-balance spec has no cooling path");
        }
    }
}

double conductor_loss_w(const ThermalLadderSpec& spec, double current_a,
                        double conductor_temp_c) {
    return current_a * current_a * resistance_ohm(spec.conductor, conductor_temp_c);
}

ThermalComponentState ladder_step(const ThermalLadderSpec& spec,
                                  const ThermalComponentState& state,
                                  double current_a,
                                  const WeatherSample& weather,
                                  double dt_h) {
    if (!(dt_h > 0.0)) throw std::invalid_argument("ladder_step requires dt > 0");
    const double loss = conductor_loss_w(spec, current_a, state.hot_spot_c);
    const double drive = loss + solar_gain_w(spec, weather);
    const auto t = loop_resistances(spec, weather);

    ThermalComponentState next;
    next.loop_rises_k.resize(spec.loops.size());
    for (std::size_t k = 0; k < spec.loops.size(); ++k) {
        const double decay = std::exp(-dt_h / spec.loops[k].tau_h);
        const double prev = k < state.loop_rises_k.size() ? state.loop_rises_k[k] : 0.0;
        next.loop_rises_k[k] = prev * decay + t[k] * drive * (1.0 - decay);
    }
    next.hot_spot_c = assemble_hot_spot(spec, weather, next.loop_rises_k, loss);
    return next;
}

ThermalComponentState simulate_hold(const ThermalLadderSpec& spec,
                                    ThermalComponentState state,
                                    double current_a,
                                    const WeatherSample& weather,
                                    double duration_h,
                                    double dt_sub_h) {
    const int steps = std::max(1, static_cast<int>(std::ceil(duration_h / dt_sub_h - 1e-12)));
    const double dt = duration_h / steps;
    for (int i = 0; i < steps; ++i) state = ladder_step(spec, state, current_a, weather, dt);
    return state;
}

ThermalComponentState equilibrium_state(const ThermalLadderSpec& spec,
                                        double current_a,
                                        const WeatherSample& weather) {
    const auto t = loop_resistances(spec, weather);
    double g = 0.0;
    for (double v : t) g += v;
    const double h = spec.model == ThermalModel::ladder ? spec.hotspot_rise_k_per_w : 0.0;
    const double s = solar_gain_w(spec, weather);
    const double base = spec.dielectric_rise_k + weather.ambient_c;

    // Loss is linear in temperature, so the fixed point solves in closed form:
    //   theta = base + g*(W + s) + h*W,  W = a + b*theta
    const double i2r0 = current_a * current_a * spec.conductor.r0;
    const double a = i2r0 * (1.0 - spec.conductor.alpha_per_k * spec.conductor.theta_ref_c);
    const double b = i2r0 * spec.conductor.alpha_per_k;
    const double denom = 1.0 - (g + h) * b;

    double theta;
    if (denom > 1e-9) {
        theta = (base + g * s + (g + h) * a) / denom;
    } else {
        theta = spec.hot_spot_limit_c + 1000.0; // thermal runaway marker
    }
    const double loss = conductor_loss_w(spec, current_a, theta);

    ThermalComponentState st;
    st.loop_rises_k.resize(spec.loops.size());
    for (std::size_t k = 0; k < spec.loops.size(); ++k) {
        st.loop_rises_k[k] = t[k] * (loss + s);
    }
    st.hot_spot_c = assemble_hot_spot(spec, weather, st.loop_rises_k, loss);
    return st;
}

double steady_ampacity(const ThermalLadderSpec& spec, const WeatherSample& weather) {
    const double limit = spec.hot_spot_limit_c;
    if (weather.ambient_c >= limit) return 0.0;
    const double r_lim = resistance_ohm(spec.conductor, limit);
    if (r_lim <= 0.0) return 0.0;

    if (spec.model == ThermalModel::heat_balance) {
        const double budget = cooling_w(spec.cooling, weather, limit) -
                              solar_gain_w(spec, weather);
        if (budget <= 0.0) return 0.0;
        return bisect_current([&](double i) { return i * i * r_lim <= budget; });
    }

    const double headroom = limit - spec.dielectric_rise_k - weather.ambient_c;
    if (headroom <= 0.0) return 0.0;
    double g = spec.hotspot_rise_k_per_w;
    for (const auto& l : spec.loops) g += l.t_k_per_w;
    return bisect_current([&](double i) { return g * i * i * r_lim <= headroom; });
}

double dynamic_rating(const ThermalLadderSpec& spec,
                      const ThermalComponentState& state,
                      const WeatherSample& weather_next_hour,
                      double end_rise_cap_k) {
    const double limit = spec.hot_spot_limit_c + kTempSlack;
    const auto hold_ok = [&](double current) {
        ThermalComponentState st = state;
        const int steps = static_cast<int>(std::lround(1.0 / kRatingSubStepH));
        for (int i = 0; i < steps; ++i) {
            st = ladder_step(spec, st, current, weather_next_hour, kRatingSubStepH);
            if (st.hot_spot_c > limit) return false;
        }
        // leave enough headroom that the next hour starts inside its own
        // certified limit; without this a sustained ambient ramp strands slow
        // components above the limit before their hour even begins
        return st.hot_spot_c - weather_next_hour.ambient_c <= end_rise_cap_k + kTempSlack;
    };
    if (!hold_ok(0.0)) return 0.0;

    double lo = 0.0;
    double hi = std::max(10.0, 2.0 * steady_ampacity(spec, weather_next_hour));
    for (int i = 0; i < 24 && hold_ok(hi); ++i) {
        lo = hi;
        hi *= 2.0;
    }
    for (int i = 0; i < 20; ++i) {
        const double mid = 0.5 * (lo + hi);
        (hold_ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

WeatherSample certification_sample(std::span<const WeatherSample> series, int hour) {
    if (hour < 0 || hour >= static_cast<int>(series.size())) {
        throw InputError("weather series does not cover hour " + std::to_string(hour));
    }
    WeatherSample s = series[static_cast<std::size_t>(hour)];
    const std::size_t next = std::min(series.size() - 1, static_cast<std::size_t>(hour) + 1);
    s.ambient_c = std::max(s.ambient_c, series[next].ambient_c);
    return s;
}

RatingSchedule rating_schedule(const RadialNetwork& network,
                               std::span<const WeatherSample> weather,
                               RatingMode mode,
                               std::vector<ThermalComponentState> initial_states) {
    const int hours = 24;
    if (static_cast<int>(weather.size()) < hours) {
        throw InputError("weather series must cover 24 hours, got " +
                         std::to_string(weather.size()));
    }
    const auto n_branches = static_cast<Eigen::Index>(network.branches.size());

    RatingSchedule sched;
    sched.mode = mode;
    sched.ampacity_a.resize(n_branches, hours);

    if (mode == RatingMode::static_rating) {
        for (Eigen::Index b = 0; b < n_branches; ++b) {
            sched.ampacity_a.row(b).setConstant(network.branches[static_cast<std::size_t>(b)].static_rating_a);
        }
        return sched;
    }

    if (initial_states.size() != network.branches.size()) {
        throw std::invalid_argument("one initial thermal state per branch required");
    }
    for (Eigen::Index b = 0; b < n_branches; ++b) {
        const auto& spec = network.branches[static_cast<std::size_t>(b)].thermal;
        ThermalComponentState st = std::move(initial_states[static_cast<std::size_t>(b)]);
        for (int h = 0; h < hours; ++h) {
            const WeatherSample cert = certification_sample(weather, h);
            const WeatherSample cert_next =
                certification_sample(weather, std::min(h + 1, hours - 1));
            const double amp = dynamic_rating(spec, st, cert,
                                              spec.hot_spot_limit_c - cert_next.ambient_c);
            sched.ampacity_a(b, h) = amp;
            // the chain lives in the certified world: full rating current under
            // the certified sample, so realised operation only runs cooler
            st = simulate_hold(spec, st, amp, cert, 1.0, kRatingSubStepH);
        }
    }
    return sched;
}

std::vector<ThermalComponentState>
equilibrium_states(const RadialNetwork& network, std::span<const double> currents_a,
                   const WeatherSample& weather) {
    if (currents_a.size() != network.branches.size()) {
        throw std::invalid_argument("one current per branch required");
    }
    std::vector<ThermalComponentState> states;
    states.reserve(network.branches.size());
    for (std::size_t b = 0; b < network.branches.size(); ++b) {
        states.push_back(equilibrium_state(network.branches[b].thermal, currents_a[b], weather));
    }
    return states;
}

} // namespace gridpeak
