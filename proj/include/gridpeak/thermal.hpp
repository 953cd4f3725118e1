#pragma once

#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace gridpeak {

struct RadialNetwork; // grid.hpp; kept out of this header to avoid a cycle

/// One hourly weather record. Ambient applies to every component; wind and
/// solar only matter for components cooled by the heat-balance model.
struct WeatherSample {
    double ambient_c = 20.0;
    double wind_mps = 0.61;
    double solar_wm2 = 0.0;
};

using WeatherSeries = std::vector<WeatherSample>;

enum class ThermalModel {
    heat_balance, // conductors in air or soil: cooling derived from weather
    ladder        // transformers: fixed loop thermal resistances
};

/// First-order thermal loop: exponential response with time constant tau_h
/// toward t_k_per_w times the driving loss.
struct ThermalLoop {
    double tau_h = 1.0;
    double t_k_per_w = 0.0; // ladder: K/W; heat_balance: relative share only
};

/// Electrical resistance of the heat source, linear in temperature.
struct ConductorResistance {
    double r0 = 0.0;          // ohm (ladder) or ohm/m (heat_balance) at theta_ref_c
    double alpha_per_k = 0.0;
    double theta_ref_c = 25.0;
};

/// Heat-balance cooling terms, all per unit length:
///   convection (conv_a + conv_b*sqrt(wind)) * (T - ambient)
///   radiation  emissivity * sigma * diameter * (T_K^4 - ambient_K^4)
///   solar gain absorptivity * irradiance * diameter
struct CoolingParams {
    double conv_a = 1.0;
    double conv_b = 0.0;
    double emissivity = 0.0;
    double absorptivity = 0.0;
    double diameter_m = 0.02;
};

struct ThermalLadderSpec {
    ThermalModel model = ThermalModel::heat_balance;
    std::vector<ThermalLoop> loops;
    double dielectric_rise_k = 0.0;
    double hot_spot_limit_c = 90.0;
    ConductorResistance conductor{};
    double hotspot_rise_k_per_w = 0.0; // ladder only: instantaneous gradient
    CoolingParams cooling{};           // heat_balance only

    int node_count() const { return static_cast<int>(loops.size()); }
    /// Throws std::invalid_argument on non-positive tau, limit, or empty loops.
    void validate() const;
};

/// Loop temperature rises in K plus the assembled hot-spot temperature.
struct ThermalComponentState {
    std::vector<double> loop_rises_k;
    double hot_spot_c = 0.0;
};

/// Electrical loss in W (per unit length for heat_balance) at the given
/// current and conductor temperature.
[[nodiscard]] double conductor_loss_w(const ThermalLadderSpec& spec,
                                      double current_a, double conductor_temp_c);

/// Advance the ladder by dt_h hours at constant current and weather. The loss
/// is frozen at the previous step's conductor temperature; each loop relaxes
/// exponentially toward its own steady rise.
[[nodiscard]] ThermalComponentState ladder_step(const ThermalLadderSpec& spec,
                                                const ThermalComponentState& state,
                                                double current_a,
                                                const WeatherSample& weather,
                                                double dt_h);

/// Chain ladder_step over `duration_h` in sub-steps of at most dt_sub_h.
[[nodiscard]] ThermalComponentState simulate_hold(const ThermalLadderSpec& spec,
                                                  ThermalComponentState state,
                                                  double current_a,
                                                  const WeatherSample& weather,
                                                  double duration_h,
                                                  double dt_sub_h);

/// Self-consistent steady state at constant current and weather.
[[nodiscard]] ThermalComponentState equilibrium_state(const ThermalLadderSpec& spec,
                                                      double current_a,
                                                      const WeatherSample& weather);

/// Largest constant current whose steady hot-spot stays at or below the
/// limit. Bisection on current, resolved to 0.1 A within 20 iterations.
/// Ambient at or above the limit yields zero.
[[nodiscard]] double steady_ampacity(const ThermalLadderSpec& spec,
                                     const WeatherSample& weather);

/// Largest constant current that keeps the hot-spot at or below the limit
/// throughout the next hour, starting from `state`. Transient headroom above
/// steady_ampacity is exactly what dynamic rating exploits. A finite
/// end_rise_cap_k additionally bounds the rise above ambient at the end of
/// the hour, reserving startup headroom for the hour that follows.
[[nodiscard]] double dynamic_rating(const ThermalLadderSpec& spec,
                                    const ThermalComponentState& state,
                                    const WeatherSample& weather_next_hour,
                                    double end_rise_cap_k =
                                        std::numeric_limits<double>::infinity());

enum class RatingMode { static_rating, dynamic_rating };

/// Per-branch hourly ampacity table, branches in network order.
struct RatingSchedule {
    RatingMode mode = RatingMode::static_rating;
    Eigen::MatrixXd ampacity_a; // branches x hours
};

/// The weather a rating for `hour` is certified against: the hour's sample
/// with ambient raised to the next hour's value when that is higher, so a
/// component run at its full rating cannot start the next hour above its
/// limit purely from the ambient step between samples.
[[nodiscard]] WeatherSample certification_sample(std::span<const WeatherSample> series,
                                                 int hour);

/// Hourly ampacity per branch. Static mode replicates the nameplate rating;
/// dynamic mode chains dynamic_rating hour to hour, advancing each branch
/// state at its own rating current under the certified weather (standalone
/// worst case: realised operation is cooler on both counts).
[[nodiscard]] RatingSchedule rating_schedule(const RadialNetwork& network,
                                             std::span<const WeatherSample> weather,
                                             RatingMode mode,
                                             std::vector<ThermalComponentState> initial_states);

/// Equilibrium states for every branch at the given branch currents in A.
[[nodiscard]] std::vector<ThermalComponentState>
equilibrium_states(const RadialNetwork& network, std::span<const double> currents_a,
                   const WeatherSample& weather);

} // namespace gridpeak
