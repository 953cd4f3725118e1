#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gridpeak/io.hpp"
#include "gridpeak/power_flow.hpp"
#include "gridpeak/thermal.hpp"

namespace gridpeak {

/// What the operator is allowed to vary. Curtailment is always available;
/// cvr adds the substation setpoint, cvr_dtr additionally rates branches by
/// their thermal state instead of the nameplate.
enum class CaseMode { curtail_only, cvr, cvr_dtr };

[[nodiscard]] std::string to_string(CaseMode mode);
[[nodiscard]] CaseMode parse_case_mode(const std::string& s);

struct EventSpec {
    std::vector<int> hours; // event hours, ascending, inclusive of both ends
    double v_min_pu = 0.90;
    double v_max_pu = 1.05;
    double v_sub_min_pu = 0.90;
    double v_sub_max_pu = 1.05;
    double nominal_v_sub_pu = 1.0; // setpoint whenever cvr is not active
    double max_curtailment = 0.5;  // cap on each load's curtailment fraction
    CaseMode mode = CaseMode::curtail_only;

    void validate() const;
};

struct SwarmConfig {
    int particles = 40;
    int iterations = 100;
    double inertia_start = 0.9;
    double inertia_end = 0.4;
    double c1 = 2.0;
    double c2 = 2.0;
    double velocity_clamp = 0.2; // fraction of each dimension's box width
    std::uint64_t seed = 1;
    double penalty_weight = 0.0;     // 0 derives 1e4 x the day's max hourly energy cost
    double divergence_penalty = 1e12;

    void validate() const;
};

struct Violations {
    double voltage_pu = 0.0;  // summed bound excursions over load nodes
    double current_a = 0.0;   // summed ampacity excess over branches
    double curtailment = 0.0; // summed excess of chi over the cap
    bool diverged = false;

    [[nodiscard]] double sum() const { return voltage_pu + current_a + curtailment; }
};

struct FeasibilityTolerances {
    double voltage_pu = 1e-6;
    double current_a = 1e-3;
    double curtailment = 1e-9;
};

[[nodiscard]] bool is_feasible(const Violations& v, const FeasibilityTolerances& tol = {});

struct Box {
    Eigen::VectorXd lo, hi;
};

/// Everything one hour's decision needs, with ratings already resolved.
struct HourProblem {
    const RadialNetwork* network = nullptr;
    const BibcMatrix* bibc = nullptr;
    const ImpedanceMatrix* imp = nullptr;
    std::span<const ZipLoad> loads;
    const EventSpec* event = nullptr;
    int hour = 0;
    double price_usd_per_kwh = 0.0;
    Eigen::VectorXd ratings_a;     // per branch, network order
    std::vector<int> curtailable;  // indices into loads, ascending
    double penalty_weight = 0.0;
    double divergence_penalty = 1e12;

    /// cvr modes prepend the substation voltage to the curtailment block.
    [[nodiscard]] int dimensions() const;
    [[nodiscard]] Box box() const;
};

[[nodiscard]] HourProblem make_hour_problem(const RadialNetwork& network,
                                            const BibcMatrix& bibc,
                                            const ImpedanceMatrix& imp,
                                            std::span<const ZipLoad> loads,
                                            const EventSpec& event, int hour,
                                            double price_usd_per_kwh,
                                            Eigen::VectorXd ratings_a,
                                            double penalty_weight,
                                            double divergence_penalty = 1e12);

/// The documented default: 1e4 times the largest hourly baseline energy cost.
[[nodiscard]] double default_penalty_weight(std::span<const ZipLoad> loads,
                                            const PriceSeries& prices);

struct Evaluation {
    double cost_usd = 0.0;
    double energy_cost_usd = 0.0;
    double curtailment_cost_usd = 0.0;
    double penalized = std::numeric_limits<double>::infinity();
    Violations violations;
    PowerFlowResult flow;
    std::vector<double> chi; // per load, zeros for non-curtailable entries
    double v_sub_pu = 1.0;
};

/// Cost of one candidate operating point plus its constraint excursions.
/// Curtailment is penalised against the baseline demand; a non-converging
/// flow earns the fixed divergence penalty instead of an exception.
[[nodiscard]] Evaluation evaluate(const HourProblem& problem, const Eigen::VectorXd& position);

struct Particle {
    Eigen::VectorXd position;
    Eigen::VectorXd velocity;
    Eigen::VectorXd best_position;
    double best_penalized = std::numeric_limits<double>::infinity();
};

struct GlobalBest {
    Eigen::VectorXd position;
    double penalized = std::numeric_limits<double>::infinity();
};

/// Draws for one particle update: which = 0 for the cognitive pull, 1 for the
/// social pull, per dimension.
using UniformSource = std::function<double(int dim, int which)>;

/// Classic velocity/position update with per-dimension clamps. Velocities are
/// limited to velocity_clamp times the box width, positions to the box.
[[nodiscard]] Particle pso_update(const Particle& particle, const GlobalBest& gbest,
                                  double omega, const SwarmConfig& config, const Box& box,
                                  const UniformSource& uniforms);

struct HourSolution {
    Evaluation best;
    Eigen::VectorXd position;
    std::vector<double> trace; // global best after init and every iteration
    bool feasible = false;
};

/// Penalty-method particle swarm over one hour's decision box. Deterministic
/// for a fixed seed: every random draw is a pure function of
/// (seed, hour, iteration, particle, dimension).
[[nodiscard]] HourSolution optimize_hour(const HourProblem& problem, const SwarmConfig& config);

struct HourRecord {
    int hour = 0;
    double v_sub_pu = 1.0;
    std::vector<double> chi; // per load
    double purchased_kw = 0.0;
    double loss_kw = 0.0;
    double energy_cost_usd = 0.0;
    double curtailment_cost_usd = 0.0;
    double total_cost_usd = 0.0;
    double curtailed_kw = 0.0; // baseline-referenced
    bool feasible = false;
    Violations violations;
    PowerFlowResult flow;
    std::vector<double> ratings_a; // per branch
};

struct EventSchedule {
    CaseMode mode = CaseMode::curtail_only;
    std::uint64_t seed = 0;
    std::vector<HourRecord> hours;
    double total_cost_usd = 0.0;
    double total_energy_cost_usd = 0.0;
    double total_curtailment_cost_usd = 0.0;
    double total_curtailed_kwh = 0.0;
    double total_purchased_kwh = 0.0;
    bool all_feasible = true;
};

/// Optimise every event hour in order. Hours decouple electrically; in
/// cvr_dtr mode the branch thermal states chain through the day, advanced by
/// the realised currents of each chosen operating point, and pre-event hours
/// are walked at the baseline operating point to seed those states.
[[nodiscard]] EventSchedule optimize_event(const RadialNetwork& network,
                                           const BibcMatrix& bibc,
                                           const ImpedanceMatrix& imp,
                                           std::span<const ZipLoad> loads,
                                           const EventSpec& event,
                                           const PriceSeries& prices,
                                           const WeatherSeries& weather,
                                           const SwarmConfig& swarm);

} // namespace gridpeak
