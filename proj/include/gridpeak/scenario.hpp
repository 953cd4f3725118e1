#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gridpeak/optimizer.hpp"

namespace gridpeak {

/// One end-to-end run: inputs, case selection, event window, output location.
struct ScenarioConfig {
    std::string network_path;
    std::string weather_path;
    std::string prices_path;
    std::string output_dir;
    CaseMode mode = CaseMode::curtail_only;
    int first_hour = 10;
    int last_hour = 21; // inclusive
    std::uint64_t seed = 1;
    double demand_factor = 1.0;
    SwarmConfig swarm{};
    EventSpec event{}; // hours and mode are filled from the fields above

    [[nodiscard]] EventSpec resolved_event() const;
};

/// Merge optional JSON overrides (swarm settings, penalty weight, voltage
/// bounds, curtailment cap) into a config. Unknown keys are an error.
void apply_config_file(ScenarioConfig& config, const std::string& path);

/// Optimise the configured case and write schedule.json, costs.csv,
/// voltages.csv, currents.csv, curtailment.csv into output_dir.
EventSchedule run_case(const ScenarioConfig& config);

/// Parsed-back essentials of a completed run directory.
struct RunSummary {
    std::string case_name;
    std::uint64_t seed = 0;
    double base_current_a = 0.0;
    std::array<std::uint64_t, 3> input_fingerprints{}; // network, weather, prices
    std::vector<int> hours;
    std::vector<double> purchased_kw;  // per listed hour
    std::vector<double> curtailed_kw;  // per listed hour
    double total_cost_usd = 0.0;
    double total_energy_cost_usd = 0.0;
    double total_curtailment_cost_usd = 0.0;
    double total_curtailed_kwh = 0.0;
    double total_purchased_kwh = 0.0;
    bool all_feasible = true;

    struct BranchInfo {
        int id = 0, from = 0, to = 0, hops = 0;
    };
    std::vector<BranchInfo> branches;
    // section current magnitude in A, [hour index][branch index]
    std::vector<std::vector<double>> branch_amps;
    // per-bus voltage magnitude, [hour index][bus position]; ids listed once
    std::vector<int> voltage_bus_ids;
    std::vector<std::vector<double>> bus_voltage_pu;
};

[[nodiscard]] RunSummary read_run(const std::string& run_dir);

struct ComparisonReport {
    std::vector<RunSummary> cases;
    std::vector<double> cost_reduction_pct; // vs the first case
};

/// Cross-check completed runs that must share identical inputs, then write
/// summary.csv, purchased_by_hour.csv, curtailed_by_hour.csv, and per-bus
/// voltage tables for the requested hours into out_dir. Mismatched input
/// fingerprints raise InputError.
ComparisonReport compare_cases(const std::vector<std::string>& run_dirs,
                               const std::string& out_dir,
                               const std::vector<int>& voltage_hours = {10, 14});

struct SweepEntry {
    double factor = 1.0;
    double min_v_sub_pu = 0.0;
    bool feasible = false;
};

/// Lowest substation setpoint with a feasible uncurtailed power flow in every
/// event hour, per demand factor, against nameplate ratings. Writes sweep.csv
/// into the config's output_dir when one is set.
std::vector<SweepEntry> demand_factor_sweep(const ScenarioConfig& config,
                                            const std::vector<double>& factors);

struct CurrentChangeRow {
    int branch_id = 0, from = 0, to = 0, hops = 0;
    double rel_change_max = 0.0;  // signed, most positive across common hours
    double rel_change_mean = 0.0; // signed mean across common hours
};

/// Relative branch current change of a case run against a baseline run over
/// their common hours. Zero-current baseline branches report zero change.
/// Writes current_change.csv into the case run directory.
std::vector<CurrentChangeRow> current_change_map(const std::string& baseline_dir,
                                                 const std::string& case_dir);

} // namespace gridpeak
