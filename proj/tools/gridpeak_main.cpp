// gridpeak: peak-event scheduling for radial feeders.
//
// Exit codes: 0 success and all constraints met, 1 bad input or usage,
// 2 the requested operation finished but a constraint could not be met.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gridpeak/errors.hpp"
#include "gridpeak/scenario.hpp"

namespace {

// "A-B" inclusive; a single number means a one-hour window.
void parse_hour_window(const std::string& text, int& first, int& last) {
    const auto dash = text.find('-');
    try {
        if (dash == std::string::npos) {
            first = last = std::stoi(text);
        } else {
            first = std::stoi(text.substr(0, dash));
            last = std::stoi(text.substr(dash + 1));
        }
    } catch (const std::exception&) {
        throw gridpeak::InputError("cannot parse hour window '" + text + "'");
    }
    if (first < 0 || last > 23 || first > last)
        throw gridpeak::InputError("hour window '" + text + "' is out of range");
}

struct RunArgs {
    std::string network, weather, prices, out, config;
    std::string case_name = "static";
    std::string hours = "10-21";
    std::uint64_t seed = 1;
    double demand_factor = 1.0;
};

int cmd_run(const RunArgs& args) {
    gridpeak::ScenarioConfig config;
    config.network_path = args.network;
    config.weather_path = args.weather;
    config.prices_path = args.prices;
    config.output_dir = args.out;
    config.mode = gridpeak::parse_case_mode(args.case_name);
    parse_hour_window(args.hours, config.first_hour, config.last_hour);
    config.seed = args.seed;
    config.demand_factor = args.demand_factor;
    if (!args.config.empty()) gridpeak::apply_config_file(config, args.config);

    const gridpeak::EventSchedule schedule = gridpeak::run_case(config);
    std::printf("case %s: total cost %.2f USD, curtailed %.3f kWh, %s\n",
                gridpeak::to_string(schedule.mode).c_str(), schedule.total_cost_usd,
                schedule.total_curtailed_kwh,
                schedule.all_feasible ? "all hours feasible" : "INFEASIBLE HOURS PRESENT");
    return schedule.all_feasible ? 0 : 2;
}

int cmd_compare(const std::vector<std::string>& runs, const std::string& out) {
    const gridpeak::ComparisonReport report = gridpeak::compare_cases(runs, out);
    for (std::size_t c = 0; c < report.cases.size(); ++c) {
        const gridpeak::RunSummary& run = report.cases[c];
        std::printf("%-8s total %.2f USD  reduction %.3f%%  curtailed %.3f kWh\n",
                    run.case_name.c_str(), run.total_cost_usd, report.cost_reduction_pct[c],
                    run.total_curtailed_kwh);
    }
    return 0;
}

struct SweepArgs {
    std::string network, out, config;
    std::string hours = "10-21";
    std::vector<double> factors;
};

int cmd_sweep(const SweepArgs& args) {
    gridpeak::ScenarioConfig config;
    config.network_path = args.network;
    config.output_dir = args.out;
    parse_hour_window(args.hours, config.first_hour, config.last_hour);
    if (!args.config.empty()) gridpeak::apply_config_file(config, args.config);

    const auto entries = gridpeak::demand_factor_sweep(config, args.factors);
    bool all_ok = true;
    for (const gridpeak::SweepEntry& e : entries) {
        if (e.feasible)
            std::printf("factor %.3f: min v_sub %.4f pu\n", e.factor, e.min_v_sub_pu);
        else
            std::printf("factor %.3f: no feasible setpoint\n", e.factor);
        all_ok = all_ok && e.feasible;
    }
    return all_ok ? 0 : 2;
}

int cmd_currents(const std::string& baseline, const std::string& case_dir) {
    const auto rows = gridpeak::current_change_map(baseline, case_dir);
    for (const gridpeak::CurrentChangeRow& row : rows)
        std::printf("branch %d (%d->%d, hop %d): max %+.4f%%  mean %+.4f%%\n", row.branch_id,
                    row.from, row.to, row.hops, 100.0 * row.rel_change_max,
                    100.0 * row.rel_change_mean);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Peak-event scheduling for radial distribution feeders"};
    app.require_subcommand(1);

    RunArgs run_args;
    CLI::App* run = app.add_subcommand("run", "Optimise one case and write its schedule");
    run->add_option("--network", run_args.network, "Network JSON")->required();
    run->add_option("--weather", run_args.weather, "Hourly weather CSV")->required();
    run->add_option("--prices", run_args.prices, "Hourly price CSV")->required();
    run->add_option("--case", run_args.case_name, "static, cvr, or cvr-dtr")
        ->default_val("static");
    run->add_option("--hours", run_args.hours, "Event window, e.g. 10-21")
        ->default_val("10-21");
    run->add_option("--seed", run_args.seed, "Swarm seed")->default_val(1);
    run->add_option("--demand-factor", run_args.demand_factor, "Scale all baselines")
        ->default_val(1.0);
    run->add_option("--config", run_args.config, "JSON overrides (swarm, bounds, cap)");
    run->add_option("--out", run_args.out, "Output directory")->required();

    std::vector<std::string> compare_runs;
    std::string compare_out;
    CLI::App* compare = app.add_subcommand("compare", "Tabulate completed runs side by side");
    compare->add_option("--runs", compare_runs, "Run directories (first is the reference)")
        ->required()
        ->expected(2, 8);
    compare->add_option("--out", compare_out, "Output directory")->required();

    SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "Lowest feasible substation setpoint per demand factor");
    sweep->add_option("--network", sweep_args.network, "Network JSON")->required();
    sweep->add_option("--factors", sweep_args.factors, "Demand factors")
        ->required()
        ->delimiter(',');
    sweep->add_option("--hours", sweep_args.hours, "Event window, e.g. 10-21")
        ->default_val("10-21");
    sweep->add_option("--config", sweep_args.config, "JSON overrides (bounds)");
    sweep->add_option("--out", sweep_args.out, "Output directory for sweep.csv");

    std::string currents_baseline, currents_case;
    CLI::App* currents =
        app.add_subcommand("currents", "Relative branch current change between two runs");
    currents->add_option("--baseline", currents_baseline, "Reference run directory")
        ->required();
    currents->add_option("--case", currents_case, "Run directory to compare")->required();

    try {
        app.parse(argc, argv);
        if (run->parsed()) return cmd_run(run_args);
        if (compare->parsed()) return cmd_compare(compare_runs, compare_out);
        if (sweep->parsed()) return cmd_sweep(sweep_args);
        if (currents->parsed()) return cmd_currents(currents_baseline, currents_case);
    } catch (const CLI::ParseError& e) {
        // --help and friends exit 0; every real usage error collapses to 1
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const gridpeak::InputError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
