#include "gridpeak/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "gridpeak/errors.hpp"
#include "gridpeak/io.hpp"

namespace gridpeak {
namespace {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

int log_level() {
    static const int level = [] {
        const char* env = std::getenv("GRIDPEAK_LOG");
        if (env == nullptr) return 0;
        const std::string v(env);
        if (v == "debug") return 2;
        if (v == "info") return 1;
        return 0;
    }();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::fprintf(stderr, "[gridpeak] %s\n", msg.c_str());
}

std::string fixed(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
    if (!out) throw InputError("write failed for " + path.string());
}

struct LoadedInputs {
    RadialNetwork network;
    WeatherSeries weather;
    PriceSeries prices;
    std::uint64_t net_fp = 0, weather_fp = 0, prices_fp = 0;
};

LoadedInputs load_inputs(const ScenarioConfig& config) {
    LoadedInputs in;
    in.network = load_network(config.network_path);
    in.weather = load_weather_csv(config.weather_path);
    in.prices = load_prices_csv(config.prices_path);
    in.net_fp = file_fingerprint(config.network_path);
    in.weather_fp = file_fingerprint(config.weather_path);
    in.prices_fp = file_fingerprint(config.prices_path);
    if (config.demand_factor <= 0.0)
        throw InputError("demand factor must be positive");
    if (config.demand_factor != 1.0) {
        for (auto& load : in.network.loads) {
            for (auto& p : load.baseline_p_kw) p *= config.demand_factor;
            for (auto& q : load.baseline_q_kvar) q *= config.demand_factor;
        }
    }
    return in;
}

} // namespace

EventSpec ScenarioConfig::resolved_event() const {
    EventSpec spec = event;
    spec.mode = mode;
    spec.hours.clear();
    if (first_hour > last_hour)
        throw InputError("event window start exceeds end");
    for (int h = first_hour; h <= last_hour; ++h) spec.hours.push_back(h);
    return spec;
}

void apply_config_file(ScenarioConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file " + path);
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const std::exception& e) {
        throw InputError("config parse error in " + path + ": " + e.what());
    }
    if (!doc.is_object()) throw InputError("config root must be an object");
    for (const auto& [key, value] : doc.items()) {
        if (key == "particles") config.swarm.particles = value.get<int>();
        else if (key == "iterations") config.swarm.iterations = value.get<int>();
        else if (key == "inertia_start") config.swarm.inertia_start = value.get<double>();
        else if (key == "inertia_end") config.swarm.inertia_end = value.get<double>();
        else if (key == "c1") config.swarm.c1 = value.get<double>();
        else if (key == "c2") config.swarm.c2 = value.get<double>();
        else if (key == "velocity_clamp") config.swarm.velocity_clamp = value.get<double>();
        else if (key == "penalty_weight") config.swarm.penalty_weight = value.get<double>();
        else if (key == "v_min_pu") config.event.v_min_pu = value.get<double>();
        else if (key == "v_max_pu") config.event.v_max_pu = value.get<double>();
        else if (key == "v_sub_min_pu") config.event.v_sub_min_pu = value.get<double>();
        else if (key == "v_sub_max_pu") config.event.v_sub_max_pu = value.get<double>();
        else if (key == "nominal_v_sub_pu") config.event.nominal_v_sub_pu = value.get<double>();
        else if (key == "max_curtailment") config.event.max_curtailment = value.get<double>();
        else throw InputError("unknown config key '" + key + "' in " + path);
    }
}

namespace {

ordered_json flow_dump(const RadialNetwork& network, const BibcMatrix& bibc,
                       const PowerFlowResult& flow) {
    ordered_json v = ordered_json::array();
    v.push_back({{"bus", network.substation()->id},
                 {"mag", flow.v_sub_pu},
                 {"ang", 0.0}});
    for (int n = 0; n < bibc.nodes(); ++n) {
        const Complex volt = flow.bus_voltages[static_cast<std::size_t>(n)];
        v.push_back({{"bus", network.buses[static_cast<std::size_t>(bibc.node_bus[static_cast<std::size_t>(n)])].id},
                     {"mag", std::abs(volt)},
                     {"ang", std::arg(volt) * 180.0 / M_PI}});
    }
    ordered_json i = ordered_json::array();
    for (int s = 0; s < bibc.sections(); ++s) {
        const Complex cur = flow.section_currents[static_cast<std::size_t>(s)];
        i.push_back({{"section", network.branches[static_cast<std::size_t>(bibc.section_branch[static_cast<std::size_t>(s)])].id},
                     {"mag", std::abs(cur)},
                     {"ang", std::arg(cur) * 180.0 / M_PI}});
    }
    return ordered_json{{"v", std::move(v)},
                        {"i", std::move(i)},
                        {"loss_kw", flow.loss_kw},
                        {"iters", flow.iterations}};
}

void write_schedule_json(const fs::path& dir, const ScenarioConfig& config,
                         const LoadedInputs& in, const RadialNetwork& network,
                         const BibcMatrix& bibc, const EventSchedule& schedule) {
    const std::vector<int> hops_by_branch = branch_depths(network, bibc);

    ordered_json doc;
    doc["format"] = "gridpeak-schedule/1";
    doc["case"] = to_string(schedule.mode);
    doc["seed"] = schedule.seed;
    doc["demand_factor"] = config.demand_factor;
    doc["base_current_a"] = network.base_current_a;
    doc["inputs"] = {
        {"network", {{"path", fs::path(config.network_path).filename().string()},
                     {"fingerprint", in.net_fp}}},
        {"weather", {{"path", fs::path(config.weather_path).filename().string()},
                     {"fingerprint", in.weather_fp}}},
        {"prices", {{"path", fs::path(config.prices_path).filename().string()},
                    {"fingerprint", in.prices_fp}}},
    };
    ordered_json hours_list = ordered_json::array();
    for (const HourRecord& rec : schedule.hours) hours_list.push_back(rec.hour);
    doc["event_hours"] = std::move(hours_list);

    ordered_json branches = ordered_json::array();
    for (std::size_t b = 0; b < network.branches.size(); ++b) {
        const Branch& br = network.branches[b];
        branches.push_back({{"id", br.id},
                            {"from", br.from_bus},
                            {"to", br.to_bus},
                            {"hops", hops_by_branch[b]},
                            {"static_rating_a", br.static_rating_a}});
    }
    doc["branches"] = std::move(branches);

    ordered_json hours = ordered_json::array();
    for (const HourRecord& rec : schedule.hours) {
        ordered_json curtailment = ordered_json::array();
        for (std::size_t l = 0; l < network.loads.size(); ++l) {
            if (!network.loads[l].curtailable) continue;
            const double chi = rec.chi[l];
            const double shed = chi * network.loads[l].baseline_p_kw[static_cast<std::size_t>(rec.hour)];
            curtailment.push_back({{"bus", network.loads[l].bus},
                                   {"chi", chi},
                                   {"curtailed_kw", shed}});
        }
        ordered_json ratings = ordered_json::array();
        for (double r : rec.ratings_a) ratings.push_back(r);
        hours.push_back({{"hour", rec.hour},
                         {"v_sub_pu", rec.v_sub_pu},
                         {"purchased_kw", rec.purchased_kw},
                         {"loss_kw", rec.loss_kw},
                         {"energy_cost_usd", rec.energy_cost_usd},
                         {"curtailment_cost_usd", rec.curtailment_cost_usd},
                         {"total_cost_usd", rec.total_cost_usd},
                         {"curtailed_kw", rec.curtailed_kw},
                         {"feasible", rec.feasible},
                         {"curtailment", std::move(curtailment)},
                         {"ratings_a", std::move(ratings)},
                         {"flow", flow_dump(network, bibc, rec.flow)}});
    }
    doc["hours"] = std::move(hours);
    doc["totals"] = {{"cost_usd", schedule.total_cost_usd},
                     {"energy_cost_usd", schedule.total_energy_cost_usd},
                     {"curtailment_cost_usd", schedule.total_curtailment_cost_usd},
                     {"curtailed_kwh", schedule.total_curtailed_kwh},
                     {"purchased_kwh", schedule.total_purchased_kwh},
                     {"all_feasible", schedule.all_feasible}};
    write_text(dir / "schedule.json", doc.dump(2) + "\n");
}

void write_run_csvs(const fs::path& dir, const RadialNetwork& network,
                    const BibcMatrix& bibc, const EventSchedule& schedule) {
    std::ostringstream costs;
    costs << "hour,purchased_kw,loss_kw,energy_cost_usd,curtailment_cost_usd,total_cost_usd\n";
    for (const HourRecord& rec : schedule.hours) {
        costs << rec.hour << ',' << fixed(rec.purchased_kw, 3) << ','
              << fixed(rec.loss_kw, 3) << ',' << fixed(rec.energy_cost_usd, 2) << ','
              << fixed(rec.curtailment_cost_usd, 2) << ',' << fixed(rec.total_cost_usd, 2)
              << '\n';
    }
    write_text(dir / "costs.csv", costs.str());

    std::ostringstream volts;
    volts << "hour,bus,v_pu,angle_deg\n";
    for (const HourRecord& rec : schedule.hours) {
        volts << rec.hour << ',' << network.substation()->id << ','
              << fixed(rec.v_sub_pu, 6) << ',' << fixed(0.0, 6) << '\n';
        for (int n = 0; n < bibc.nodes(); ++n) {
            const Complex v = rec.flow.bus_voltages[static_cast<std::size_t>(n)];
            volts << rec.hour << ','
                  << network.buses[static_cast<std::size_t>(bibc.node_bus[static_cast<std::size_t>(n)])].id
                  << ',' << fixed(std::abs(v), 6) << ','
                  << fixed(std::arg(v) * 180.0 / M_PI, 6) << '\n';
        }
    }
    write_text(dir / "voltages.csv", volts.str());

    std::ostringstream amps;
    amps << "hour,branch,i_a,rating_a,loading_pct\n";
    for (const HourRecord& rec : schedule.hours) {
        const std::vector<double> i_a = branch_currents_a(rec.flow, network, bibc);
        for (std::size_t b = 0; b < network.branches.size(); ++b) {
            const double rating = rec.ratings_a[b];
            const double pct = rating > 0.0 ? 100.0 * i_a[b] / rating : 0.0;
            amps << rec.hour << ',' << network.branches[b].id << ',' << fixed(i_a[b], 3)
                 << ',' << fixed(rating, 3) << ',' << fixed(pct, 2) << '\n';
        }
    }
    write_text(dir / "currents.csv", amps.str());

    std::ostringstream shed;
    shed << "hour,bus,chi,curtailed_kw\n";
    for (const HourRecord& rec : schedule.hours) {
        for (std::size_t l = 0; l < network.loads.size(); ++l) {
            if (!network.loads[l].curtailable) continue;
            const double chi = rec.chi[l];
            shed << rec.hour << ','
                 << network.loads[l].bus << ','
                 << fixed(chi, 6) << ','
                 << fixed(chi * network.loads[l].baseline_p_kw[static_cast<std::size_t>(rec.hour)], 3)
                 << '\n';
        }
    }
    write_text(dir / "curtailment.csv", shed.str());
}

} // namespace

EventSchedule run_case(const ScenarioConfig& config) {
    if (config.output_dir.empty()) throw InputError("output directory is required");
    const LoadedInputs in = load_inputs(config);
    const EventSpec event = config.resolved_event();
    SwarmConfig swarm = config.swarm;
    swarm.seed = config.seed;

    log_info("case " + to_string(event.mode) + ", hours " +
             std::to_string(config.first_hour) + "-" + std::to_string(config.last_hour) +
             ", seed " + std::to_string(swarm.seed));

    const BibcMatrix bibc = build_bibc(in.network);
    const ImpedanceMatrix imp = build_upsilon(in.network, bibc);
    const EventSchedule schedule = optimize_event(in.network, bibc, imp, in.network.loads,
                                                  event, in.prices, in.weather, swarm);

    const fs::path dir(config.output_dir);
    fs::create_directories(dir);
    write_schedule_json(dir, config, in, in.network, bibc, schedule);
    write_run_csvs(dir, in.network, bibc, schedule);
    log_info("wrote schedule and tables to " + dir.string());
    return schedule;
}

RunSummary read_run(const std::string& run_dir) {
    const fs::path path = fs::path(run_dir) / "schedule.json";
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const std::exception& e) {
        throw InputError("schedule parse error in " + path.string() + ": " + e.what());
    }
    if (doc.value("format", std::string()) != "gridpeak-schedule/1")
        throw InputError(path.string() + " is not a gridpeak schedule");

    RunSummary run;
    run.case_name = doc.at("case").get<std::string>();
    run.seed = doc.at("seed").get<std::uint64_t>();
    run.base_current_a = doc.at("base_current_a").get<double>();
    run.input_fingerprints = {
        doc.at("inputs").at("network").at("fingerprint").get<std::uint64_t>(),
        doc.at("inputs").at("weather").at("fingerprint").get<std::uint64_t>(),
        doc.at("inputs").at("prices").at("fingerprint").get<std::uint64_t>(),
    };
    for (const auto& b : doc.at("branches")) {
        RunSummary::BranchInfo info;
        info.id = b.at("id").get<int>();
        info.from = b.at("from").get<int>();
        info.to = b.at("to").get<int>();
        info.hops = b.at("hops").get<int>();
        run.branches.push_back(info);
    }
    for (const auto& rec : doc.at("hours")) {
        run.hours.push_back(rec.at("hour").get<int>());
        run.purchased_kw.push_back(rec.at("purchased_kw").get<double>());
        run.curtailed_kw.push_back(rec.at("curtailed_kw").get<double>());
        const auto& flow = rec.at("flow");
        std::vector<double> amps(run.branches.size(), 0.0);
        for (const auto& entry : flow.at("i")) {
            const int id = entry.at("section").get<int>();
            for (std::size_t b = 0; b < run.branches.size(); ++b)
                if (run.branches[b].id == id)
                    amps[b] = entry.at("mag").get<double>() * run.base_current_a;
        }
        run.branch_amps.push_back(std::move(amps));
        std::vector<double> volts;
        for (const auto& entry : flow.at("v")) {
            if (run.bus_voltage_pu.empty())
                run.voltage_bus_ids.push_back(entry.at("bus").get<int>());
            volts.push_back(entry.at("mag").get<double>());
        }
        run.bus_voltage_pu.push_back(std::move(volts));
    }
    const auto& totals = doc.at("totals");
    run.total_cost_usd = totals.at("cost_usd").get<double>();
    run.total_energy_cost_usd = totals.at("energy_cost_usd").get<double>();
    run.total_curtailment_cost_usd = totals.at("curtailment_cost_usd").get<double>();
    run.total_curtailed_kwh = totals.at("curtailed_kwh").get<double>();
    run.total_purchased_kwh = totals.at("purchased_kwh").get<double>();
    run.all_feasible = totals.at("all_feasible").get<bool>();
    return run;
}

ComparisonReport compare_cases(const std::vector<std::string>& run_dirs,
                               const std::string& out_dir,
                               const std::vector<int>& voltage_hours) {
    if (run_dirs.empty()) throw InputError("no run directories given");
    ComparisonReport report;
    for (const std::string& dir : run_dirs) report.cases.push_back(read_run(dir));
    for (std::size_t c = 1; c < report.cases.size(); ++c) {
        if (report.cases[c].input_fingerprints != report.cases[0].input_fingerprints)
            throw InputError("runs '" + run_dirs[0] + "' and '" + run_dirs[c] +
                             "' were produced from different inputs");
        if (report.cases[c].hours != report.cases[0].hours)
            throw InputError("runs cover different event hours");
    }
    const double base_cost = report.cases[0].total_cost_usd;
    for (const RunSummary& run : report.cases) {
        const double pct =
            base_cost != 0.0 ? 100.0 * (base_cost - run.total_cost_usd) / base_cost : 0.0;
        report.cost_reduction_pct.push_back(pct);
    }

    const fs::path dir(out_dir);
    fs::create_directories(dir);

    std::ostringstream summary;
    summary << "case,total_cost_usd,energy_cost_usd,curtailment_cost_usd,"
               "curtailed_kwh,purchased_kwh,all_feasible,cost_reduction_pct\n";
    for (std::size_t c = 0; c < report.cases.size(); ++c) {
        const RunSummary& run = report.cases[c];
        summary << run.case_name << ',' << fixed(run.total_cost_usd, 2) << ','
                << fixed(run.total_energy_cost_usd, 2) << ','
                << fixed(run.total_curtailment_cost_usd, 2) << ','
                << fixed(run.total_curtailed_kwh, 3) << ','
                << fixed(run.total_purchased_kwh, 3) << ','
                << (run.all_feasible ? "true" : "false") << ','
                << fixed(report.cost_reduction_pct[c], 3) << '\n';
    }
    write_text(dir / "summary.csv", summary.str());

    auto by_hour_table = [&](auto getter) {
        std::ostringstream out;
        out << "hour";
        for (const RunSummary& run : report.cases) out << ',' << run.case_name;
        out << '\n';
        for (std::size_t h = 0; h < report.cases[0].hours.size(); ++h) {
            out << report.cases[0].hours[h];
            for (const RunSummary& run : report.cases) out << ',' << fixed(getter(run, h), 3);
            out << '\n';
        }
        return out.str();
    };
    write_text(dir / "purchased_by_hour.csv",
               by_hour_table([](const RunSummary& r, std::size_t h) { return r.purchased_kw[h]; }));
    write_text(dir / "curtailed_by_hour.csv",
               by_hour_table([](const RunSummary& r, std::size_t h) { return r.curtailed_kw[h]; }));

    const auto& hours = report.cases[0].hours;
    std::vector<int> table_hours;
    for (int hour : voltage_hours) {
        if (std::find(hours.begin(), hours.end(), hour) != hours.end())
            table_hours.push_back(hour);
    }
    // a window missing every requested hour still gets one voltage table
    if (table_hours.empty() && !hours.empty()) table_hours.push_back(hours.front());
    for (int hour : table_hours) {
        const auto it = std::find(hours.begin(), hours.end(), hour);
        const std::size_t h = static_cast<std::size_t>(it - hours.begin());
        std::ostringstream out;
        out << "bus";
        for (const RunSummary& run : report.cases) out << ',' << run.case_name;
        out << '\n';
        const RunSummary& first = report.cases[0];
        for (std::size_t n = 0; n < first.voltage_bus_ids.size(); ++n) {
            out << first.voltage_bus_ids[n];
            for (const RunSummary& run : report.cases)
                out << ',' << fixed(run.bus_voltage_pu[h][n], 6);
            out << '\n';
        }
        write_text(dir / ("voltages_h" + std::to_string(hour) + ".csv"), out.str());
    }
    return report;
}

std::vector<SweepEntry> demand_factor_sweep(const ScenarioConfig& config,
                                            const std::vector<double>& factors) {
    if (factors.empty()) throw InputError("no demand factors given");
    const RadialNetwork base = load_network(config.network_path);
    const EventSpec event = config.resolved_event();
    event.validate();
    const BibcMatrix bibc = build_bibc(base);
    const ImpedanceMatrix imp = build_upsilon(base, bibc);
    const FeasibilityTolerances tol{};

    std::vector<SweepEntry> entries;
    for (const double factor : factors) {
        if (factor <= 0.0) throw InputError("demand factor must be positive");
        RadialNetwork net = base;
        for (auto& load : net.loads) {
            for (auto& p : load.baseline_p_kw) p *= factor;
            for (auto& q : load.baseline_q_kvar) q *= factor;
        }
        const std::vector<double> chi(net.loads.size(), 0.0);

        auto hour_ok = [&](double v_sub, int hour) {
            const PowerFlowResult flow =
                solve(net, bibc, imp, net.loads, chi, v_sub, hour, SolveOptions{});
            if (!flow.converged()) return false;
            for (const Complex& v : flow.bus_voltages) {
                const double mag = std::abs(v);
                if (mag < event.v_min_pu - tol.voltage_pu) return false;
                if (mag > event.v_max_pu + tol.voltage_pu) return false;
            }
            const std::vector<double> amps = branch_currents_a(flow, net, bibc);
            for (std::size_t b = 0; b < net.branches.size(); ++b)
                if (amps[b] > net.branches[b].static_rating_a + tol.current_a) return false;
            return true;
        };
        auto feasible_at = [&](double v_sub) {
            for (int hour : event.hours)
                if (!hour_ok(v_sub, hour)) return false;
            return true;
        };

        SweepEntry entry;
        entry.factor = factor;
        const double lo = event.v_sub_min_pu;
        const double hi = event.v_sub_max_pu;
        const double step = 0.005;
        double first_good = std::nan("");
        for (double v = lo; v <= hi + 1e-12; v += step) {
            const double point = std::min(v, hi);
            if (feasible_at(point)) {
                first_good = point;
                break;
            }
        }
        if (std::isnan(first_good) && feasible_at(hi)) first_good = hi;
        if (std::isnan(first_good)) {
            entry.feasible = false;
            entry.min_v_sub_pu = 0.0;
        } else {
            entry.feasible = true;
            double good = first_good;
            double bad = first_good - step;
            if (bad < lo) {
                entry.min_v_sub_pu = good; // window floor itself is feasible
            } else {
                while (good - bad > 1e-4) {
                    const double mid = 0.5 * (good + bad);
                    if (feasible_at(mid))
                        good = mid;
                    else
                        bad = mid;
                }
                entry.min_v_sub_pu = good;
            }
        }
        entries.push_back(entry);
        log_info("sweep factor " + fixed(factor, 3) + " -> " +
                 (entry.feasible ? fixed(entry.min_v_sub_pu, 4) : std::string("infeasible")));
    }

    if (!config.output_dir.empty()) {
        fs::create_directories(config.output_dir);
        std::ostringstream out;
        out << "factor,min_v_sub_pu,feasible\n";
        for (const SweepEntry& e : entries)
            out << fixed(e.factor, 3) << ',' << (e.feasible ? fixed(e.min_v_sub_pu, 4) : "")
                << ',' << (e.feasible ? "true" : "false") << '\n';
        write_text(fs::path(config.output_dir) / "sweep.csv", out.str());
    }
    return entries;
}

std::vector<CurrentChangeRow> current_change_map(const std::string& baseline_dir,
                                                 const std::string& case_dir) {
    const RunSummary base = read_run(baseline_dir);
    const RunSummary cmp = read_run(case_dir);
    if (base.input_fingerprints[0] != cmp.input_fingerprints[0])
        throw InputError("runs use different networks");
    if (base.branches.size() != cmp.branches.size())
        throw InputError("runs list different branch sets");

    std::vector<std::pair<std::size_t, std::size_t>> common; // hour idx in base, in cmp
    for (std::size_t hb = 0; hb < base.hours.size(); ++hb) {
        const auto it = std::find(cmp.hours.begin(), cmp.hours.end(), base.hours[hb]);
        if (it != cmp.hours.end())
            common.emplace_back(hb, static_cast<std::size_t>(it - cmp.hours.begin()));
    }
    if (common.empty()) throw InputError("runs share no event hours");

    std::vector<CurrentChangeRow> rows;
    for (std::size_t b = 0; b < base.branches.size(); ++b) {
        CurrentChangeRow row;
        row.branch_id = base.branches[b].id;
        row.from = base.branches[b].from;
        row.to = base.branches[b].to;
        row.hops = base.branches[b].hops;
        double best = -std::numeric_limits<double>::infinity();
        double sum = 0.0;
        for (const auto& [hb, hc] : common) {
            const double i0 = base.branch_amps[hb][b];
            const double i1 = cmp.branch_amps[hc][b];
            const double rel = i0 > 1e-9 ? (i1 - i0) / i0 : 0.0;
            best = std::max(best, rel);
            sum += rel;
        }
        row.rel_change_max = best;
        row.rel_change_mean = sum / static_cast<double>(common.size());
        rows.push_back(row);
    }

    std::ostringstream out;
    out << "branch,from,to,hops,rel_change_max,rel_change_mean\n";
    for (const CurrentChangeRow& row : rows)
        out << row.branch_id << ',' << row.from << ',' << row.to << ',' << row.hops << ','
            << fixed(row.rel_change_max, 6) << ',' << fixed(row.rel_change_mean, 6) << '\n';
    write_text(fs::path(case_dir) / "current_change.csv", out.str());
    return rows;
}

} // namespace gridpeak
