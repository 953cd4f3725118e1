// Acceptance harness. Each criterion prints exactly one PASS/FAIL line; the
// process exits with the number of failed criteria. Tolerances are pinned
// here on purpose: loosening them is a code change, not a flag.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "gridpeak/grid.hpp"
#include "gridpeak/io.hpp"
#include "gridpeak/load_model.hpp"
#include "gridpeak/optimizer.hpp"
#include "gridpeak/power_flow.hpp"
#include "gridpeak/rng.hpp"
#include "gridpeak/scenario.hpp"
#include "gridpeak/thermal.hpp"
#include "oracle/oracles.hpp"

namespace fs = std::filesystem;
using namespace gridpeak;

namespace {

const std::string kData = GRIDPEAK_DATA_DIR;

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Check {
  public:
    void require(bool ok, const std::string& message) {
        if (ok) return;
        out_.pass = false;
        if (!out_.detail.empty()) out_.detail += "; ";
        out_.detail += message;
    }
    [[nodiscard]] const Outcome& outcome() const { return out_; }

  private:
    Outcome out_;
};

int g_failures = 0;

void run_criterion(const char* id, const char* title, double cap_s,
                   const std::function<void(Check&)>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Check check;
    try {
        body(check);
    } catch (const std::exception& e) {
        check.require(false, std::string("unexpected exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    Outcome out = check.outcome();
    if (cap_s > 0.0 && secs > cap_s) {
        out.pass = false;
        if (!out.detail.empty()) out.detail += "; ";
        out.detail += "exceeded time cap of " + std::to_string(cap_s) + " s";
    }
    std::printf("%s %s %s (%.1f s)%s%s\n", id, out.pass ? "PASS" : "FAIL", title, secs,
                out.detail.empty() ? "" : ": ", out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++g_failures;
}

std::string num(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

ThermalLadderSpec small_transformer_thermal() {
    ThermalLadderSpec spec;
    spec.model = ThermalModel::ladder;
    spec.loops = {{2.0, 0.0016}};
    spec.hot_spot_limit_c = 110.0;
    spec.dielectric_rise_k = 5.0;
    spec.conductor = {0.43, 0.004, 25.0};
    spec.hotspot_rise_k_per_w = 2e-4;
    return spec;
}

/// Source, one series element, one load. The 5 MW constant-power variant has
/// closed-form |V| = 100/101 and exactly 50 kW of series loss.
RadialNetwork two_bus_network(double p_kw, double r_pu, const ZipCoefficients& zip,
                              bool curtailable, double penalty_usd_per_kw) {
    RadialNetwork net;
    net.base_mva = 10.0;
    net.base_kv = 20.0;
    net.base_current_a = 10.0e6 / (std::sqrt(3.0) * 20.0e3);
    net.buses = {{1, BusKind::substation, 20.0}, {2, BusKind::load_node, 20.0}};
    Branch b;
    b.id = 1;
    b.from_bus = 1;
    b.to_bus = 2;
    b.impedance_pu = {r_pu, 0.0};
    b.conductor = ConductorClass::transformer;
    b.static_rating_a = 2000.0;
    b.thermal = small_transformer_thermal();
    net.branches = {b};
    ZipLoad load;
    load.bus = 2;
    load.baseline_p_kw.fill(p_kw);
    load.baseline_q_kvar.fill(0.0);
    load.zip = zip;
    load.curtailable = curtailable;
    load.penalty_usd_per_kw = penalty_usd_per_kw;
    net.loads = {load};
    return net;
}

struct Prepared {
    BibcMatrix bibc;
    ImpedanceMatrix imp;
};

Prepared prepare(const RadialNetwork& net) {
    Prepared p;
    p.bibc = build_bibc(net);
    p.imp = build_upsilon(net, p.bibc);
    return p;
}

Eigen::VectorXd nameplate_ratings(const RadialNetwork& net) {
    Eigen::VectorXd r(static_cast<Eigen::Index>(net.branches.size()));
    for (std::size_t i = 0; i < net.branches.size(); ++i)
        r[static_cast<Eigen::Index>(i)] = net.branches[i].static_rating_a;
    return r;
}

// ---------------------------------------------------------------------------

void a1_power_flow(Check& check) {
    // closed form on the exact-arithmetic two-bus case
    const RadialNetwork twobus =
        two_bus_network(5000.0, 200.0 / 10201.0, ZipCoefficients{0, 0, 1, 0, 0, 1}, false, 0.0);
    const Prepared tp = prepare(twobus);
    const std::vector<double> no_chi{0.0};
    const PowerFlowResult r =
        solve(twobus, tp.bibc, tp.imp, twobus.loads, no_chi, 1.0, 12);
    check.require(r.converged(), "two-bus sweep did not converge");
    const std::complex<double> exact =
        oracles::two_bus_voltage(1.0, {200.0 / 10201.0, 0.0}, {0.5, 0.0});
    check.require(std::abs(r.bus_voltages[0] - exact) < 1e-8,
                  "two-bus voltage differs from the closed form by " +
                      num(std::abs(r.bus_voltages[0] - exact)));
    check.require(std::abs(std::abs(r.bus_voltages[0]) - 100.0 / 101.0) < 1e-10,
                  "|V| deviates from 100/101");
    check.require(std::abs(r.loss_kw - 50.0) < 1e-9, "loss is not exactly 50 kW");

    // random feeders against an independent nodal-admittance fixed point
    double worst_v = 0.0, worst_p = 0.0;
    for (int i = 0; i < 100; ++i) {
        const int n = 3 + i % 8;
        const RadialNetwork net = oracles::random_feeder(9000 + i, n, true);
        const Prepared p = prepare(net);
        std::vector<double> chi(net.loads.size(), 0.0);
        for (std::size_t j = 0; j < chi.size(); ++j)
            if ((i + static_cast<int>(j)) % 3 == 0) chi[j] = 0.15;
        const double v_sub = (i % 3 == 0) ? 0.95 : (i % 3 == 1 ? 1.0 : 1.05);
        const int hour = i % 24;

        const PowerFlowResult lib = solve(net, p.bibc, p.imp, net.loads, chi, v_sub, hour);
        const oracles::YbusSolution ref = oracles::ybus_solve(net, chi, v_sub, hour);
        check.require(lib.converged() && ref.converged,
                      "feeder " + std::to_string(i) + " failed to converge");
        if (!lib.converged() || !ref.converged) return;

        for (Eigen::Index k = 0; k < lib.bus_voltages.size(); ++k) {
            worst_v = std::max(worst_v,
                               std::abs(lib.bus_voltages[k] -
                                        ref.voltages[static_cast<std::size_t>(k)]));
        }
        worst_p = std::max(worst_p, std::abs(lib.purchased_kw - ref.purchased_kw) /
                                        std::max(1.0, std::abs(ref.purchased_kw)));
    }
    check.require(worst_v < 1e-7,
                  "largest voltage gap vs the admittance solution is " + num(worst_v));
    check.require(worst_p < 1e-6, "largest relative purchased-power gap is " + num(worst_p));
}

void a2_incidence(Check& check) {
    int worst_tree = -1;
    for (int i = 0; i < 200; ++i) {
        const int n = 2 + (i * 7) % 49; // 2..50 buses
        const RadialNetwork net = oracles::random_feeder(33000 + i, n, false);
        const BibcMatrix bibc = build_bibc(net);
        const Eigen::MatrixXi ref = oracles::bibc_by_paths(net);
        if (bibc.entries != ref || bibc.node_removals != bibc.sections()) {
            worst_tree = i;
            break;
        }
    }
    check.require(worst_tree < 0,
                  "incidence mismatch on random tree " + std::to_string(worst_tree));
}

void a3_load_model(Check& check) {
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
        const double cz = -0.5 + 1.5 * uniform01(777, static_cast<std::uint64_t>(k), 0);
        const double ci = -0.5 + 1.5 * uniform01(777, static_cast<std::uint64_t>(k), 1);
        const double cp = 1.0 - cz - ci;
        ZipLoad load;
        load.bus = 2;
        load.baseline_p_kw.fill(100.0 + k);
        load.baseline_q_kvar.fill(30.0 + 0.5 * k);
        load.zip = {cz, ci, cp, cp, ci, cz};
        const int hour = k % 24;
        const double v = 0.85 + 0.25 * uniform01(777, static_cast<std::uint64_t>(k), 2);

        const double p_expect = (100.0 + k) * (cz * v * v + ci * v + cp);
        const double q_expect = (30.0 + 0.5 * k) * (cp * v * v + ci * v + cz);
        worst = std::max(worst, std::abs(zip_active(load, hour, v) - p_expect) /
                                    std::max(1.0, std::abs(p_expect)));
        worst = std::max(worst, std::abs(zip_reactive(load, hour, v) - q_expect) /
                                    std::max(1.0, std::abs(q_expect)));
        worst = std::max(worst, std::abs(zip_active(load, hour, 1.0) - (100.0 + k)) /
                                    (100.0 + k));
    }
    check.require(worst < 1e-12, "largest polynomial identity gap is " + num(worst));

    ZipLoad pure_z;
    pure_z.bus = 2;
    pure_z.baseline_p_kw.fill(1000.0);
    pure_z.zip = {1, 0, 0, 1, 0, 0};
    check.require(std::abs(zip_active(pure_z, 0, 0.95) - 902.5) < 1e-9,
                  "constant-impedance load at 0.95 pu is not 90.25 percent");

    bool rejected = false;
    try {
        ZipCoefficients bad{0.4, 0.4, 0.2 + 2e-9, 0, 0, 1};
        bad.validate();
    } catch (const std::invalid_argument&) {
        rejected = true;
    }
    check.require(rejected, "triple summing to 1 + 2e-9 was accepted");

    bool accepted = true;
    try {
        ZipCoefficients negative{-0.3, 0.5, 0.8, 0, 0, 1};
        negative.validate();
    } catch (const std::invalid_argument&) {
        accepted = false;
    }
    check.require(accepted, "in-band negative coefficient was rejected");
}

void a4_thermal(Check& check) {
    // one time constant = 63.2 percent of the steady rise
    ThermalLadderSpec one_loop = small_transformer_thermal();
    one_loop.conductor.alpha_per_k = 0.0; // fixed loss isolates the exponential
    one_loop.hotspot_rise_k_per_w = 0.0;
    const WeatherSample mild{20.0, 0.61, 0.0};
    const ThermalComponentState steady = equilibrium_state(one_loop, 300.0, mild);
    ThermalComponentState start;
    start.loop_rises_k = {0.0};
    start.hot_spot_c = mild.ambient_c;
    const ThermalComponentState after_tau =
        simulate_hold(one_loop, start, 300.0, mild, one_loop.loops[0].tau_h, 1.0 / 3600.0);
    const double fraction = after_tau.loop_rises_k[0] / steady.loop_rises_k[0];
    check.require(std::abs(fraction - 0.632) < 0.005,
                  "rise after one time constant is " + num(100.0 * fraction) +
                      " percent of steady");
    const double euler = oracles::euler_loop_rise(
        one_loop.loops[0].tau_h, one_loop.loops[0].t_k_per_w,
        conductor_loss_w(one_loop, 300.0, mild.ambient_c), 1.0, one_loop.loops[0].tau_h);
    check.require(std::abs(after_tau.loop_rises_k[0] - euler) / euler < 0.005,
                  "ladder and Euler integrations disagree");

    // dynamic ratings never overheat when re-simulated at one-second steps
    const RadialNetwork net = load_network(kData + "/feeder20.json");
    const std::vector<double> idle(net.branches.size(), 0.0);
    for (const char* weather_file : {"/weather_cool_windy.csv", "/weather_hot_still.csv"}) {
        const WeatherSeries weather = load_weather_csv(kData + weather_file);
        const RatingSchedule sched =
            rating_schedule(net, weather, RatingMode::dynamic_rating,
                            equilibrium_states(net, idle, weather[0]));
        double worst_excess = -1e9;
        for (std::size_t b = 0; b < net.branches.size(); ++b) {
            const ThermalLadderSpec& spec = net.branches[b].thermal;
            ThermalComponentState st = equilibrium_state(spec, 0.0, weather[0]);
            for (int h = 0; h < 24; ++h) {
                const double amp = sched.ampacity_a(static_cast<Eigen::Index>(b), h);
                check.require(amp > 0.0 && std::isfinite(amp),
                              "non-positive dynamic rating on branch " +
                                  std::to_string(net.branches[b].id));
                const WeatherSample cert = certification_sample(weather, h);
                const oracles::DenseHold dense = oracles::dense_hold(spec, st, amp, cert, 1.0);
                worst_excess = std::max(worst_excess,
                                        dense.max_hotspot_c - spec.hot_spot_limit_c);
                // advance exactly as the schedule does between hours
                st = simulate_hold(spec, st, amp, cert, 1.0, 10.0 / 3600.0);
            }
        }
        check.require(worst_excess <= 0.5,
                      std::string(weather_file).substr(1) + ": dense re-simulation exceeds " +
                          "the hot-spot limit by " + num(worst_excess) + " K");
    }

    // a cold component always has at least its steady headroom
    const WeatherSeries cool = load_weather_csv(kData + "/weather_cool_windy.csv");
    for (const Branch& branch : net.branches) {
        const ThermalComponentState cold = equilibrium_state(branch.thermal, 0.0, cool[14]);
        const double dyn = dynamic_rating(branch.thermal, cold, cool[14]);
        const double steady_amp = steady_ampacity(branch.thermal, cool[14]);
        check.require(dyn + 1e-6 >= steady_amp,
                      "cold dynamic rating below steady ampacity on branch " +
                          std::to_string(branch.id));
        if (branch.conductor == ConductorClass::transformer) {
            check.require(dyn > 1.01 * steady_amp,
                          "transformer shows no transient headroom when cold");
        }
    }

    // steady ampacity moves the right way with ambient and wind
    const ThermalLadderSpec overhead = net.branches[1].thermal;
    double prev = 1e18;
    for (const double ambient : {10.0, 25.0, 40.0, 55.0}) {
        const double amp = steady_ampacity(overhead, {ambient, 0.61, 0.0});
        check.require(amp < prev, "ampacity did not fall as ambient rose to " + num(ambient));
        prev = amp;
    }
    prev = -1.0;
    for (const double wind : {0.0, 0.61, 2.0, 5.0}) {
        const double amp = steady_ampacity(overhead, {35.0, wind, 0.0});
        check.require(amp > prev, "ampacity did not rise with wind " + num(wind));
        prev = amp;
    }
}

void a5_optimizer(Check& check) {
    // 1-D: substation setpoint only, impedance-heavy load rewards reduction
    {
        const RadialNetwork net = two_bus_network(
            4000.0, 0.05, ZipCoefficients{0.9, 0.05, 0.05, 0.8, 0.1, 0.1}, false, 0.0);
        const Prepared p = prepare(net);
        EventSpec event;
        event.hours = {18};
        event.mode = CaseMode::cvr;
        event.v_min_pu = 0.88;
        const HourProblem problem =
            make_hour_problem(net, p.bibc, p.imp, net.loads, event, 18, 0.25,
                              nameplate_ratings(net), 1e6);
        check.require(problem.dimensions() == 1, "expected a single decision dimension");

        const auto grid = oracles::exhaustive_search(
            [&](const std::vector<double>& x) {
                Eigen::VectorXd pos(1);
                pos << x[0];
                return evaluate(problem, pos).penalized;
            },
            {{event.v_sub_min_pu, event.v_sub_max_pu}}, 1e-4);
        SwarmConfig swarm;
        swarm.seed = 7;
        const HourSolution sol = optimize_hour(problem, swarm);
        const double rel = std::abs(sol.best.penalized - grid.best_cost) /
                           std::max(1e-12, std::abs(grid.best_cost));
        check.require(rel <= 0.02, "1-D swarm lands " + num(100.0 * rel) +
                                       " percent away from the exhaustive optimum");
        check.require(sol.feasible, "1-D solution infeasible");
        for (std::size_t i = 1; i < sol.trace.size(); ++i) {
            check.require(sol.trace[i] <= sol.trace[i - 1] + 1e-15,
                          "global best worsened at iteration " + std::to_string(i));
        }
    }

    // 2-D: setpoint plus curtailment with an interior curtailment optimum
    {
        const RadialNetwork net = two_bus_network(
            5000.0, 0.2, ZipCoefficients{0, 0, 1, 0, 0, 1}, true, 0.36);
        const Prepared p = prepare(net);
        EventSpec event;
        event.hours = {18};
        event.mode = CaseMode::cvr;
        event.v_min_pu = 0.80;
        event.v_sub_min_pu = 0.98;
        event.v_sub_max_pu = 1.02;
        event.max_curtailment = 0.3;
        const HourProblem problem =
            make_hour_problem(net, p.bibc, p.imp, net.loads, event, 18, 0.30,
                              nameplate_ratings(net), 1e6);
        check.require(problem.dimensions() == 2, "expected two decision dimensions");

        const auto grid = oracles::exhaustive_search(
            [&](const std::vector<double>& x) {
                Eigen::VectorXd pos(2);
                pos << x[0], x[1];
                return evaluate(problem, pos).penalized;
            },
            {{0.98, 1.02}, {0.0, 0.3}}, 1e-4);
        check.require(grid.best_x[1] > 0.02 && grid.best_x[1] < 0.28,
                      "curtailment optimum sits on the box edge, search not exercised");

        SwarmConfig swarm;
        swarm.seed = 11;
        const HourSolution sol = optimize_hour(problem, swarm);
        const double rel = std::abs(sol.best.penalized - grid.best_cost) /
                           std::max(1e-12, std::abs(grid.best_cost));
        check.require(rel <= 0.02, "2-D swarm lands " + num(100.0 * rel) +
                                       " percent away from the exhaustive optimum");

        const HourSolution again = optimize_hour(problem, swarm);
        check.require(again.trace == sol.trace &&
                          again.position.size() == sol.position.size() &&
                          std::memcmp(again.position.data(), sol.position.data(),
                                      sizeof(double) * static_cast<std::size_t>(
                                                           sol.position.size())) == 0,
                      "identical seeds produced different searches");
    }
}

void a6_case_dominance(Check& check) {
    const RadialNetwork net = load_network(kData + "/feeder20.json");
    const Prepared p = prepare(net);
    const WeatherSeries weather = load_weather_csv(kData + "/weather_cool_windy.csv");
    const PriceSeries prices = load_prices_csv(kData + "/prices_day.csv");

    EventSpec event;
    event.hours.resize(12);
    std::iota(event.hours.begin(), event.hours.end(), 10);

    const std::vector<CaseMode> modes{CaseMode::curtail_only, CaseMode::cvr,
                                      CaseMode::cvr_dtr};
    std::vector<double> mean_cost(3, 0.0), mean_curtailed(3, 0.0), mean_purchased(3, 0.0);
    const int seeds = 5;
    for (int s = 1; s <= seeds; ++s) {
        for (std::size_t m = 0; m < modes.size(); ++m) {
            EventSpec ev = event;
            ev.mode = modes[m];
            SwarmConfig swarm;
            swarm.seed = static_cast<std::uint64_t>(s);
            const EventSchedule sched =
                optimize_event(net, p.bibc, p.imp, net.loads, ev, prices, weather, swarm);
            check.require(sched.all_feasible, to_string(modes[m]) + " seed " +
                                                  std::to_string(s) + " is infeasible");
            mean_cost[m] += sched.total_cost_usd / seeds;
            mean_curtailed[m] += sched.total_curtailed_kwh / seeds;
            mean_purchased[m] += sched.total_purchased_kwh / seeds;
        }
    }
    check.require(mean_cost[1] < mean_cost[0],
                  "voltage reduction does not beat curtailment alone (" +
                      num(mean_cost[1]) + " vs " + num(mean_cost[0]) + " USD)");
    check.require(mean_cost[2] < mean_cost[1],
                  "adding dynamic ratings does not beat voltage reduction alone (" +
                      num(mean_cost[2]) + " vs " + num(mean_cost[1]) + " USD)");
    check.require(mean_curtailed[1] <= mean_curtailed[0] + 1e-6 &&
                      mean_curtailed[2] <= mean_curtailed[1] + 1e-6,
                  "curtailed energy does not shrink across the cases (" +
                      num(mean_curtailed[0]) + ", " + num(mean_curtailed[1]) + ", " +
                      num(mean_curtailed[2]) + " kWh)");
    check.require(mean_purchased[2] + 1e-6 >= mean_purchased[1],
                  "dynamic ratings should buy back curtailed load, purchased fell from " +
                      num(mean_purchased[1]) + " to " + num(mean_purchased[2]) + " kWh");
}

void a7_demand_sweep(Check& check) {
    ScenarioConfig config;
    config.network_path = kData + "/feeder20.json";
    config.first_hour = 10;
    config.last_hour = 21;
    const std::vector<double> factors{0.5, 0.7, 0.85, 0.9, 0.95};
    const auto entries = demand_factor_sweep(config, factors);
    check.require(entries.size() == factors.size(), "sweep dropped factors");
    if (entries.size() != factors.size()) return;
    for (const auto& entry : entries) {
        check.require(entry.feasible,
                      "factor " + num(entry.factor) + " found no feasible setpoint");
    }
    std::vector<double> increments;
    for (std::size_t i = 1; i < entries.size(); ++i) {
        check.require(entries[i].min_v_sub_pu + 1e-9 >= entries[i - 1].min_v_sub_pu,
                      "voltage floor fell between factors " + num(entries[i - 1].factor) +
                          " and " + num(entries[i].factor));
        increments.push_back(entries[i].min_v_sub_pu - entries[i - 1].min_v_sub_pu);
    }
    for (std::size_t i = 0; i + 1 < increments.size(); ++i) {
        check.require(increments.back() > increments[i],
                      "the last demand step is not the steepest");
    }
}

void a8_current_locality(Check& check) {
    const fs::path root = fs::temp_directory_path() / "gridpeak_acceptance_a8";
    fs::remove_all(root);
    fs::create_directories(root);

    ScenarioConfig config;
    config.network_path = kData + "/feeder20.json";
    config.weather_path = kData + "/weather_cool_windy.csv";
    config.prices_path = kData + "/prices_day.csv";
    config.first_hour = 10;
    config.last_hour = 21;
    config.seed = 1;

    config.mode = CaseMode::curtail_only;
    config.output_dir = (root / "static").string();
    (void)run_case(config);
    config.mode = CaseMode::cvr_dtr;
    config.output_dir = (root / "cvr_dtr").string();
    (void)run_case(config);

    const auto rows = current_change_map((root / "static").string(),
                                         (root / "cvr_dtr").string());
    check.require(rows.size() == 19, "expected one row per branch");
    const auto biggest =
        std::max_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
            return a.rel_change_max < b.rel_change_max;
        });
    check.require(biggest != rows.end() && biggest->rel_change_max > 0.0,
                  "no branch current increased at all");
    if (biggest != rows.end()) {
        check.require(biggest->hops <= 2,
                      "largest relative increase sits " + std::to_string(biggest->hops) +
                          " hops from the substation (branch " +
                          std::to_string(biggest->branch_id) + ")");
    }
}

} // namespace

int main() {
    run_criterion("A1", "power flow matches independent solutions", 10.0, a1_power_flow);
    run_criterion("A2", "incidence matrix matches path enumeration", 5.0, a2_incidence);
    run_criterion("A3", "polynomial load identities hold", 0.0, a3_load_model);
    run_criterion("A4", "thermal ratings are safe and monotone", 30.0, a4_thermal);
    run_criterion("A5", "swarm matches exhaustive search", 0.0, a5_optimizer);
    run_criterion("A6", "combined measures dominate in cost", 300.0, a6_case_dominance);
    run_criterion("A7", "demand sweep floors rise, steepest last", 60.0, a7_demand_sweep);
    run_criterion("A8", "current increases stay near the substation", 0.0,
                  a8_current_locality);

    if (g_failures == 0) {
        std::printf("all acceptance criteria satisfied\n");
    } else {
        std::printf("%d acceptance criteria failed\n", g_failures);
    }
    return g_failures;
}
