#include "gridpeak/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gridpeak/errors.hpp"
#include "gridpeak/rng.hpp"

namespace gridpeak {

std::string to_string(CaseMode mode) {
    switch (mode) {
        case CaseMode::curtail_only: return "static";
        case CaseMode::cvr: return "cvr";
        case CaseMode::cvr_dtr: return "cvr-dtr";
    }
    return "static";
}

CaseMode parse_case_mode(const std::string& s) {
    if (s == "static") return CaseMode::curtail_only;
    if (s == "cvr") return CaseMode::cvr;
    if (s == "cvr-dtr" || s == "cvr_dtr") return CaseMode::cvr_dtr;
    throw InputError("unknown case mode '" + s + "', expected static|cvr|cvr-dtr");
}

void EventSpec::validate() const {
    if (hours.empty()) throw std::invalid_argument("event has no hours");
    for (std::size_t i = 0; i < hours.size(); ++i) {
        if (hours[i] < 0 || hours[i] > 23) throw std::invalid_argument("event hour outside [0, 23]");
        if (i > 0 && hours[i] <= hours[i - 1]) {
            throw std::invalid_argument("event hours must be strictly ascending");
        }
    }
    if (!(v_min_pu < v_max_pu)) throw std::invalid_argument("voltage bounds inverted");
    if (!(v_sub_min_pu <= v_sub_max_pu)) throw std::invalid_argument("substation bounds inverted");
    if (!(v_sub_min_pu >= 0.85 && v_sub_max_pu <= 1.10)) {
        throw std::invalid_argument("substation bounds outside the solver domain [0.85, 1.10]");
    }
    if (!(nominal_v_sub_pu >= 0.85 && nominal_v_sub_pu <= 1.10)) {
        throw std::invalid_argument("nominal substation voltage outside [0.85, 1.10]");
    }
    if (!(max_curtailment >= 0.0 && max_curtailment <= 1.0)) {
        throw std::invalid_argument("curtailment cap outside [0, 1]");
    }
}

void SwarmConfig::validate() const {
    if (particles < 2) throw std::invalid_argument("swarm needs at least 2 particles");
    if (iterations < 1) throw std::invalid_argument("swarm needs at least 1 iteration");
    for (double w : {inertia_start, inertia_end}) {
        if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("inertia outside [0, 1]");
    }
    if (c1 < 0.0 || c2 < 0.0) throw std::invalid_argument("acceleration constants must be non-negative");
    if (!(velocity_clamp > 0.0)) throw std::invalid_argument("velocity clamp must be positive");
    if (divergence_penalty <= 0.0) throw std::invalid_argument("divergence penalty must be positive");
}

bool is_feasible(const Violations& v, const FeasibilityTolerances& tol) {
    return !v.diverged && v.voltage_pu <= tol.voltage_pu && v.current_a <= tol.current_a &&
           v.curtailment <= tol.curtailment;
}

int HourProblem::dimensions() const {
    const int chi_dims = static_cast<int>(curtailable.size());
    return event->mode == CaseMode::curtail_only ? chi_dims : chi_dims + 1;
}

Box HourProblem::box() const {
    const int n = dimensions();
    Box b;
    b.lo.resize(n);
    b.hi.resize(n);
    int d = 0;
    if (event->mode != CaseMode::curtail_only) {
        b.lo(d) = event->v_sub_min_pu;
        b.hi(d) = event->v_sub_max_pu;
        ++d;
    }
    for (; d < n; ++d) {
        b.lo(d) = 0.0;
        b.hi(d) = event->max_curtailment;
    }
    return b;
}

HourProblem make_hour_problem(const RadialNetwork& network, const BibcMatrix& bibc,
                              const ImpedanceMatrix& imp, std::span<const ZipLoad> loads,
                              const EventSpec& event, int hour, double price_usd_per_kwh,
                              Eigen::VectorXd ratings_a, double penalty_weight,
                              double divergence_penalty) {
    HourProblem p;
    p.network = &network;
    p.bibc = &bibc;
    p.imp = &imp;
    p.loads = loads;
    p.event = &event;
    p.hour = hour;
    p.price_usd_per_kwh = price_usd_per_kwh;
    p.ratings_a = std::move(ratings_a);
    for (std::size_t l = 0; l < loads.size(); ++l) {
        if (loads[l].curtailable) p.curtailable.push_back(static_cast<int>(l));
    }
    p.penalty_weight = penalty_weight;
    p.divergence_penalty = divergence_penalty;
    return p;
}

double default_penalty_weight(std::span<const ZipLoad> loads, const PriceSeries& prices) {
    double worst = 0.0;
    for (int h = 0; h < 24 && h < static_cast<int>(prices.size()); ++h) {
        double total_kw = 0.0;
        for (const auto& l : loads) total_kw += l.baseline_p_kw[static_cast<std::size_t>(h)];
        worst = std::max(worst, prices[static_cast<std::size_t>(h)] * total_kw);
    }
    return 1e4 * std::max(worst, 1.0);
}

Evaluation evaluate(const HourProblem& problem, const Eigen::VectorXd& position) {
    if (position.size() != problem.dimensions()) {
        throw std::invalid_argument("position has wrong dimension");
    }
    const EventSpec& ev = *problem.event;

    Evaluation out;
    int d = 0;
    out.v_sub_pu = ev.nominal_v_sub_pu;
    if (ev.mode != CaseMode::curtail_only) out.v_sub_pu = position(d++);

    out.chi.assign(problem.loads.size(), 0.0);
    for (std::size_t k = 0; k < problem.curtailable.size(); ++k) {
        const double raw = position(d + static_cast<Eigen::Index>(k));
        out.chi[static_cast<std::size_t>(problem.curtailable[k])] = raw;
        out.violations.curtailment += std::max(0.0, raw - ev.max_curtailment);
    }

    // The sweep itself only accepts physical inputs; report excursions on the
    // raw decision instead of letting the model throw mid-search.
    const double v_sub = std::clamp(out.v_sub_pu, 0.85, 1.10);
    std::vector<double> chi_flow = out.chi;
    for (double& c : chi_flow) c = std::clamp(c, 0.0, 1.0);

    out.flow = solve(*problem.network, *problem.bibc, *problem.imp, problem.loads, chi_flow,
                     v_sub, problem.hour);
    if (!out.flow.converged()) {
        out.violations.diverged = true;
        out.penalized = problem.divergence_penalty;
        return out;
    }

    out.energy_cost_usd = problem.price_usd_per_kwh * out.flow.purchased_kw;
    for (int idx : problem.curtailable) {
        const auto& load = problem.loads[static_cast<std::size_t>(idx)];
        out.curtailment_cost_usd += load.penalty_usd_per_kw *
                                    out.chi[static_cast<std::size_t>(idx)] *
                                    load.baseline_p_kw[static_cast<std::size_t>(problem.hour)];
    }
    out.cost_usd = out.energy_cost_usd + out.curtailment_cost_usd;

    for (Eigen::Index n = 0; n < out.flow.bus_voltages.size(); ++n) {
        const double mag = std::abs(out.flow.bus_voltages(n));
        out.violations.voltage_pu += std::max(0.0, ev.v_min_pu - mag);
        out.violations.voltage_pu += std::max(0.0, mag - ev.v_max_pu);
    }
    const auto amps = branch_currents_a(out.flow, *problem.network, *problem.bibc);
    for (std::size_t b = 0; b < amps.size(); ++b) {
        out.violations.current_a +=
            std::max(0.0, amps[b] - problem.ratings_a(static_cast<Eigen::Index>(b)));
    }

    out.penalized = out.cost_usd + problem.penalty_weight * out.violations.sum();
    return out;
}

Particle pso_update(const Particle& particle, const GlobalBest& gbest, double omega,
                    const SwarmConfig& config, const Box& box, const UniformSource& uniforms) {
    Particle next = particle;
    for (Eigen::Index d = 0; d < particle.position.size(); ++d) {
        const double r1 = uniforms(static_cast<int>(d), 0);
        const double r2 = uniforms(static_cast<int>(d), 1);
        double vel = omega * particle.velocity(d) +
                     config.c1 * r1 * (particle.best_position(d) - particle.position(d)) +
                     config.c2 * r2 * (gbest.position(d) - particle.position(d));
        const double vmax = config.velocity_clamp * (box.hi(d) - box.lo(d));
        vel = std::clamp(vel, -vmax, vmax);
        next.velocity(d) = vel;
        next.position(d) = std::clamp(particle.position(d) + vel, box.lo(d), box.hi(d));
    }
    return next;
}

HourSolution optimize_hour(const HourProblem& problem, const SwarmConfig& config) {
    config.validate();
    const int dims = problem.dimensions();
    const Box box = problem.box();
    const auto hour_tag = static_cast<std::uint64_t>(problem.hour) + 1;

    HourSolution sol;
    if (dims == 0) {
        // Nothing to decide: the hour evaluates to its single operating point.
        sol.best = evaluate(problem, Eigen::VectorXd{});
        sol.position = Eigen::VectorXd{};
        sol.trace.assign(1, sol.best.penalized);
        sol.feasible = is_feasible(sol.best.violations);
        return sol;
    }

    std::vector<Particle> swarm(static_cast<std::size_t>(config.particles));
    GlobalBest gbest;
    for (int p = 0; p < config.particles; ++p) {
        Particle& part = swarm[static_cast<std::size_t>(p)];
        part.position.resize(dims);
        for (int d = 0; d < dims; ++d) {
            const double u = uniform01(config.seed, hour_tag, 0,
                                       static_cast<std::uint64_t>(p),
                                       static_cast<std::uint64_t>(d) * 4);
            part.position(d) = box.lo(d) + u * (box.hi(d) - box.lo(d));
        }
        part.velocity = Eigen::VectorXd::Zero(dims);
        part.best_position = part.position;
        part.best_penalized = evaluate(problem, part.position).penalized;
        if (part.best_penalized < gbest.penalized) {
            gbest.penalized = part.best_penalized;
            gbest.position = part.best_position;
        }
    }
    sol.trace.push_back(gbest.penalized);

    for (int t = 0; t < config.iterations; ++t) {
        const double omega =
            config.iterations > 1
                ? config.inertia_start + (config.inertia_end - config.inertia_start) *
                                             static_cast<double>(t) /
                                             static_cast<double>(config.iterations - 1)
                : config.inertia_start;
        for (int p = 0; p < config.particles; ++p) {
            Particle& part = swarm[static_cast<std::size_t>(p)];
            const UniformSource u = [&](int dim, int which) {
                return uniform01(config.seed, hour_tag, static_cast<std::uint64_t>(t) + 1,
                                 static_cast<std::uint64_t>(p),
                                 static_cast<std::uint64_t>(dim) * 4 + 1 +
                                     static_cast<std::uint64_t>(which));
            };
            part = pso_update(part, gbest, omega, config, box, u);
            const double score = evaluate(problem, part.position).penalized;
            if (score < part.best_penalized) {
                part.best_penalized = score;
                part.best_position = part.position;
            }
        }
        // Synchronous global-best fold, particle index order, ties keep the
        // earlier particle: identical schedules for identical seeds.
        for (const auto& part : swarm) {
            if (part.best_penalized < gbest.penalized) {
                gbest.penalized = part.best_penalized;
                gbest.position = part.best_position;
            }
        }
        sol.trace.push_back(gbest.penalized);
    }

    sol.position = gbest.position;
    sol.best = evaluate(problem, gbest.position);
    sol.feasible = is_feasible(sol.best.violations);
    return sol;
}

namespace {

constexpr double kAdvanceSubStepH = 10.0 / 3600.0;

HourRecord record_from(const HourProblem& problem, const HourSolution& sol) {
    HourRecord rec;
    rec.hour = problem.hour;
    rec.v_sub_pu = sol.best.v_sub_pu;
    rec.chi = sol.best.chi;
    rec.purchased_kw = sol.best.flow.purchased_kw;
    rec.loss_kw = sol.best.flow.loss_kw;
    rec.energy_cost_usd = sol.best.energy_cost_usd;
    rec.curtailment_cost_usd = sol.best.curtailment_cost_usd;
    rec.total_cost_usd = sol.best.cost_usd;
    rec.feasible = sol.feasible;
    rec.violations = sol.best.violations;
    rec.flow = sol.best.flow;
    rec.ratings_a.assign(problem.ratings_a.data(),
                         problem.ratings_a.data() + problem.ratings_a.size());
    for (std::size_t l = 0; l < problem.loads.size(); ++l) {
        rec.curtailed_kw += rec.chi[l] *
                            problem.loads[l].baseline_p_kw[static_cast<std::size_t>(problem.hour)];
    }
    return rec;
}

} // namespace

EventSchedule optimize_event(const RadialNetwork& network, const BibcMatrix& bibc,
                             const ImpedanceMatrix& imp, std::span<const ZipLoad> loads,
                             const EventSpec& event, const PriceSeries& prices,
                             const WeatherSeries& weather, const SwarmConfig& swarm) {
    event.validate();
    swarm.validate();
    if (prices.size() < 24) throw InputError("price series must cover 24 hours");

    SwarmConfig cfg = swarm;
    if (cfg.penalty_weight <= 0.0) cfg.penalty_weight = default_penalty_weight(loads, prices);

    Eigen::VectorXd static_ratings(static_cast<Eigen::Index>(network.branches.size()));
    for (std::size_t b = 0; b < network.branches.size(); ++b) {
        static_ratings(static_cast<Eigen::Index>(b)) = network.branches[b].static_rating_a;
    }

    EventSchedule schedule;
    schedule.mode = event.mode;
    schedule.seed = cfg.seed;

    const std::vector<double> chi_zero(loads.size(), 0.0);
    const bool dtr = event.mode == CaseMode::cvr_dtr;
    if (dtr && weather.size() < 24) throw InputError("weather series must cover 24 hours");

    std::vector<ThermalComponentState> states;
    const auto baseline_currents = [&](int hour) {
        const auto flow = solve(network, bibc, imp, loads, chi_zero, event.nominal_v_sub_pu, hour);
        return branch_currents_a(flow, network, bibc);
    };

    std::size_t next_event = 0;
    const int last_hour = event.hours.back();
    for (int h = 0; h <= last_hour; ++h) {
        if (dtr && h == 0) {
            states = equilibrium_states(network, baseline_currents(0), weather[0]);
        }
        const bool is_event_hour = next_event < event.hours.size() && event.hours[next_event] == h;

        std::vector<double> realized;
        if (is_event_hour) {
            Eigen::VectorXd ratings = static_ratings;
            if (dtr) {
                const WeatherSample cert = certification_sample(weather, h);
                const WeatherSample cert_next =
                    certification_sample(weather, std::min(h + 1, 23));
                for (std::size_t b = 0; b < network.branches.size(); ++b) {
                    const auto& spec = network.branches[b].thermal;
                    ratings(static_cast<Eigen::Index>(b)) = dynamic_rating(
                        spec, states[b], cert, spec.hot_spot_limit_c - cert_next.ambient_c);
                }
            }
            const HourProblem problem =
                make_hour_problem(network, bibc, imp, loads, event, h,
                                  prices[static_cast<std::size_t>(h)], std::move(ratings),
                                  cfg.penalty_weight, cfg.divergence_penalty);
            const HourSolution sol = optimize_hour(problem, cfg);
            HourRecord rec = record_from(problem, sol);
            if (dtr) realized = branch_currents_a(sol.best.flow, network, bibc);

            schedule.total_cost_usd += rec.total_cost_usd;
            schedule.total_energy_cost_usd += rec.energy_cost_usd;
            schedule.total_curtailment_cost_usd += rec.curtailment_cost_usd;
            schedule.total_curtailed_kwh += rec.curtailed_kw;
            schedule.total_purchased_kwh += rec.purchased_kw;
            schedule.all_feasible = schedule.all_feasible && rec.feasible;
            schedule.hours.push_back(std::move(rec));
            ++next_event;
        } else if (dtr && h > 0) {
            realized = baseline_currents(h);
        }

        if (dtr && h < last_hour) {
            if (h == 0 && !is_event_hour) continue; // equilibrium already reflects hour 0
            for (std::size_t b = 0; b < network.branches.size(); ++b) {
                states[b] = simulate_hold(network.branches[b].thermal, states[b], realized[b],
                                          weather[static_cast<std::size_t>(h)], 1.0,
                                          kAdvanceSubStepH);
            }
        }
    }
    return schedule;
}

} // namespace gridpeak
