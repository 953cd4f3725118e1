#include "gridpeak/power_flow.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gridpeak {

ImpedanceMatrix build_upsilon(const RadialNetwork& network, const BibcMatrix& bibc) {
    ImpedanceMatrix imp;
    imp.zd.resize(bibc.sections());
    for (Eigen::Index r = 0; r < bibc.sections(); ++r) {
        imp.zd(r) = network.branches[static_cast<std::size_t>(bibc.section_branch[static_cast<std::size_t>(r)])]
                        .impedance_pu;
    }
    const Eigen::MatrixXcd psi = bibc.entries.cast<Complex>();
    imp.upsilon = psi.transpose() * imp.zd.asDiagonal() * psi;
    return imp;
}

namespace {

/// Complex nodal injection currents at the present voltages: I_n = (S_n/V_n)*.
Eigen::VectorXcd injection_currents(const RadialNetwork& network, const BibcMatrix& bibc,
                                    std::span<const ZipLoad> loads, std::span<const double> chi,
                                    const Eigen::VectorXcd& v, int hour) {
    Eigen::VectorXcd s = Eigen::VectorXcd::Zero(v.size());
    for (std::size_t l = 0; l < loads.size(); ++l) {
        const int col = bibc.col_of_bus(network, loads[l].bus);
        if (col < 0) {
            throw std::invalid_argument("load attached to bus " + std::to_string(loads[l].bus) +
                                        " which is not a load node");
        }
        const auto [p_kw, q_kvar] =
            effective_injection(loads[l], hour, std::abs(v(col)), chi[l]);
        s(col) += Complex(p_kw, q_kvar) / (network.base_mva * 1000.0);
    }
    Eigen::VectorXcd i = Eigen::VectorXcd::Zero(v.size());
    for (Eigen::Index n = 0; n < v.size(); ++n) {
        if (s(n) != Complex{0.0, 0.0}) i(n) = std::conj(s(n) / v(n));
    }
    return i;
}

} // namespace

PowerFlowResult solve(const RadialNetwork& network, const BibcMatrix& bibc,
                      const ImpedanceMatrix& imp, std::span<const ZipLoad> loads,
                      std::span<const double> chi, double v_sub_pu, int hour,
                      const SolveOptions& options) {
    if (!(v_sub_pu >= 0.85 && v_sub_pu <= 1.10)) {
        throw std::invalid_argument("substation voltage outside [0.85, 1.10] pu");
    }
    if (chi.size() != loads.size()) {
        throw std::invalid_argument("one curtailment fraction per load required");
    }
    if (hour < 0 || hour >= 24) {
        throw std::invalid_argument("hour outside [0, 24)");
    }

    PowerFlowResult res;
    res.v_sub_pu = v_sub_pu;
    res.status = FlowStatus::max_iterations;

    const Complex v0{v_sub_pu, 0.0};
    Eigen::VectorXcd v = Eigen::VectorXcd::Constant(bibc.nodes(), v0); // flat start
    Eigen::VectorXcd inj = Eigen::VectorXcd::Zero(bibc.nodes());

    for (int it = 1; it <= options.max_iterations; ++it) {
        res.iterations = it;
        inj = injection_currents(network, bibc, loads, chi, v, hour);
        Eigen::VectorXcd v_next =
            Eigen::VectorXcd::Constant(bibc.nodes(), v0) - imp.upsilon * inj;

        bool collapsed = false;
        for (Eigen::Index n = 0; n < v_next.size(); ++n) {
            if (std::abs(v_next(n)) < options.collapse_floor_pu) collapsed = true;
        }
        const double delta = (v_next - v).cwiseAbs().maxCoeff();
        v = std::move(v_next);
        if (collapsed) {
            res.status = FlowStatus::collapsed;
            break;
        }
        if (delta < options.tolerance_pu) {
            res.status = FlowStatus::converged;
            break;
        }
    }

    res.bus_voltages = v;
    inj = injection_currents(network, bibc, loads, chi, v, hour);
    res.section_currents = bibc.entries.cast<Complex>() * inj;

    for (Eigen::Index r = 0; r < bibc.sections(); ++r) {
        const auto& br = network.branches[static_cast<std::size_t>(
            bibc.section_branch[static_cast<std::size_t>(r)])];
        if (br.conductor == ConductorClass::transformer) {
            res.transformer_current_pu = std::abs(res.section_currents(r));
            break;
        }
    }
    res.loss_kw = compute_loss(res, network);

    double served_kw = 0.0;
    for (std::size_t l = 0; l < loads.size(); ++l) {
        const int col = bibc.col_of_bus(network, loads[l].bus);
        served_kw += (1.0 - chi[l]) * zip_active(loads[l], hour, std::abs(v(col)));
    }
    res.purchased_kw = served_kw + res.loss_kw;
    return res;
}

double compute_loss(const PowerFlowResult& result, const RadialNetwork& network) {
    // Sections follow ascending branch id, the order build_bibc assigned rows.
    std::vector<std::size_t> order(network.branches.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return network.branches[a].id < network.branches[b].id;
    });
    double loss_pu = 0.0;
    for (Eigen::Index r = 0; r < result.section_currents.size(); ++r) {
        const double i_mag = std::abs(result.section_currents(r));
        loss_pu += network.branches[order[static_cast<std::size_t>(r)]].impedance_pu.real() *
                   i_mag * i_mag;
    }
    return loss_pu * network.base_mva * 1000.0;
}

std::vector<double> branch_currents_a(const PowerFlowResult& result,
                                      const RadialNetwork& network,
                                      const BibcMatrix& bibc) {
    std::vector<double> amps(network.branches.size(), 0.0);
    for (Eigen::Index r = 0; r < result.section_currents.size(); ++r) {
        amps[static_cast<std::size_t>(bibc.section_branch[static_cast<std::size_t>(r)])] =
            std::abs(result.section_currents(r)) * network.base_current_a;
    }
    return amps;
}

} // namespace gridpeak
