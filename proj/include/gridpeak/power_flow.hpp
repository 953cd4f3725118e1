#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gridpeak/grid.hpp"

namespace gridpeak {

/// Diagonal branch impedances in section order plus the assembled
/// node-voltage sensitivity: upsilon = bibc^T * diag(zd) * bibc.
struct ImpedanceMatrix {
    Eigen::VectorXcd zd;
    Eigen::MatrixXcd upsilon;
};

[[nodiscard]] ImpedanceMatrix build_upsilon(const RadialNetwork& network,
                                            const BibcMatrix& bibc);

enum class FlowStatus { converged, max_iterations, collapsed };

struct PowerFlowResult {
    Eigen::VectorXcd bus_voltages;     // load nodes, bibc column order, per unit
    Eigen::VectorXcd section_currents; // bibc row order, per unit
    double v_sub_pu = 1.0;
    double transformer_current_pu = 0.0; // magnitude through the transformer section
    double loss_kw = 0.0;
    double purchased_kw = 0.0;           // served load plus loss
    int iterations = 0;
    FlowStatus status = FlowStatus::converged;

    [[nodiscard]] bool converged() const { return status == FlowStatus::converged; }
};

struct SolveOptions {
    double tolerance_pu = 1e-9;
    int max_iterations = 100;
    double collapse_floor_pu = 0.5; // any |V| below this aborts the sweep
};

/// Fixed-point sweep from a flat start: evaluate ZIP injections at the
/// present voltages, then V = v_sub - upsilon * I until the largest voltage
/// change falls under the tolerance. Divergence is reported in the status,
/// never thrown. chi holds one curtailment fraction per entry of `loads`.
[[nodiscard]] PowerFlowResult solve(const RadialNetwork& network,
                                    const BibcMatrix& bibc,
                                    const ImpedanceMatrix& imp,
                                    std::span<const ZipLoad> loads,
                                    std::span<const double> chi,
                                    double v_sub_pu,
                                    int hour,
                                    const SolveOptions& options = {});

/// Series losses in kW: base power times sum of r_s |I_s|^2 over sections.
[[nodiscard]] double compute_loss(const PowerFlowResult& result, const RadialNetwork& network);

/// Branch current magnitudes in amperes, network.branches order.
[[nodiscard]] std::vector<double> branch_currents_a(const PowerFlowResult& result,
                                                    const RadialNetwork& network,
                                                    const BibcMatrix& bibc);

} // namespace gridpeak
