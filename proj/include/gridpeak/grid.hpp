#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gridpeak/load_model.hpp"
#include "gridpeak/thermal.hpp"

namespace gridpeak {

using Complex = std::complex<double>;

enum class BusKind { substation, load_node };
enum class ConductorClass { overhead, underground, transformer };

struct Bus {
    int id = 0;
    BusKind kind = BusKind::load_node;
    double nominal_kv = 0.0;
};

/// A series element between two buses. Transformers are branches too: the
/// feeding transformer is simply the section incident to the substation with
/// conductor class transformer, so its current falls out of the same sweep.
struct Branch {
    int id = 0;
    int from_bus = 0;
    int to_bus = 0;
    Complex impedance_pu{0.0, 0.0};
    ConductorClass conductor = ConductorClass::overhead;
    double static_rating_a = 0.0;
    ThermalLadderSpec thermal{};
};

struct RadialNetwork {
    std::vector<Bus> buses;
    std::vector<Branch> branches;
    std::vector<ZipLoad> loads;
    double base_mva = 0.0;
    double base_kv = 0.0;
    double base_current_a = 0.0;

    /// Index into buses for a bus id, -1 when absent.
    [[nodiscard]] int bus_index(int id) const;
    /// First substation bus, nullptr when none exists.
    [[nodiscard]] const Bus* substation() const;
    /// Symmetric 0/1 bus adjacency matrix in buses order.
    [[nodiscard]] Eigen::MatrixXi adjacency_matrix() const;
};

struct ValidationIssue {
    std::string kind; // "cycle", "disconnected", "duplicate-id", "no-substation", ...
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    [[nodiscard]] bool ok() const { return issues.empty(); }
    [[nodiscard]] std::string to_string() const;
};

/// Structural checks: exactly one substation, unique ids, every branch
/// endpoint known, connected, and acyclic (bus count == branch count + 1).
[[nodiscard]] ValidationReport validate_radial(const RadialNetwork& network);

/// Section-to-node incidence: entries(s, n) == 1 exactly when section s lies
/// on the unique path from the substation to load node n. Rows follow
/// ascending branch id, columns ascending bus id with the substation dropped;
/// zero-load buses keep their column so shapes stay uniform.
struct BibcMatrix {
    Eigen::MatrixXi entries;
    std::vector<int> section_branch; // row -> index into network.branches
    std::vector<int> node_bus;       // col -> index into network.buses
    int node_removals = 0;           // leaf-stripping iterations, equals rows()

    [[nodiscard]] Eigen::Index sections() const { return entries.rows(); }
    [[nodiscard]] Eigen::Index nodes() const { return entries.cols(); }
    /// Column for a bus id, -1 for the substation or unknown ids.
    [[nodiscard]] int col_of_bus(const RadialNetwork& network, int bus_id) const;
};

/// Build the incidence by repeatedly stripping leaf nodes: each removed leaf
/// finalises one section row as the leaf's accumulated downstream node set.
/// Requires a network that validate_radial accepts; throws
/// std::invalid_argument otherwise.
[[nodiscard]] BibcMatrix build_bibc(const RadialNetwork& network);

/// Hop count of each branch's downstream end from the substation, in
/// network.branches order. The root section has depth 1.
[[nodiscard]] std::vector<int> branch_depths(const RadialNetwork& network,
                                             const BibcMatrix& bibc);

} // namespace gridpeak
