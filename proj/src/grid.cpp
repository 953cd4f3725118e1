#include "gridpeak/grid.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace gridpeak {

int RadialNetwork::bus_index(int id) const {
    for (std::size_t i = 0; i < buses.size(); ++i) {
        if (buses[i].id == id) return static_cast<int>(i);
    }
    return -1;
}

const Bus* RadialNetwork::substation() const {
    for (const auto& b : buses) {
        if (b.kind == BusKind::substation) return &b;
    }
    return nullptr;
}

Eigen::MatrixXi RadialNetwork::adjacency_matrix() const {
    const auto n = static_cast<Eigen::Index>(buses.size());
    Eigen::MatrixXi a = Eigen::MatrixXi::Zero(n, n);
    for (const auto& br : branches) {
        const int i = bus_index(br.from_bus);
        const int j = bus_index(br.to_bus);
        if (i < 0 || j < 0) continue; // validate_radial reports these
        a(i, j) = 1;
        a(j, i) = 1;
    }
    return a;
}

std::string ValidationReport::to_string() const {
    std::string out;
    for (const auto& issue : issues) {
        out += issue.kind + ": " + issue.detail + "\n";
    }
    return out;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            x = parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[static_cast<std::size_t>(a)] = b;
        return true;
    }
};

} // namespace

ValidationReport validate_radial(const RadialNetwork& network) {
    ValidationReport report;
    auto add = [&](std::string kind, std::string detail) {
        report.issues.push_back({std::move(kind), std::move(detail)});
    };

    for (std::size_t i = 0; i < network.buses.size(); ++i) {
        for (std::size_t j = i + 1; j < network.buses.size(); ++j) {
            if (network.buses[i].id == network.buses[j].id) {
                add("duplicate-id", "bus id " + std::to_string(network.buses[i].id) + " repeats");
            }
        }
    }
    for (std::size_t i = 0; i < network.branches.size(); ++i) {
        for (std::size_t j = i + 1; j < network.branches.size(); ++j) {
            if (network.branches[i].id == network.branches[j].id) {
                add("duplicate-id", "branch id " + std::to_string(network.branches[i].id) + " repeats");
            }
        }
    }

    int substations = 0;
    for (const auto& b : network.buses) {
        if (b.kind == BusKind::substation) ++substations;
    }
    if (substations == 0) add("no-substation", "network has no substation bus");
    if (substations > 1) add("multiple-substations", std::to_string(substations) + " substation buses");

    bool endpoints_ok = true;
    for (const auto& br : network.branches) {
        if (br.from_bus == br.to_bus) {
            add("cycle", "branch " + std::to_string(br.id) + " is a self-loop");
            endpoints_ok = false;
        }
        for (int end : {br.from_bus, br.to_bus}) {
            if (network.bus_index(end) < 0) {
                add("unknown-bus", "branch " + std::to_string(br.id) +
                                       " references bus " + std::to_string(end));
                endpoints_ok = false;
            }
        }
    }
    if (!endpoints_ok) return report; // graph checks below need resolvable endpoints

    UnionFind uf(network.buses.size());
    for (const auto& br : network.branches) {
        const int i = network.bus_index(br.from_bus);
        const int j = network.bus_index(br.to_bus);
        if (i < 0 || j < 0 || i == j) continue;
        if (!uf.unite(i, j)) {
            add("cycle", "branch " + std::to_string(br.id) + " closes a loop");
        }
    }
    const Bus* sub = network.substation();
    if (sub != nullptr) {
        const int root = uf.find(network.bus_index(sub->id));
        for (std::size_t i = 0; i < network.buses.size(); ++i) {
            if (network.buses[i].kind == BusKind::substation) continue;
            if (uf.find(static_cast<int>(i)) != root) {
                add("disconnected", "bus " + std::to_string(network.buses[i].id) +
                                        " unreachable from the substation");
            }
        }
    }
    return report;
}

BibcMatrix build_bibc(const RadialNetwork& network) {
    const auto report = validate_radial(network);
    if (!report.ok()) {
        throw std::invalid_argument("network is not a valid radial system:\n" + report.to_string());
    }

    const std::size_t n_bus = network.buses.size();
    const std::size_t n_sec = network.branches.size();

    BibcMatrix bibc;
    bibc.section_branch.resize(n_sec);
    std::iota(bibc.section_branch.begin(), bibc.section_branch.end(), 0);
    std::sort(bibc.section_branch.begin(), bibc.section_branch.end(), [&](int a, int b) {
        return network.branches[static_cast<std::size_t>(a)].id <
               network.branches[static_cast<std::size_t>(b)].id;
    });
    std::vector<int> row_of_branch(n_sec);
    for (std::size_t r = 0; r < n_sec; ++r) {
        row_of_branch[static_cast<std::size_t>(bibc.section_branch[r])] = static_cast<int>(r);
    }

    std::vector<int> col_of_bus_idx(n_bus, -1);
    for (std::size_t i = 0; i < n_bus; ++i) {
        if (network.buses[i].kind != BusKind::substation) bibc.node_bus.push_back(static_cast<int>(i));
    }
    std::sort(bibc.node_bus.begin(), bibc.node_bus.end(), [&](int a, int b) {
        return network.buses[static_cast<std::size_t>(a)].id <
               network.buses[static_cast<std::size_t>(b)].id;
    });
    for (std::size_t c = 0; c < bibc.node_bus.size(); ++c) {
        col_of_bus_idx[static_cast<std::size_t>(bibc.node_bus[c])] = static_cast<int>(c);
    }

    bibc.entries = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(n_sec),
                                         static_cast<Eigen::Index>(bibc.node_bus.size()));

    // Leaf stripping. Each node carries the set of incidence columns served
    // through it; removing a leaf writes that set into the row of the section
    // that connected it and folds the set into the leaf's neighbour.
    struct Edge {
        int other;
        int branch;
    };
    std::vector<std::vector<Edge>> adj(n_bus);
    for (std::size_t b = 0; b < n_sec; ++b) {
        const int i = network.bus_index(network.branches[b].from_bus);
        const int j = network.bus_index(network.branches[b].to_bus);
        adj[static_cast<std::size_t>(i)].push_back({j, static_cast<int>(b)});
        adj[static_cast<std::size_t>(j)].push_back({i, static_cast<int>(b)});
    }
    std::vector<int> degree(n_bus, 0);
    std::vector<bool> alive(n_bus, true);
    std::vector<std::vector<int>> served(n_bus);
    for (std::size_t i = 0; i < n_bus; ++i) {
        degree[i] = static_cast<int>(adj[i].size());
        if (col_of_bus_idx[i] >= 0) served[i] = {col_of_bus_idx[i]};
    }
    const std::size_t sub_idx = static_cast<std::size_t>(network.bus_index(network.substation()->id));

    while (true) {
        std::vector<std::size_t> leaves;
        for (std::size_t i = 0; i < n_bus; ++i) {
            if (alive[i] && i != sub_idx && degree[i] == 1) leaves.push_back(i);
        }
        if (leaves.empty()) break;
        for (std::size_t leaf : leaves) {
            const Edge* up = nullptr;
            for (const auto& e : adj[leaf]) {
                if (alive[static_cast<std::size_t>(e.other)]) {
                    up = &e;
                    break;
                }
            }
            const int row = row_of_branch[static_cast<std::size_t>(up->branch)];
            for (int col : served[leaf]) bibc.entries(row, col) = 1;
            auto& parent_set = served[static_cast<std::size_t>(up->other)];
            parent_set.insert(parent_set.end(), served[leaf].begin(), served[leaf].end());
            alive[leaf] = false;
            degree[leaf] = 0;
            --degree[static_cast<std::size_t>(up->other)];
            ++bibc.node_removals;
        }
    }
    return bibc;
}

int BibcMatrix::col_of_bus(const RadialNetwork& network, int bus_id) const {
    for (std::size_t c = 0; c < node_bus.size(); ++c) {
        if (network.buses[static_cast<std::size_t>(node_bus[c])].id == bus_id) {
            return static_cast<int>(c);
        }
    }
    return -1;
}

std::vector<int> branch_depths(const RadialNetwork& network, const BibcMatrix& bibc) {
    // Depth of a section equals how many sections its column path crosses:
    // the column sum of the downstream node restricted to that branch. Using
    // the incidence avoids a second traversal.
    std::vector<int> depth(network.branches.size(), 0);
    for (Eigen::Index r = 0; r < bibc.entries.rows(); ++r) {
        // Downstream end of section r: the node whose column has a 1 in this
        // row and whose path length (column sum) is minimal among them.
        int best = -1;
        for (Eigen::Index c = 0; c < bibc.entries.cols(); ++c) {
            if (bibc.entries(r, c) == 0) continue;
            const int len = bibc.entries.col(c).sum();
            if (best < 0 || len < best) best = len;
        }
        depth[static_cast<std::size_t>(bibc.section_branch[static_cast<std::size_t>(r)])] =
            best < 0 ? 0 : best;
    }
    return depth;
}

} // namespace gridpeak
