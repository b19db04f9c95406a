#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace citescope::detail {

// Boundary-aware re-optimization of one module's interior: node flows stay at
// the parent scale, edge flow leaving the module is charged to its node as a
// fixed exit bonus, and the teleportation exit uses the parent graph's node
// count. The single-module partition then costs exactly the module's own
// contribution to the parent two-level codelength.
struct SubProblem {
    std::vector<double> flow;        // parent visit rates of the member nodes
    std::vector<double> exit_bonus;  // per node, flow on edges leaving the module
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // internal, local indices
    std::vector<double> edge_flow;
    double tau = 0.15;
    std::uint64_t parent_node_count = 0;
};

struct SubResult {
    std::vector<std::uint32_t> module_of;
    std::uint32_t module_count = 0;
    double codelength = 0.0;
};

SubResult optimize_subproblem(const SubProblem& sub, std::uint64_t seed, int trials,
                              double min_gain);

}  // namespace citescope::detail
