#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "citescope/flow.hpp"
#include "citescope/graph.hpp"

namespace citescope {

// Two-level map equation, in bits. Module exit flow is
//   q_m = sum over edges (u -> v) leaving m of (1 - tau) * visit(u) / outdeg(u)
//       + tau * (flow inside m) * (n - n_m) / n
// and L = q_total * H(q_m / q_total) + sum_m p_m * H({q_m, visit(i in m)} / p_m)
// with p_m = q_m + flow inside m and 0*log(0) = 0.
//
// module_of must assign every node; labels need not be contiguous.
double codelength(const CitationGraph& graph, const FlowDistribution& flow,
                  std::span<const std::uint32_t> module_of);

// Flat partition of the graph's nodes.
struct Partition {
    std::vector<std::uint32_t> module_of;  // contiguous module ids 0..module_count-1
    std::uint32_t module_count = 0;
    double codelength = 0.0;
    // Codelength after each optimizer phase of the winning trial, starting
    // from the all-singletons state. Non-increasing.
    std::vector<double> trace;
};

// Incremental move evaluation with cached module aggregates.
class MapEquationState {
public:
    MapEquationState(const CitationGraph& graph, const FlowDistribution& flow,
                     std::vector<std::uint32_t> module_of);
    ~MapEquationState();
    MapEquationState(MapEquationState&&) noexcept;
    MapEquationState& operator=(MapEquationState&&) noexcept;

    // Pass kNewModule as target to evaluate a move into a fresh module.
    static constexpr std::uint32_t kNewModule = UINT32_MAX;

    // L(after move) - L(before move); does not modify the state.
    double delta_codelength(std::uint32_t node, std::uint32_t target_module) const;
    void move(std::uint32_t node, std::uint32_t target_module);

    double codelength() const;
    std::uint32_t module_of(std::uint32_t node) const;
    std::uint32_t module_count() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct TwoLevelOptions {
    std::uint64_t seed = 42;
    int trials = 10;
    // A move is accepted only if it improves the codelength by at least this
    // many bits; phases stop below it as well.
    double min_gain = 1e-10;
};

// Louvain-style search: sweeps of best single-node moves in seed-shuffled
// order, then aggregation into super-nodes, repeated to a fixed point.
// Best of `trials` restarts; deterministic for a given seed.
Partition optimize_two_level(const CitationGraph& graph, const FlowDistribution& flow,
                             const TwoLevelOptions& opts = {});
Partition optimize_two_level(const CitationGraph& graph, const FlowDistribution& flow,
                             std::uint64_t seed, int trials);

}  // namespace citescope
