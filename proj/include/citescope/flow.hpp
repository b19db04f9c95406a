#pragma once

#include <vector>

#include "citescope/graph.hpp"

namespace citescope {

// Stationary visit rates of the teleporting random surfer.
struct FlowDistribution {
    std::vector<double> visit_rate;  // sums to 1
    double teleport_prob = 0.15;
    double residual = 0.0;  // L1 change of the final iteration
    int iterations = 0;
};

struct FlowOptions {
    double teleport_prob = 0.15;
    double tol = 1e-12;
    int max_iter = 100000;
};

// Power iteration: with probability (1 - tau) follow a uniform out-edge
// (dangling nodes teleport uniformly), with probability tau teleport
// uniformly. Throws ConvergenceError if tol is not reached in max_iter.
FlowDistribution visit_rates(const CitationGraph& graph, const FlowOptions& opts = {});

namespace reference {
// Serial implementation kept for testing the OpenMP kernel against.
FlowDistribution visit_rates_serial(const CitationGraph& graph, const FlowOptions& opts = {});
}  // namespace reference

}  // namespace citescope
