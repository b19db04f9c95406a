#include <doctest.h>

#include <cmath>
#include <random>

#include "citescope/errors.hpp"
#include "citescope/flow.hpp"
#include "citescope/map_equation.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace citescope;

namespace {

CitationGraph cycle_graph(std::size_t n) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return CitationGraph(testgen::node_ids(n), std::move(edges));
}

FlowDistribution uniform_flow(std::size_t n, double tau) {
    FlowDistribution f;
    f.visit_rate.assign(n, 1.0 / double(n));
    f.teleport_prob = tau;
    return f;
}

double entropy_of(const std::vector<double>& rates) {
    double h = 0.0;
    for (double r : rates)
        if (r > 0.0) h -= r * std::log2(r);
    return h;
}

}  // namespace

TEST_CASE("codelength: one module equals the entropy of the visit rates") {
    for (std::uint64_t seed : {1ull, 5ull, 9ull, 12ull}) {
        CitationGraph g = testgen::random_connected_digraph(12, 0.08, seed);
        FlowDistribution flow = visit_rates(g);
        std::vector<std::uint32_t> one(g.node_count(), 0);
        CHECK(std::fabs(codelength(g, flow, one) - entropy_of(flow.visit_rate)) < 1e-9);
    }
}

TEST_CASE("codelength: 4-cycle in one module is exactly 2 bits") {
    CitationGraph g = cycle_graph(4);
    FlowDistribution flow = uniform_flow(4, 0.0);  // tau -> 0 flow
    std::vector<std::uint32_t> one(4, 0);
    CHECK(codelength(g, flow, one) == 2.0);
}

TEST_CASE("codelength: 4-cycle split into adjacent pairs matches the frozen oracle value") {
    // independently recomputed: 0.5*H(1/2,1/2) + 2 * 0.75*H(1/3,1/3,1/3)
    const double expected = 2.877443751081734;
    CitationGraph g = cycle_graph(4);
    FlowDistribution flow = uniform_flow(4, 0.0);
    std::vector<std::uint32_t> pairs = {0, 0, 1, 1};
    CHECK(std::fabs(codelength(g, flow, pairs) - expected) < 1e-9);
    CHECK(std::fabs(oracle::codelength(4, g.edges(), flow.visit_rate, 0.0, pairs) - expected) <
          1e-12);
}

TEST_CASE("codelength: all-singletons costs at least the one-module length on the 4-cycle") {
    CitationGraph g = cycle_graph(4);
    FlowDistribution flow = uniform_flow(4, 0.0);
    std::vector<std::uint32_t> one(4, 0), singles = {0, 1, 2, 3};
    CHECK(codelength(g, flow, singles) >= codelength(g, flow, one));
}

TEST_CASE("codelength: invariant under module relabeling") {
    CitationGraph g = testgen::random_connected_digraph(10, 0.1, 3);
    FlowDistribution flow = visit_rates(g);
    std::vector<std::uint32_t> labels = {0, 1, 2, 0, 1, 2, 0, 1, 2, 0};
    std::vector<std::uint32_t> relabeled = {7, 3, 9, 7, 3, 9, 7, 3, 9, 7};
    CHECK(codelength(g, flow, labels) ==
          doctest::Approx(codelength(g, flow, relabeled)).epsilon(1e-14));
}

TEST_CASE("codelength: matches the oracle evaluation on random partitions") {
    std::mt19937_64 rng(42);
    for (int round = 0; round < 20; ++round) {
        CitationGraph g = testgen::random_digraph(9, 0.2, 100 + round);
        FlowDistribution flow = visit_rates(g);
        std::vector<std::uint32_t> labels(g.node_count());
        for (auto& l : labels) l = rng() % 4;
        const double lib = codelength(g, flow, labels);
        const double orc = oracle::codelength(g.node_count(), g.edges(), flow.visit_rate,
                                              flow.teleport_prob, labels);
        CHECK(std::fabs(lib - orc) < 1e-12);
    }
}

TEST_CASE("codelength: a node without a module is an error") {
    CitationGraph g = cycle_graph(4);
    FlowDistribution flow = uniform_flow(4, 0.15);
    std::vector<std::uint32_t> short_assignment = {0, 0, 1};
    CHECK_THROWS_AS(codelength(g, flow, short_assignment), DataError);
    std::vector<std::uint32_t> with_hole = {0, 0, UINT32_MAX, 1};
    CHECK_THROWS_AS(codelength(g, flow, with_hole), DataError);
}

TEST_CASE("delta_codelength: moving a node to its own module is free") {
    CitationGraph g = cycle_graph(6);
    FlowDistribution flow = visit_rates(g);
    MapEquationState state(g, flow, {0, 0, 0, 1, 1, 1});
    CHECK(state.delta_codelength(2, 0) == 0.0);
    CHECK(state.delta_codelength(4, 1) == 0.0);
}

TEST_CASE("delta_codelength: matches full recomputation for random single moves") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 30; ++round) {
        CitationGraph g = testgen::random_digraph(6 + int(rng() % 10), 0.25, 500 + round);
        FlowDistribution flow = visit_rates(g);
        const std::size_t n = g.node_count();
        std::vector<std::uint32_t> labels(n);
        for (auto& l : labels) l = rng() % 3;

        MapEquationState state(g, flow, labels);
        const double before = codelength(g, flow, labels);
        CHECK(std::fabs(state.codelength() - before) < 1e-9);

        const std::uint32_t node = std::uint32_t(rng() % n);
        const std::uint32_t target = rng() % 4;  // may be an empty module
        std::vector<std::uint32_t> after_labels = labels;
        after_labels[node] = target;
        const double after = codelength(g, flow, after_labels);

        const double delta = state.delta_codelength(node, target);
        CHECK(std::fabs(delta - (after - before)) < 1e-9);
    }
}

TEST_CASE("delta_codelength: a move and its inverse cancel") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 10; ++round) {
        CitationGraph g = testgen::random_digraph(12, 0.2, 900 + round);
        FlowDistribution flow = visit_rates(g);
        std::vector<std::uint32_t> labels(g.node_count());
        for (auto& l : labels) l = rng() % 3;
        MapEquationState state(g, flow, labels);

        const std::uint32_t node = std::uint32_t(rng() % g.node_count());
        const std::uint32_t from = state.module_of(node);
        const std::uint32_t to = (from + 1) % 3;
        const double forward = state.delta_codelength(node, to);
        state.move(node, to);
        const double backward = state.delta_codelength(node, from);
        CHECK(std::fabs(forward + backward) < 1e-9);
    }
}

TEST_CASE("delta_codelength: fresh-module target equals recomputation with a new label") {
    CitationGraph g = testgen::random_digraph(8, 0.3, 77);
    FlowDistribution flow = visit_rates(g);
    std::vector<std::uint32_t> labels = {0, 0, 0, 0, 1, 1, 1, 1};
    MapEquationState state(g, flow, labels);

    std::vector<std::uint32_t> split = labels;
    split[2] = 2;
    const double expected = codelength(g, flow, split) - codelength(g, flow, labels);
    CHECK(std::fabs(state.delta_codelength(2, MapEquationState::kNewModule) - expected) < 1e-9);
}

TEST_CASE("MapEquationState: codelength stays consistent across many moves") {
    std::mt19937_64 rng(23);
    CitationGraph g = testgen::random_digraph(15, 0.15, 4);
    FlowDistribution flow = visit_rates(g);
    std::vector<std::uint32_t> labels(g.node_count(), 0);
    MapEquationState state(g, flow, labels);

    for (int step = 0; step < 200; ++step) {
        const std::uint32_t node = std::uint32_t(rng() % g.node_count());
        const std::uint32_t target = rng() % 5;
        state.move(node, target);
        labels[node] = target;
    }
    CHECK(std::fabs(state.codelength() - codelength(g, flow, labels)) < 1e-9);
    CHECK(state.module_count() >= 1);
}
