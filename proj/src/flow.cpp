#include "citescope/flow.hpp"

#include <cmath>
#include <string>

#include "citescope/errors.hpp"
#include "citescope/parallel.hpp"

namespace citescope {

namespace {

void check_options(const FlowOptions& opts) {
    if (!(opts.teleport_prob > 0.0 && opts.teleport_prob < 1.0))
        throw DataError("teleport probability must be in (0,1)");
    if (!(opts.tol > 0.0)) throw DataError("tolerance must be positive");
    if (opts.max_iter < 1) throw DataError("max_iter must be at least 1");
}

}  // namespace

FlowDistribution visit_rates(const CitationGraph& graph, const FlowOptions& opts) {
    check_options(opts);
    const std::size_t n = graph.node_count();
    FlowDistribution flow;
    flow.teleport_prob = opts.teleport_prob;
    if (n == 0) return flow;

    const double tau = opts.teleport_prob;
    std::vector<double> rate(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n, 0.0);

    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        const double dangling = block_sum(n, [&](std::size_t u) {
            return graph.out_degree(static_cast<std::uint32_t>(u)) == 0 ? rate[u] : 0.0;
        });
        const double base = (tau + (1.0 - tau) * dangling) / static_cast<double>(n);

        // Pull form: each node accumulates from its in-neighbors in a fixed
        // order, so the result is thread-count independent.
#pragma omp parallel for schedule(static)
        for (std::int64_t vi = 0; vi < static_cast<std::int64_t>(n); ++vi) {
            const auto v = static_cast<std::uint32_t>(vi);
            double acc = base;
            for (std::uint32_t u : graph.in_neighbors(v))
                acc += (1.0 - tau) * rate[u] / static_cast<double>(graph.out_degree(u));
            next[static_cast<std::size_t>(vi)] = acc;
        }

        const double diff = block_sum(n, [&](std::size_t i) { return std::fabs(next[i] - rate[i]); });
        rate.swap(next);
        flow.residual = diff;
        flow.iterations = iter;
        if (diff < opts.tol) {
            flow.visit_rate = std::move(rate);
            return flow;
        }
    }
    throw ConvergenceError("visit_rates did not converge within " +
                               std::to_string(opts.max_iter) + " iterations (residual " +
                               std::to_string(flow.residual) + ")",
                           flow.residual);
}

namespace reference {

FlowDistribution visit_rates_serial(const CitationGraph& graph, const FlowOptions& opts) {
    check_options(opts);
    const std::size_t n = graph.node_count();
    FlowDistribution flow;
    flow.teleport_prob = opts.teleport_prob;
    if (n == 0) return flow;

    const double tau = opts.teleport_prob;
    std::vector<double> rate(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n);

    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        double dangling = 0.0;
        for (std::uint32_t u = 0; u < n; ++u)
            if (graph.out_degree(u) == 0) dangling += rate[u];
        const double base = (tau + (1.0 - tau) * dangling) / static_cast<double>(n);

        std::fill(next.begin(), next.end(), base);
        for (std::uint32_t u = 0; u < n; ++u) {
            const auto deg = graph.out_degree(u);
            if (deg == 0) continue;
            const double share = (1.0 - tau) * rate[u] / static_cast<double>(deg);
            for (std::uint32_t v : graph.out_neighbors(u)) next[v] += share;
        }

        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) diff += std::fabs(next[i] - rate[i]);
        rate.swap(next);
        flow.residual = diff;
        flow.iterations = iter;
        if (diff < opts.tol) {
            flow.visit_rate = std::move(rate);
            return flow;
        }
    }
    throw ConvergenceError("visit_rates_serial did not converge within " +
                               std::to_string(opts.max_iter) + " iterations (residual " +
                               std::to_string(flow.residual) + ")",
                           flow.residual);
}

}  // namespace reference

}  // namespace citescope
