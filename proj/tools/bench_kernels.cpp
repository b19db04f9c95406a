// Compares the OpenMP kernels against their serial reference implementations
// on generated data and prints timings.

#include <chrono>
#include <cmath>
#include <iostream>
#include <random>
#include <vector>

#include "citescope/analytics.hpp"
#include "citescope/corpus.hpp"
#include "citescope/flow.hpp"
#include "citescope/graph.hpp"
#include "citescope/keywords.hpp"

using namespace citescope;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

CitationGraph random_graph(std::size_t n, std::size_t m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(n - 1));
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    edges.reserve(m);
    while (edges.size() < m) {
        const std::uint32_t u = pick(rng), v = pick(rng);
        if (u != v) edges.emplace_back(u, v);
    }
    std::vector<std::string> ids(n);
    for (std::size_t i = 0; i < n; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "p%08zu", i);
        ids[i] = buf;
    }
    return CitationGraph(std::move(ids), std::move(edges));
}

Corpus random_corpus(std::size_t n, std::uint64_t seed) {
    const char* vocab[] = {"mass", "spectrometry", "capillary", "electrophoresis", "protein",
                           "ion",  "sample",       "analysis",  "separation",      "peptide",
                           "gas",  "plasma",       "detector",  "buffer",          "charge"};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, std::size(vocab) - 1);
    std::vector<Paper> papers(n);
    for (std::size_t i = 0; i < n; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "p%08zu", i);
        papers[i].id = buf;
        std::string abstract;
        for (int w = 0; w < 40; ++w) {
            if (w) abstract.push_back(' ');
            abstract += vocab[pick(rng)];
        }
        papers[i].abstract = std::move(abstract);
    }
    return Corpus(std::move(papers), "bench");
}

}  // namespace

int main() {
    std::cout << "== visit_rates (200k nodes, 1.2M edges) ==\n";
    {
        CitationGraph g = random_graph(200000, 1200000, 7);
        FlowOptions opts;
        opts.tol = 1e-10;

        auto t0 = Clock::now();
        FlowDistribution serial = reference::visit_rates_serial(g, opts);
        const double t_serial = seconds_since(t0);

        t0 = Clock::now();
        FlowDistribution parallel = visit_rates(g, opts);
        const double t_parallel = seconds_since(t0);

        double max_diff = 0.0;
        for (std::size_t i = 0; i < serial.visit_rate.size(); ++i)
            max_diff = std::max(max_diff, std::fabs(serial.visit_rate[i] - parallel.visit_rate[i]));
        std::cout << "serial:   " << t_serial << " s (" << serial.iterations << " iters)\n";
        std::cout << "openmp:   " << t_parallel << " s (" << parallel.iterations << " iters)\n";
        std::cout << "speedup:  " << t_serial / t_parallel << "x, max |diff| = " << max_diff << "\n";
    }

    std::cout << "== containment scan (500k papers) ==\n";
    {
        Corpus corpus = random_corpus(500000, 11);
        ContainmentQuery query{{"electrophoresis"}, {"plasma"}};
        std::vector<std::uint32_t> scope(corpus.size());
        for (std::uint32_t i = 0; i < scope.size(); ++i) scope[i] = i;

        auto t0 = Clock::now();
        const double serial = reference::containment_stats_serial(corpus, scope, query);
        const double t_serial = seconds_since(t0);

        t0 = Clock::now();
        const double parallel = containment_stats(corpus, scope, query);
        const double t_parallel = seconds_since(t0);

        std::cout << "serial:   " << t_serial << " s -> " << serial << "%\n";
        std::cout << "openmp:   " << t_parallel << " s -> " << parallel << "%\n";
        std::cout << "speedup:  " << t_serial / t_parallel << "x\n";
    }

    std::cout << "== keyword scorer construction (100k papers) ==\n";
    {
        Corpus corpus = random_corpus(100000, 13);
        auto t0 = Clock::now();
        KeywordScorer scorer(corpus);
        std::cout << "tokenize+count: " << seconds_since(t0) << " s, "
                  << scorer.corpus_ngram_total() << " n-gram occurrences\n";
    }
    return 0;
}
