#pragma once

// Deterministic graph and corpus generators shared by the unit and
// acceptance suites.

#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "citescope/corpus.hpp"
#include "citescope/graph.hpp"

namespace testgen {

inline std::vector<std::string> node_ids(std::size_t n, const char* prefix = "n") {
    std::vector<std::string> ids(n);
    for (std::size_t i = 0; i < n; ++i) {
        char buf[24];
        std::snprintf(buf, sizeof buf, "%s%06zu", prefix, i);
        ids[i] = buf;
    }
    return ids;
}

// Erdos-Renyi style digraph over ordered pairs.
inline citescope::CitationGraph random_digraph(std::size_t n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t u = 0; u < n; ++u)
        for (std::uint32_t v = 0; v < n; ++v)
            if (u != v && coin(rng) < p) edges.emplace_back(u, v);
    return citescope::CitationGraph(node_ids(n), std::move(edges));
}

// Random connected digraph: a directed cycle through a random permutation
// plus random extra edges.
inline citescope::CitationGraph random_connected_digraph(std::size_t n, double extra_p,
                                                         std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::uint32_t> perm(n);
    for (std::uint32_t i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);

    std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::size_t i = 0; i < n; ++i)
        edges.emplace(perm[i], perm[(i + 1) % n]);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (std::uint32_t u = 0; u < n; ++u)
        for (std::uint32_t v = 0; v < n; ++v)
            if (u != v && coin(rng) < extra_p) edges.emplace(u, v);
    return citescope::CitationGraph(
        node_ids(n), std::vector<std::pair<std::uint32_t, std::uint32_t>>(edges.begin(), edges.end()));
}

// Directed planted-partition model: every ordered in-block pair gets an edge
// with probability p_in, cross-block pairs with p_out.
inline citescope::CitationGraph directed_sbm(std::size_t blocks, std::size_t block_size,
                                             double p_in, double p_out, std::uint64_t seed,
                                             std::vector<std::uint32_t>* labels_out = nullptr) {
    const std::size_t n = blocks * block_size;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    std::vector<std::uint32_t> labels(n);
    for (std::uint32_t i = 0; i < n; ++i) labels[i] = static_cast<std::uint32_t>(i / block_size);
    for (std::uint32_t u = 0; u < n; ++u)
        for (std::uint32_t v = 0; v < n; ++v) {
            if (u == v) continue;
            const double p = labels[u] == labels[v] ? p_in : p_out;
            if (coin(rng) < p) edges.emplace_back(u, v);
        }
    if (labels_out) *labels_out = labels;
    return citescope::CitationGraph(node_ids(n), std::move(edges));
}

// Four bidirected cliques arranged as two dense super-pairs with sparse
// coupling between the pairs: pair_bridges distinct bidirected edges between
// the cliques of a pair, one bidirected edge across the pairs. With clique
// size 10 and 26 bridges the two-level optimum is the super-pairs and the
// boundary-aware sub-problems split them into the cliques.
// clique_labels/pair_labels receive the planted assignments.
inline citescope::CitationGraph clique_superpairs(std::size_t clique_size,
                                                  std::size_t pair_bridges,
                                                  std::vector<std::uint32_t>* clique_labels = nullptr,
                                                  std::vector<std::uint32_t>* pair_labels = nullptr) {
    const std::size_t n = 4 * clique_size;
    std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
    auto add_bidirected = [&](std::uint32_t a, std::uint32_t b) {
        edges.emplace(a, b);
        edges.emplace(b, a);
    };
    for (std::uint32_t c = 0; c < 4; ++c) {
        const std::uint32_t base = c * static_cast<std::uint32_t>(clique_size);
        for (std::uint32_t i = 0; i < clique_size; ++i)
            for (std::uint32_t j = i + 1; j < clique_size; ++j)
                add_bidirected(base + i, base + j);
    }
    // dense coupling inside each super-pair: distinct scrambled node pairs
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    for (std::uint32_t i = 0; i < clique_size; ++i)
        for (std::uint32_t j = 0; j < clique_size; ++j) pairs.emplace_back(i, j);
    std::sort(pairs.begin(), pairs.end(),
              [](const auto& a, const auto& b) {
                  return (a.first * 7 + a.second * 13) % 101 < (b.first * 7 + b.second * 13) % 101;
              });
    auto couple = [&](std::uint32_t ca, std::uint32_t cb, std::size_t count) {
        const std::uint32_t a = ca * static_cast<std::uint32_t>(clique_size);
        const std::uint32_t b = cb * static_cast<std::uint32_t>(clique_size);
        for (std::size_t k = 0; k < count && k < pairs.size(); ++k)
            add_bidirected(a + pairs[k].first, b + pairs[k].second);
    };
    couple(0, 1, pair_bridges);
    couple(2, 3, pair_bridges);
    // sparse coupling across the pairs
    add_bidirected(0, 2 * static_cast<std::uint32_t>(clique_size));

    if (clique_labels) {
        clique_labels->resize(n);
        for (std::size_t i = 0; i < n; ++i)
            (*clique_labels)[i] = static_cast<std::uint32_t>(i / clique_size);
    }
    if (pair_labels) {
        pair_labels->resize(n);
        for (std::size_t i = 0; i < n; ++i)
            (*pair_labels)[i] = static_cast<std::uint32_t>(i / (2 * clique_size));
    }
    return citescope::CitationGraph(
        node_ids(n), std::vector<std::pair<std::uint32_t, std::uint32_t>>(edges.begin(), edges.end()));
}

// Synthetic corpus with planted per-cluster vocabularies: papers of cluster k
// use shared filler words plus a signature word unique to the cluster.
// cluster_of receives the planted cluster label per paper (corpus order).
inline citescope::Corpus planted_keyword_corpus(std::size_t clusters, std::size_t papers_per_cluster,
                                                std::uint64_t seed,
                                                std::vector<std::uint32_t>* cluster_of = nullptr) {
    static const char* fillers[] = {"sample", "method", "result",  "measure", "signal",
                                    "column", "buffer", "analyte", "detect",  "study"};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, std::size(fillers) - 1);
    std::vector<citescope::Paper> papers;
    const std::size_t total = clusters * papers_per_cluster;
    auto ids = node_ids(total, "p");
    std::size_t next = 0;
    for (std::size_t c = 0; c < clusters; ++c) {
        const std::string signature = "signature" + std::to_string(c);
        for (std::size_t k = 0; k < papers_per_cluster; ++k, ++next) {
            citescope::Paper p;
            p.id = ids[next];
            p.year = 1980 + static_cast<int>(next % 40);
            std::string abstract = signature;
            for (int w = 0; w < 11; ++w) {
                abstract.push_back(' ');
                abstract += fillers[pick(rng)];
            }
            abstract.push_back(' ');
            abstract += signature;
            p.abstract = std::move(abstract);
            papers.push_back(std::move(p));
        }
    }
    if (cluster_of) {
        cluster_of->resize(total);
        // corpus sorts by id; ids are zero-padded so order is preserved
        for (std::size_t i = 0; i < total; ++i)
            (*cluster_of)[i] = static_cast<std::uint32_t>(i / papers_per_cluster);
    }
    return citescope::Corpus(std::move(papers), "planted");
}

}  // namespace testgen
