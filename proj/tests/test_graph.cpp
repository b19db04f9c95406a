#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "citescope/errors.hpp"
#include "citescope/graph.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace citescope;

namespace {

Corpus make_corpus(const std::vector<std::pair<std::string, std::vector<std::string>>>& specs) {
    std::vector<Paper> papers;
    for (const auto& [id, refs] : specs) {
        Paper p;
        p.id = id;
        p.references = refs;
        papers.push_back(std::move(p));
    }
    return Corpus(papers);
}

}  // namespace

TEST_CASE("build_graph: a cites b") {
    CitationGraph g = build_graph(make_corpus({{"a", {"b"}}, {"b", {}}}));
    CHECK(g.node_count() == 2);
    CHECK(g.edge_count() == 1);
    CHECK(g.edges()[0] == std::pair<std::uint32_t, std::uint32_t>{0, 1});
    CHECK(g.id_of(0) == "a");
}

TEST_CASE("build_graph: corpus without references has no edges") {
    CitationGraph g = build_graph(make_corpus({{"a", {}}, {"b", {}}, {"c", {}}}));
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 0);
}

TEST_CASE("build_graph: dangling reference is an error") {
    CHECK_THROWS_AS(build_graph(make_corpus({{"a", {"ghost"}}})), DataError);
}

TEST_CASE("build_graph: edge count matches the reference-list oracle") {
    std::mt19937_64 rng(17);
    std::vector<std::pair<std::string, std::vector<std::string>>> specs;
    auto ids = testgen::node_ids(100, "p");
    for (int i = 0; i < 100; ++i) {
        std::vector<std::string> refs;
        const int k = int(rng() % 8);
        for (int r = 0; r < k; ++r) refs.push_back(ids[rng() % 100]);
        specs.emplace_back(ids[size_t(i)], refs);
    }
    // oracle: count unique non-self references per paper
    std::size_t expected = 0;
    for (const auto& [id, refs] : specs) {
        std::set<std::string> unique(refs.begin(), refs.end());
        unique.erase(id);
        expected += unique.size();
    }
    CitationGraph g = build_graph(make_corpus(specs));
    CHECK(g.edge_count() == expected);
}

TEST_CASE("largest_weak_component: picks the longer of two directed paths") {
    // path of 3: a->b->c, path of 5: p->q->r->s->t
    CitationGraph g = build_graph(make_corpus({{"a", {"b"}},
                                               {"b", {"c"}},
                                               {"c", {}},
                                               {"p", {"q"}},
                                               {"q", {"r"}},
                                               {"r", {"s"}},
                                               {"s", {"t"}},
                                               {"t", {}}}));
    CitationGraph lcc = largest_weak_component(g);
    CHECK(lcc.node_count() == 5);
    CHECK(lcc.index_of("p") != CitationGraph::npos);
    CHECK(lcc.index_of("a") == CitationGraph::npos);
}

TEST_CASE("largest_weak_component: connected graph is returned whole") {
    CitationGraph g = testgen::random_connected_digraph(30, 0.05, 5);
    CitationGraph lcc = largest_weak_component(g);
    CHECK(lcc.node_count() == g.node_count());
    CHECK(lcc.edge_count() == g.edge_count());
    CHECK(lcc.ids() == g.ids());
}

TEST_CASE("largest_weak_component: membership equals a union-find oracle") {
    CitationGraph g = testgen::random_digraph(200, 0.004, 23);

    oracle::UnionFind uf(g.node_count());
    for (auto [u, v] : g.edges()) uf.unite(u, v);
    std::map<std::uint32_t, std::vector<std::string>> components;
    for (std::uint32_t i = 0; i < g.node_count(); ++i)
        components[uf.find(i)].push_back(g.id_of(i));
    std::vector<std::string> best;
    for (auto& [root, members] : components) {
        // size, then smallest minimum id (members are in id order already)
        if (members.size() > best.size() ||
            (members.size() == best.size() && !best.empty() && members.front() < best.front()))
            best = members;
    }

    CitationGraph lcc = largest_weak_component(g);
    CHECK(lcc.ids() == best);

    SUBCASE("idempotent") {
        CitationGraph again = largest_weak_component(lcc);
        CHECK(again.ids() == lcc.ids());
        CHECK(again.edge_count() == lcc.edge_count());
    }
    SUBCASE("weak connectivity holds in the result") {
        // BFS over the undirected view must reach every node
        if (lcc.node_count() > 0) {
            std::vector<char> seen(lcc.node_count(), 0);
            std::vector<std::uint32_t> queue{0};
            seen[0] = 1;
            for (std::size_t h = 0; h < queue.size(); ++h) {
                const std::uint32_t u = queue[h];
                for (std::uint32_t v : lcc.out_neighbors(u))
                    if (!seen[v]) { seen[v] = 1; queue.push_back(v); }
                for (std::uint32_t v : lcc.in_neighbors(u))
                    if (!seen[v]) { seen[v] = 1; queue.push_back(v); }
            }
            CHECK(std::count(seen.begin(), seen.end(), 1) == long(lcc.node_count()));
        }
    }
}

TEST_CASE("largest_weak_component: empty graph stays empty") {
    CitationGraph g;
    CHECK(largest_weak_component(g).node_count() == 0);
}

TEST_CASE("induced_subgraph: full node set reproduces the graph") {
    CitationGraph g = testgen::random_digraph(40, 0.1, 7);
    std::vector<std::uint32_t> all(g.node_count());
    for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
    CitationGraph sub = induced_subgraph(g, all);
    CHECK(sub.ids() == g.ids());
    CHECK(sub.edge_count() == g.edge_count());
}

TEST_CASE("induced_subgraph: single node has no edges") {
    CitationGraph g = testgen::random_digraph(10, 0.3, 9);
    std::vector<std::uint32_t> one{3};
    CitationGraph sub = induced_subgraph(g, one);
    CHECK(sub.node_count() == 1);
    CHECK(sub.edge_count() == 0);
}

TEST_CASE("induced_subgraph: edges equal a brute-force filter of the edge list") {
    CitationGraph g = testgen::random_digraph(60, 0.08, 31);
    std::mt19937_64 rng(4);
    std::vector<std::uint32_t> subset;
    for (std::uint32_t i = 0; i < g.node_count(); ++i)
        if (rng() % 2) subset.push_back(i);

    std::set<std::uint32_t> in_set(subset.begin(), subset.end());
    std::size_t expected_edges = 0;
    for (auto [u, v] : g.edges())
        if (in_set.count(u) && in_set.count(v)) ++expected_edges;

    CitationGraph sub = induced_subgraph(g, subset);
    CHECK(sub.node_count() == subset.size());
    CHECK(sub.edge_count() == expected_edges);
    CHECK(sub.edge_count() <= g.edge_count());

    // every kept edge maps back to an original edge
    for (auto [u, v] : sub.edges()) {
        const std::size_t gu = g.index_of(sub.id_of(u));
        const std::size_t gv = g.index_of(sub.id_of(v));
        bool found = false;
        for (std::uint32_t t : g.out_neighbors(std::uint32_t(gu)))
            if (t == gv) { found = true; break; }
        CHECK(found);
    }
}

TEST_CASE("induced_subgraph: unknown id is an error") {
    CitationGraph g = build_graph(make_corpus({{"a", {}}}));
    std::vector<std::string> ids = {"a", "zz"};
    CHECK_THROWS_AS(induced_subgraph(g, ids), DataError);
}

TEST_CASE("graph binary round-trip") {
    CitationGraph g = testgen::random_digraph(50, 0.07, 77);
    std::stringstream buf;
    write_graph_binary(g, buf);
    CitationGraph back = read_graph_binary(buf);
    CHECK(back.ids() == g.ids());
    CHECK(back.edges() == g.edges());
}

TEST_CASE("reversed flips every edge") {
    CitationGraph g = testgen::random_digraph(20, 0.1, 13);
    CitationGraph r = g.reversed();
    REQUIRE(r.edge_count() == g.edge_count());
    for (auto [u, v] : g.edges()) {
        bool found = false;
        for (std::uint32_t t : r.out_neighbors(v))
            if (t == u) { found = true; break; }
        CHECK(found);
    }
}
