#include "citescope/graph.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>

#include "citescope/errors.hpp"

namespace citescope {

CitationGraph::CitationGraph(std::vector<std::string> ids,
                             std::vector<std::pair<std::uint32_t, std::uint32_t>> edges)
    : ids_(std::move(ids)), edges_(std::move(edges)) {
    for (std::size_t i = 0; i + 1 < ids_.size(); ++i)
        if (!(ids_[i] < ids_[i + 1]))
            throw DataError("graph node ids must be sorted and unique");
    for (auto [u, v] : edges_) {
        if (u >= ids_.size() || v >= ids_.size())
            throw DataError("edge endpoint out of range");
        if (u == v) throw DataError("self-loop in citation graph");
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    build_adjacency();
}

void CitationGraph::build_adjacency() {
    const std::size_t n = ids_.size();
    out_offsets_.assign(n + 1, 0);
    in_offsets_.assign(n + 1, 0);
    for (auto [u, v] : edges_) {
        ++out_offsets_[u + 1];
        ++in_offsets_[v + 1];
    }
    std::partial_sum(out_offsets_.begin(), out_offsets_.end(), out_offsets_.begin());
    std::partial_sum(in_offsets_.begin(), in_offsets_.end(), in_offsets_.begin());
    out_targets_.resize(edges_.size());
    in_sources_.resize(edges_.size());
    std::vector<std::uint32_t> out_pos(out_offsets_.begin(), out_offsets_.end() - 1);
    std::vector<std::uint32_t> in_pos(in_offsets_.begin(), in_offsets_.end() - 1);
    for (auto [u, v] : edges_) {
        out_targets_[out_pos[u]++] = v;
        in_sources_[in_pos[v]++] = u;
    }
}

std::size_t CitationGraph::index_of(std::string_view id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) return npos;
    return static_cast<std::size_t>(it - ids_.begin());
}

std::span<const std::uint32_t> CitationGraph::out_neighbors(std::uint32_t node) const {
    return {out_targets_.data() + out_offsets_[node],
            out_targets_.data() + out_offsets_[node + 1]};
}

std::span<const std::uint32_t> CitationGraph::in_neighbors(std::uint32_t node) const {
    return {in_sources_.data() + in_offsets_[node],
            in_sources_.data() + in_offsets_[node + 1]};
}

std::uint32_t CitationGraph::out_degree(std::uint32_t node) const {
    return out_offsets_[node + 1] - out_offsets_[node];
}

CitationGraph CitationGraph::reversed() const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> rev;
    rev.reserve(edges_.size());
    for (auto [u, v] : edges_) rev.emplace_back(v, u);
    return CitationGraph(ids_, std::move(rev));
}

CitationGraph build_graph(const Corpus& corpus) {
    std::vector<std::string> ids;
    ids.reserve(corpus.size());
    for (const Paper& p : corpus.papers()) ids.push_back(p.id);

    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        for (const std::string& ref : corpus.papers()[i].references) {
            std::size_t j = corpus.index_of(ref);
            if (j == Corpus::npos)
                throw DataError("reference \"" + ref + "\" of paper \"" +
                                corpus.papers()[i].id + "\" is not in the corpus");
            edges.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
        }
    }
    return CitationGraph(std::move(ids), std::move(edges));
}

CitationGraph largest_weak_component(const CitationGraph& graph) {
    const std::size_t n = graph.node_count();
    if (n == 0) return CitationGraph();

    // BFS over the undirected view.
    std::vector<std::uint32_t> component(n, UINT32_MAX);
    std::uint32_t comp_count = 0;
    std::vector<std::uint32_t> queue;
    for (std::uint32_t s = 0; s < n; ++s) {
        if (component[s] != UINT32_MAX) continue;
        component[s] = comp_count;
        queue.assign(1, s);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            std::uint32_t u = queue[head];
            for (std::uint32_t v : graph.out_neighbors(u))
                if (component[v] == UINT32_MAX) { component[v] = comp_count; queue.push_back(v); }
            for (std::uint32_t v : graph.in_neighbors(u))
                if (component[v] == UINT32_MAX) { component[v] = comp_count; queue.push_back(v); }
        }
        ++comp_count;
    }

    std::vector<std::uint64_t> sizes(comp_count, 0);
    for (std::uint32_t c : component) ++sizes[c];

    // Components are discovered in order of their smallest node index, so the
    // first maximal one wins ties by smallest minimum id.
    std::uint32_t best = 0;
    for (std::uint32_t c = 1; c < comp_count; ++c)
        if (sizes[c] > sizes[best]) best = c;

    std::vector<std::uint32_t> members;
    members.reserve(sizes[best]);
    for (std::uint32_t i = 0; i < n; ++i)
        if (component[i] == best) members.push_back(i);
    return induced_subgraph(graph, members);
}

CitationGraph induced_subgraph(const CitationGraph& graph,
                               std::span<const std::uint32_t> nodes) {
    const std::size_t n = graph.node_count();
    std::vector<std::uint32_t> remap(n, UINT32_MAX);
    std::vector<std::uint32_t> sorted(nodes.begin(), nodes.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    std::vector<std::string> ids;
    ids.reserve(sorted.size());
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        if (sorted[k] >= n) throw DataError("node index out of range in induced_subgraph");
        remap[sorted[k]] = static_cast<std::uint32_t>(k);
        ids.push_back(graph.id_of(sorted[k]));
    }

    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (auto [u, v] : graph.edges())
        if (remap[u] != UINT32_MAX && remap[v] != UINT32_MAX)
            edges.emplace_back(remap[u], remap[v]);
    return CitationGraph(std::move(ids), std::move(edges));
}

CitationGraph induced_subgraph(const CitationGraph& graph,
                               const std::vector<std::string>& ids) {
    std::vector<std::uint32_t> nodes;
    nodes.reserve(ids.size());
    for (const std::string& id : ids) {
        std::size_t i = graph.index_of(id);
        if (i == CitationGraph::npos)
            throw DataError("id \"" + id + "\" is not a graph node");
        nodes.push_back(static_cast<std::uint32_t>(i));
    }
    return induced_subgraph(graph, nodes);
}

namespace {

constexpr char kMagic[4] = {'C', 'S', 'G', 'B'};
constexpr std::uint32_t kVersion = 1;

void write_u64(std::ostream& out, std::uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(buf, 8);
}

std::uint64_t read_u64(std::istream& in) {
    char buf[8];
    in.read(buf, 8);
    if (!in) throw DataError("truncated graph file");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
    return v;
}

}  // namespace

void write_graph_binary(const CitationGraph& graph, std::ostream& out) {
    out.write(kMagic, 4);
    write_u64(out, kVersion);
    write_u64(out, graph.node_count());
    for (const std::string& id : graph.ids()) {
        write_u64(out, id.size());
        out.write(id.data(), static_cast<std::streamsize>(id.size()));
    }
    write_u64(out, graph.edge_count());
    for (auto [u, v] : graph.edges()) {
        write_u64(out, u);
        write_u64(out, v);
    }
}

CitationGraph read_graph_binary(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || !std::equal(magic, magic + 4, kMagic))
        throw DataError("not a citescope graph file");
    if (read_u64(in) != kVersion) throw DataError("unsupported graph file version");

    std::uint64_t n = read_u64(in);
    std::vector<std::string> ids(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        std::uint64_t len = read_u64(in);
        ids[i].resize(len);
        in.read(ids[i].data(), static_cast<std::streamsize>(len));
        if (!in) throw DataError("truncated graph file");
    }
    std::uint64_t m = read_u64(in);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges(m);
    for (std::uint64_t e = 0; e < m; ++e) {
        edges[e].first = static_cast<std::uint32_t>(read_u64(in));
        edges[e].second = static_cast<std::uint32_t>(read_u64(in));
    }
    return CitationGraph(std::move(ids), std::move(edges));
}

}  // namespace citescope
