#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "citescope/corpus.hpp"

namespace citescope {

// Directed citation network. Node u -> v means "u cites v". Node indices are
// contiguous and ordered by paper id, so index maps are reproducible.
class CitationGraph {
public:
    CitationGraph() = default;
    // ids must be sorted and unique; edges are (source, target) index pairs
    // without self-loops or duplicates.
    CitationGraph(std::vector<std::string> ids,
                  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges);

    std::size_t node_count() const { return ids_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    const std::vector<std::string>& ids() const { return ids_; }
    const std::string& id_of(std::uint32_t node) const { return ids_[node]; }
    // Index of a paper id, or npos.
    std::size_t index_of(std::string_view id) const;

    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges() const { return edges_; }

    std::span<const std::uint32_t> out_neighbors(std::uint32_t node) const;
    std::span<const std::uint32_t> in_neighbors(std::uint32_t node) const;
    std::uint32_t out_degree(std::uint32_t node) const;

    // Same nodes, every edge direction flipped.
    CitationGraph reversed() const;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::vector<std::string> ids_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
    // CSR adjacency, built once at construction.
    std::vector<std::uint32_t> out_offsets_, out_targets_;
    std::vector<std::uint32_t> in_offsets_, in_sources_;

    void build_adjacency();
};

// One node per paper, one edge per (paper, reference) pair. Throws DataError
// on references that point outside the corpus.
CitationGraph build_graph(const Corpus& corpus);

// Induced subgraph on the largest weakly connected node set. Ties between
// equal-sized components go to the one containing the smallest node id.
CitationGraph largest_weak_component(const CitationGraph& graph);

// Restriction to a node subset given by indices into `graph`.
CitationGraph induced_subgraph(const CitationGraph& graph,
                               std::span<const std::uint32_t> nodes);
// Same, by paper ids; unknown ids throw DataError.
CitationGraph induced_subgraph(const CitationGraph& graph,
                               const std::vector<std::string>& ids);

// Compact binary serialization (magic "CSGB").
void write_graph_binary(const CitationGraph& graph, std::ostream& out);
CitationGraph read_graph_binary(std::istream& in);

}  // namespace citescope
