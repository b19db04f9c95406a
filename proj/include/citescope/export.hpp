#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "citescope/analytics.hpp"
#include "citescope/graph.hpp"
#include "citescope/hierarchy.hpp"
#include "citescope/keywords.hpp"

namespace citescope {

enum class ExportFormat { GraphML, Dot, Json };

// Accepts "graphml", "dot" or "json"; anything else throws DataError.
ExportFormat parse_export_format(std::string_view name);

struct ExportConfig {
    ExportFormat format = ExportFormat::GraphML;
    // Nodes matching the query are flagged/colored.
    std::optional<ContainmentQuery> highlight;
    bool include_keywords = false;
};

struct ExportInputs {
    const CitationGraph* graph = nullptr;  // required
    const PartitionData* partition = nullptr;
    // Per module key, ranked keywords; used when include_keywords is set.
    const std::vector<std::pair<std::string, std::vector<KeywordScore>>>* keywords = nullptr;
    const Corpus* corpus = nullptr;  // required when highlight is set
};

// GraphML: node attributes module path (slash-joined) and highlight flag.
// DOT: level-1 modules as subgraphs, nodes colored by module index.
// JSON: the nested module hierarchy with keywords plus a per-node path map.
void export_graph(const ExportInputs& inputs, const ExportConfig& config, std::ostream& out);

}  // namespace citescope
