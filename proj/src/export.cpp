#include "citescope/export.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <unordered_map>

#include <json.hpp>

#include "citescope/errors.hpp"

namespace citescope {

ExportFormat parse_export_format(std::string_view name) {
    if (name == "graphml") return ExportFormat::GraphML;
    if (name == "dot") return ExportFormat::Dot;
    if (name == "json") return ExportFormat::Json;
    throw DataError("unknown export format \"" + std::string(name) + "\"");
}

namespace {

std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string dot_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

struct NodeAnnotations {
    std::vector<const std::vector<std::uint32_t>*> path;  // per node, may be null
    std::vector<char> highlight;                          // per node
    bool have_partition = false;
    bool have_highlight = false;
};

NodeAnnotations annotate(const ExportInputs& in, const ExportConfig& cfg) {
    const CitationGraph& g = *in.graph;
    NodeAnnotations a;
    a.path.assign(g.node_count(), nullptr);
    a.highlight.assign(g.node_count(), 0);

    if (in.partition) {
        a.have_partition = true;
        for (const auto& [id, path] : in.partition->paths) {
            const std::size_t node = g.index_of(id);
            if (node != CitationGraph::npos) a.path[node] = &path;
        }
    }
    if (cfg.highlight) {
        if (!in.corpus) throw DataError("highlight export needs the corpus");
        a.have_highlight = true;
        for (std::uint32_t v = 0; v < g.node_count(); ++v) {
            const Paper* p = in.corpus->find(g.id_of(v));
            if (p && cfg.highlight->matches(p->abstract)) a.highlight[v] = 1;
        }
    }
    return a;
}

void write_graphml(const ExportInputs& in, const NodeAnnotations& a, std::ostream& out) {
    const CitationGraph& g = *in.graph;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
    if (a.have_partition)
        out << "  <key id=\"module\" for=\"node\" attr.name=\"module\" attr.type=\"string\"/>\n";
    if (a.have_highlight)
        out << "  <key id=\"highlight\" for=\"node\" attr.name=\"highlight\" attr.type=\"boolean\"/>\n";
    out << "  <graph id=\"citations\" edgedefault=\"directed\">\n";
    for (std::uint32_t v = 0; v < g.node_count(); ++v) {
        out << "    <node id=\"" << xml_escape(g.id_of(v)) << "\"";
        if (!a.have_partition && !a.have_highlight) {
            out << "/>\n";
            continue;
        }
        out << ">";
        if (a.have_partition)
            out << "<data key=\"module\">" << (a.path[v] ? xml_escape(module_key(*a.path[v])) : "")
                << "</data>";
        if (a.have_highlight)
            out << "<data key=\"highlight\">" << (a.highlight[v] ? "true" : "false") << "</data>";
        out << "</node>\n";
    }
    for (auto [u, v] : g.edges())
        out << "    <edge source=\"" << xml_escape(g.id_of(u)) << "\" target=\""
            << xml_escape(g.id_of(v)) << "\"/>\n";
    out << "  </graph>\n</graphml>\n";
}

void write_dot(const ExportInputs& in, const NodeAnnotations& a, std::ostream& out) {
    const CitationGraph& g = *in.graph;
    out << "digraph citations {\n";
    if (a.have_partition) {
        // group nodes by level-1 module; unpartitioned nodes stay at top level
        std::map<std::uint32_t, std::vector<std::uint32_t>> groups;
        std::vector<std::uint32_t> loose;
        for (std::uint32_t v = 0; v < g.node_count(); ++v) {
            if (a.path[v] && !a.path[v]->empty())
                groups[(*a.path[v])[0]].push_back(v);
            else
                loose.push_back(v);
        }
        for (const auto& [mod, nodes] : groups) {
            out << "  subgraph cluster_" << mod << " {\n";
            out << "    label=\"module " << mod << "\";\n";
            for (std::uint32_t v : nodes) {
                out << "    \"" << dot_escape(g.id_of(v)) << "\" [colorscheme=set312 color="
                    << (mod % 12 + 1);
                if (a.highlight[v]) out << " style=filled fillcolor=gold";
                out << "];\n";
            }
            out << "  }\n";
        }
        for (std::uint32_t v : loose) {
            out << "  \"" << dot_escape(g.id_of(v)) << "\"";
            if (a.highlight[v]) out << " [style=filled fillcolor=gold]";
            out << ";\n";
        }
    } else {
        for (std::uint32_t v = 0; v < g.node_count(); ++v) {
            out << "  \"" << dot_escape(g.id_of(v)) << "\"";
            if (a.highlight[v]) out << " [style=filled fillcolor=gold]";
            out << ";\n";
        }
    }
    for (auto [u, v] : g.edges())
        out << "  \"" << dot_escape(g.id_of(u)) << "\" -> \"" << dot_escape(g.id_of(v)) << "\";\n";
    out << "}\n";
}

nlohmann::ordered_json keyword_json(const std::vector<KeywordScore>& scores) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const KeywordScore& s : scores) {
        nlohmann::ordered_json k;
        k["ngram"] = s.ngram;
        k["f_in"] = s.f_in;
        k["f_out"] = s.f_out;
        k["importance"] = s.importance;
        arr.push_back(std::move(k));
    }
    return arr;
}

// Nested module tree rebuilt from the per-paper paths.
struct TreeNode {
    std::map<std::uint32_t, TreeNode> children;
    std::vector<std::string> papers;
    std::uint64_t size = 0;
};

nlohmann::ordered_json tree_json(
    const TreeNode& node, std::vector<std::uint32_t>& path,
    const std::unordered_map<std::string, const std::vector<KeywordScore>*>& keywords,
    bool include_keywords) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& [idx, child] : node.children) {
        path.push_back(idx);
        nlohmann::ordered_json m;
        m["id"] = module_key(path);
        m["size"] = child.size;
        if (include_keywords) {
            auto it = keywords.find(module_key(path));
            if (it != keywords.end()) m["keywords"] = keyword_json(*it->second);
        }
        if (!child.children.empty()) m["children"] = tree_json(child, path, keywords, include_keywords);
        if (!child.papers.empty()) m["papers"] = child.papers;
        arr.push_back(std::move(m));
        path.pop_back();
    }
    return arr;
}

std::string json_str(const std::string& s) { return nlohmann::json(s).dump(); }

// Streamed: the node and edge sections can be large, only the module tree is
// built as a DOM.
void write_json(const ExportInputs& in, const ExportConfig& cfg, const NodeAnnotations& a,
                std::ostream& out) {
    const CitationGraph& g = *in.graph;
    out << "{\n";

    std::unordered_map<std::string, const std::vector<KeywordScore>*> kw;
    if (in.keywords)
        for (const auto& [key, scores] : *in.keywords) kw.emplace(key, &scores);

    if (in.partition) {
        TreeNode root;
        for (const auto& [id, p] : in.partition->paths) {
            TreeNode* cur = &root;
            for (std::uint32_t c : p) {
                cur = &cur->children[c];
                ++cur->size;
            }
            cur->papers.push_back(id);
        }
        std::vector<std::uint32_t> path;
        out << "  \"modules\": "
            << tree_json(root, path, kw, cfg.include_keywords && in.keywords).dump(2) << ",\n";
    }

    out << "  \"nodes\": {";
    for (std::uint32_t v = 0; v < g.node_count(); ++v) {
        out << (v ? ",\n    " : "\n    ") << json_str(g.id_of(v)) << ": {\"path\": [";
        if (a.path[v]) {
            const auto& p = *a.path[v];
            for (std::size_t k = 0; k < p.size(); ++k) out << (k ? "," : "") << p[k];
        }
        out << "]";
        if (a.have_highlight) out << ", \"highlight\": " << (a.highlight[v] ? "true" : "false");
        out << "}";
    }
    out << "\n  },\n";

    out << "  \"edges\": [";
    bool first = true;
    for (auto [u, v] : g.edges()) {
        out << (first ? "\n    " : ",\n    ") << "[" << json_str(g.id_of(u)) << ", "
            << json_str(g.id_of(v)) << "]";
        first = false;
    }
    out << "\n  ]\n}\n";
}

}  // namespace

void export_graph(const ExportInputs& inputs, const ExportConfig& config, std::ostream& out) {
    if (!inputs.graph) throw DataError("export needs a graph");
    const NodeAnnotations a = annotate(inputs, config);
    switch (config.format) {
        case ExportFormat::GraphML: write_graphml(inputs, a, out); break;
        case ExportFormat::Dot: write_dot(inputs, a, out); break;
        case ExportFormat::Json: write_json(inputs, config, a, out); break;
    }
}

}  // namespace citescope
