#include "citescope/hierarchy.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "citescope/detail/subproblem.hpp"
#include "citescope/errors.hpp"

namespace citescope {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::vector<std::vector<std::uint32_t>> group_by_module(const Partition& p, std::size_t n) {
    std::vector<std::vector<std::uint32_t>> groups(p.module_count);
    for (std::uint32_t i = 0; i < n; ++i) groups[p.module_of[i]].push_back(i);
    return groups;
}

struct Builder {
    const CitationGraph& graph;
    const FlowDistribution& flow;
    const HierarchicalOptions& opts;
    std::vector<double> level_codelengths;

    // Re-optimizes a module's interior with the boundary-aware sub-problem:
    // parent-scale flows, edges leaving the module charged as fixed exit
    // bonuses, teleportation at the parent graph scale. The single-module
    // option then costs exactly the module's contribution to the parent
    // codelength, so a split is kept only when it compresses better.
    void refine(ModuleNode& module, int depth) {
        if (depth >= opts.max_depth || module.nodes.size() <= opts.min_module_size) return;

        const std::size_t k = module.nodes.size();
        std::vector<std::uint32_t> local_of(graph.node_count(), UINT32_MAX);
        for (std::uint32_t i = 0; i < k; ++i) local_of[module.nodes[i]] = i;

        detail::SubProblem sub;
        sub.tau = flow.teleport_prob;
        sub.parent_node_count = graph.node_count();
        sub.flow.resize(k);
        sub.exit_bonus.assign(k, 0.0);
        for (std::uint32_t i = 0; i < k; ++i) {
            const std::uint32_t node = module.nodes[i];
            sub.flow[i] = flow.visit_rate[node];
            const auto deg = graph.out_degree(node);
            if (deg == 0) continue;
            const double share = (1.0 - sub.tau) * flow.visit_rate[node] / double(deg);
            for (std::uint32_t target : graph.out_neighbors(node)) {
                if (local_of[target] != UINT32_MAX) {
                    sub.edges.emplace_back(i, local_of[target]);
                    sub.edge_flow.push_back(share);
                } else {
                    sub.exit_bonus[i] += share;
                }
            }
        }

        std::uint64_t seed = opts.seed;
        for (std::uint32_t c : module.path) seed = splitmix64(seed + c + 1);
        detail::SubResult part = detail::optimize_subproblem(sub, seed, opts.trials, opts.min_gain);
        if (part.module_count <= 1) return;

        if (static_cast<std::size_t>(depth) >= level_codelengths.size())
            level_codelengths.resize(static_cast<std::size_t>(depth) + 1, 0.0);
        level_codelengths[static_cast<std::size_t>(depth)] += part.codelength;

        std::vector<std::vector<std::uint32_t>> groups(part.module_count);
        for (std::uint32_t i = 0; i < k; ++i) groups[part.module_of[i]].push_back(module.nodes[i]);
        module.children.reserve(groups.size());
        for (std::uint32_t m = 0; m < groups.size(); ++m) {
            ModuleNode child;
            child.path = module.path;
            child.path.push_back(m);
            child.nodes = std::move(groups[m]);
            module.children.push_back(std::move(child));
        }
        for (ModuleNode& child : module.children) refine(child, depth + 1);
    }
};

int tree_depth(const std::vector<ModuleNode>& nodes) {
    int d = 0;
    for (const ModuleNode& n : nodes)
        d = std::max(d, n.children.empty() ? 1 : 1 + tree_depth(n.children));
    return d;
}

}  // namespace

HierarchicalPartition::HierarchicalPartition(std::vector<std::string> ids,
                                             std::vector<ModuleNode> roots,
                                             std::vector<double> level_codelengths)
    : ids_(std::move(ids)),
      roots_(std::move(roots)),
      level_codelengths_(std::move(level_codelengths)) {
    depth_ = tree_depth(roots_);
    paths_.resize(ids_.size());
    // leaf paths
    std::vector<const ModuleNode*> stack;
    for (const ModuleNode& r : roots_) stack.push_back(&r);
    while (!stack.empty()) {
        const ModuleNode* m = stack.back();
        stack.pop_back();
        if (m->children.empty()) {
            for (std::uint32_t i : m->nodes) paths_[i] = m->path;
        } else {
            for (const ModuleNode& c : m->children) stack.push_back(&c);
        }
    }
}

const std::vector<std::uint32_t>& HierarchicalPartition::module_path(std::string_view paper_id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), paper_id);
    if (it == ids_.end() || *it != paper_id)
        throw DataError("unknown paper id \"" + std::string(paper_id) + "\"");
    return paths_[static_cast<std::size_t>(it - ids_.begin())];
}

const ModuleNode* HierarchicalPartition::find(std::span<const std::uint32_t> path) const {
    if (path.empty()) return nullptr;
    const std::vector<ModuleNode>* level = &roots_;
    const ModuleNode* current = nullptr;
    for (std::uint32_t component : path) {
        if (component >= level->size()) return nullptr;
        current = &(*level)[component];
        level = &current->children;
    }
    return current;
}

HierarchicalPartition optimize_hierarchical(const CitationGraph& graph,
                                            const FlowDistribution& flow,
                                            const HierarchicalOptions& opts) {
    if (opts.max_depth < 1) throw DataError("max_depth must be at least 1");

    TwoLevelOptions top_opts;
    top_opts.seed = opts.seed;
    top_opts.trials = opts.trials;
    top_opts.min_gain = opts.min_gain;
    Partition top = optimize_two_level(graph, flow, top_opts);

    Builder builder{graph, flow, opts, {top.codelength}};

    std::vector<ModuleNode> roots;
    auto groups = group_by_module(top, graph.node_count());
    roots.reserve(groups.size());
    for (std::uint32_t m = 0; m < groups.size(); ++m) {
        ModuleNode root;
        root.path = {m};
        root.nodes = std::move(groups[m]);
        roots.push_back(std::move(root));
    }
    for (ModuleNode& root : roots) builder.refine(root, 1);

    return HierarchicalPartition(graph.ids(), std::move(roots),
                                 std::move(builder.level_codelengths));
}

HierarchicalPartition as_hierarchy(const CitationGraph& graph, const Partition& partition) {
    std::vector<ModuleNode> roots;
    auto groups = group_by_module(partition, graph.node_count());
    roots.reserve(groups.size());
    for (std::uint32_t m = 0; m < groups.size(); ++m) {
        ModuleNode root;
        root.path = {m};
        root.nodes = std::move(groups[m]);
        roots.push_back(std::move(root));
    }
    return HierarchicalPartition(graph.ids(), std::move(roots), {partition.codelength});
}

std::size_t PartitionData::index_of(std::string_view id) const {
    auto it = std::lower_bound(paths.begin(), paths.end(), id,
                               [](const auto& entry, std::string_view v) { return entry.first < v; });
    if (it == paths.end() || it->first != id) return npos;
    return static_cast<std::size_t>(it - paths.begin());
}

PartitionData to_partition_data(const HierarchicalPartition& partition) {
    PartitionData data;
    data.levels = partition.depth();
    data.codelengths = partition.level_codelengths();
    data.paths.reserve(partition.ids().size());
    for (std::uint32_t i = 0; i < partition.ids().size(); ++i)
        data.paths.emplace_back(partition.ids()[i], partition.module_path(i));
    return data;  // ids are already sorted
}

void write_partition_json(const PartitionData& data, std::ostream& out) {
    nlohmann::ordered_json doc;
    doc["levels"] = data.levels;
    doc["codelengths"] = data.codelengths;
    nlohmann::ordered_json paths = nlohmann::ordered_json::object();
    for (const auto& [id, path] : data.paths) paths[id] = path;
    doc["paths"] = std::move(paths);
    out << doc.dump(2) << '\n';
}

PartitionData read_partition_json(std::istream& in) {
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("paths"))
        throw DataError("malformed partition file");
    PartitionData data;
    data.levels = doc.value("levels", 0);
    if (doc.contains("codelengths"))
        data.codelengths = doc["codelengths"].get<std::vector<double>>();
    for (const auto& [id, path] : doc["paths"].items())
        data.paths.emplace_back(id, path.get<std::vector<std::uint32_t>>());
    std::sort(data.paths.begin(), data.paths.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return data;
}

std::string module_key(std::span<const std::uint32_t> path) {
    std::string key;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) key.push_back('/');
        key += std::to_string(path[i]);
    }
    return key;
}

}  // namespace citescope
