#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "citescope/map_equation.hpp"

namespace citescope {

// One module of a hierarchical partition. Leaves have no children; an inner
// module's children partition its node set exactly.
struct ModuleNode {
    std::vector<std::uint32_t> path;   // module ids from the root level down
    std::vector<std::uint32_t> nodes;  // graph node indices, sorted
    std::vector<ModuleNode> children;
};

// Tree of modules over a graph's nodes. Level 1 is the coarse partition;
// deeper levels refine it.
class HierarchicalPartition {
public:
    HierarchicalPartition() = default;
    HierarchicalPartition(std::vector<std::string> ids, std::vector<ModuleNode> roots,
                          std::vector<double> level_codelengths);

    const std::vector<std::string>& ids() const { return ids_; }
    const std::vector<ModuleNode>& roots() const { return roots_; }
    // Codelength per level; entries past the first are sums over the
    // renormalized sub-problems optimized at that level.
    const std::vector<double>& level_codelengths() const { return level_codelengths_; }
    int depth() const { return depth_; }

    // Root-to-leaf chain of module ids for a paper. Throws on unknown ids.
    const std::vector<std::uint32_t>& module_path(std::string_view paper_id) const;
    const std::vector<std::uint32_t>& module_path(std::uint32_t node) const { return paths_[node]; }

    // Module lookup by path prefix; nullptr when absent.
    const ModuleNode* find(std::span<const std::uint32_t> path) const;

private:
    std::vector<std::string> ids_;
    std::vector<ModuleNode> roots_;
    std::vector<double> level_codelengths_;
    std::vector<std::vector<std::uint32_t>> paths_;
    int depth_ = 0;
};

struct HierarchicalOptions {
    std::uint64_t seed = 42;
    int trials = 10;
    int max_depth = 3;
    std::size_t min_module_size = 8;
    double min_gain = 1e-10;
};

// Level 1 is optimize_two_level on the full graph; each module larger than
// min_module_size is then recursively re-optimized on its induced subgraph
// with flow renormalized to sum to one inside the module.
HierarchicalPartition optimize_hierarchical(const CitationGraph& graph,
                                            const FlowDistribution& flow,
                                            const HierarchicalOptions& opts = {});

// Wraps a flat partition as a depth-1 hierarchy.
HierarchicalPartition as_hierarchy(const CitationGraph& graph, const Partition& partition);

// Serialized view: per paper id the module path, plus per-level codelengths.
struct PartitionData {
    int levels = 0;
    std::vector<double> codelengths;
    // Sorted by paper id.
    std::vector<std::pair<std::string, std::vector<std::uint32_t>>> paths;

    std::size_t index_of(std::string_view id) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

PartitionData to_partition_data(const HierarchicalPartition& partition);
void write_partition_json(const PartitionData& data, std::ostream& out);
PartitionData read_partition_json(std::istream& in);

// "0/2/1"-style key for a module path prefix.
std::string module_key(std::span<const std::uint32_t> path);

}  // namespace citescope
