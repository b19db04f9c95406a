#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "citescope/corpus.hpp"
#include "citescope/hierarchy.hpp"
#include "citescope/keywords.hpp"

namespace citescope {

// Word-presence query over raw lowercased abstracts.
struct ContainmentQuery {
    std::vector<std::string> must_contain;
    std::vector<std::string> must_not_contain;

    bool matches(std::string_view abstract) const;
};

// Percentage (0..100, full precision) of papers in scope whose abstract
// contains all must_contain substrings and none of must_not_contain.
// Throws DataError on an empty scope.
double containment_stats(const Corpus& corpus, std::span<const std::uint32_t> scope,
                         const ContainmentQuery& query);
double containment_stats(const Corpus& corpus, const ContainmentQuery& query);

struct ClusterShare {
    std::string module;
    std::uint64_t size = 0;
    double share = 0.0;  // percent
};

// Level-1 module sizes and shares, sorted descending; everything past the
// largest `named` modules is aggregated as "others".
struct ClusterSummary {
    std::vector<ClusterShare> named;
    std::uint64_t others_size = 0;
    double others_share = 0.0;
    std::uint64_t total = 0;
};
ClusterSummary cluster_summary(const PartitionData& partition, std::size_t named = 9);

// Ordered phrase classes; a paper belongs to the first class whose phrases
// are all present, so put the most specific class first.
struct PhraseClass {
    std::string name;
    std::vector<std::string> phrases;
};

struct ClassShares {
    std::vector<std::pair<std::string, double>> shares;  // percent, in class order
    double unclassified = 0.0;
};
ClassShares class_shares(const Corpus& corpus, const std::vector<PhraseClass>& classes);

// Per phrase, papers per year whose abstract contains it; papers without a
// year are excluded.
struct Timeline {
    std::vector<std::pair<std::string, std::map<int, std::uint64_t>>> series;
};
Timeline timeline(const Corpus& corpus, const std::vector<std::string>& phrases);

// CSV with header year,phrase,count; LF line endings.
void write_timeline_csv(const Timeline& tl, std::ostream& out);

// Multi-scale context of one paper: for each level of its module path, the
// module id, size and top keywords.
struct LevelContext {
    int level = 0;
    std::string module;
    std::uint64_t module_size = 0;
    std::vector<KeywordScore> keywords;
};
std::vector<LevelContext> paper_context(std::string_view paper_id, const PartitionData& partition,
                                        const KeywordScorer& scorer, int top_n);

namespace reference {
// Serial scan kept for testing the parallel kernels against.
double containment_stats_serial(const Corpus& corpus, std::span<const std::uint32_t> scope,
                                const ContainmentQuery& query);
}  // namespace reference

}  // namespace citescope
