#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "citescope/corpus.hpp"
#include "citescope/hierarchy.hpp"
#include "citescope/ngrams.hpp"
#include "citescope/text.hpp"

namespace citescope {

// A scored cluster keyword: importance = f_in - f_out.
struct KeywordScore {
    std::string ngram;
    double f_in = 0.0;
    double f_out = 0.0;
    double importance = 0.0;
};

struct KeywordConfig {
    std::vector<int> ngram_sizes = {1, 2, 3};
    int top_n = 5;
    // Remove common function words before n-gram extraction.
    bool use_stop_list = false;
    // Do not let n-grams cross sentence boundaries.
    bool block_sentence_boundaries = false;
    // Literal reading of the out-cluster normalization: divide by
    // (number of papers - n_c) instead of (corpus n-gram total - n_c).
    bool strict_node_count_normalization = false;
};

// In-cluster frequency: count / cluster n-gram total.
double in_cluster_frequency(const NgramCounts& cluster_counts, const std::string& ngram);

// Summed count of the n-gram over every other cluster, divided by (N - n_c)
// where N is the corpus-wide n-gram total.
double out_cluster_frequency(const std::vector<NgramCounts>& all_clusters, std::size_t cluster,
                             const std::string& ngram);

double importance(double f_in, double f_out);

// Tokenizes the corpus once (interned token ids) and scores any node set of
// it. The corpus is the cluster universe: out-of-cluster mass is everything
// in the corpus outside the scored papers. Read-only and thread-safe once
// constructed.
class KeywordScorer {
public:
    KeywordScorer(const Corpus& corpus, KeywordConfig config = {},
                  const Lemmatizer* lemmatizer = nullptr);

    const Corpus& corpus() const { return *corpus_; }
    const KeywordConfig& config() const { return config_; }
    std::uint64_t corpus_ngram_total() const { return corpus_total_; }

    NgramCounts cluster_counts(std::span<const std::uint32_t> papers) const;

    // All cluster n-grams scored, sorted by importance (ties: higher f_in,
    // then lexicographic), first n returned. Throws DataError when the
    // cluster has no abstract text or no out-cluster mass remains.
    std::vector<KeywordScore> top_keywords(std::span<const std::uint32_t> papers, int n) const;
    std::vector<KeywordScore> top_keywords(std::span<const std::uint32_t> papers) const;

private:
    struct NgramKey {
        std::uint32_t a, b, c;
        bool operator==(const NgramKey&) const = default;
    };
    struct NgramKeyHash {
        std::size_t operator()(const NgramKey& k) const;
    };
    using IntCounts = std::unordered_map<NgramKey, std::uint64_t, NgramKeyHash>;

    void count_ngrams(std::uint32_t paper, IntCounts& into, std::uint64_t& total) const;
    std::string ngram_string(const NgramKey& k) const;
    bool rank_less(const NgramKey& x, const NgramKey& y) const;

    static constexpr std::uint32_t kNone = UINT32_MAX;   // empty n-gram slot
    static constexpr std::uint32_t kBreak = UINT32_MAX - 1;  // sentence boundary

    const Corpus* corpus_;
    KeywordConfig config_;
    std::vector<std::string> vocab_;
    std::vector<std::uint32_t> lex_rank_;            // vocab index -> lexicographic rank
    std::vector<std::vector<std::uint32_t>> tokens_;  // per paper, kBreak-separated
    IntCounts corpus_counts_;
    std::uint64_t corpus_total_ = 0;
};

// Papers of each module at a level of the partition, keyed by module path.
// level >= 1 groups by path prefix of that length; level 0 means leaf modules.
struct LevelCluster {
    std::vector<std::uint32_t> path;
    std::string key;
    std::vector<std::uint32_t> papers;  // corpus indices
};
std::vector<LevelCluster> clusters_at_level(const PartitionData& partition, const Corpus& corpus,
                                            int level);

// Ranked keywords for every module at a level; modules that cannot be scored
// (no text, or a single cluster) get an empty list.
std::vector<std::pair<std::string, std::vector<KeywordScore>>> keywords_per_module(
    const KeywordScorer& scorer, const std::vector<LevelCluster>& clusters, int n);

using ModuleKeywords = std::vector<std::pair<std::string, std::vector<KeywordScore>>>;

// JSON object keyed by module path: ranked {ngram, f_in, f_out, importance}.
void write_keywords_json(const ModuleKeywords& keywords, std::ostream& out);
ModuleKeywords read_keywords_json(std::istream& in);

}  // namespace citescope
