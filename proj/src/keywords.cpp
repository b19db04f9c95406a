#include "citescope/keywords.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

#include "citescope/errors.hpp"

namespace citescope {

namespace {

const char* kStopWords[] = {
    "a",    "an",   "and",  "are", "as",   "at",   "be",   "by",    "for",  "from",
    "have", "in",   "is",   "it",  "its",  "of",   "on",   "or",    "that", "the",
    "their", "these", "this", "to", "was",  "we",   "were", "which", "with",
};

bool is_stop_word(const std::string& w) {
    static const std::unordered_set<std::string> stop(std::begin(kStopWords), std::end(kStopWords));
    return stop.count(w) != 0;
}

}  // namespace

double in_cluster_frequency(const NgramCounts& cluster_counts, const std::string& ngram) {
    if (cluster_counts.total == 0) throw DataError("cluster has no n-grams");
    return static_cast<double>(cluster_counts.count(ngram)) /
           static_cast<double>(cluster_counts.total);
}

double out_cluster_frequency(const std::vector<NgramCounts>& all_clusters, std::size_t cluster,
                             const std::string& ngram) {
    if (cluster >= all_clusters.size()) throw DataError("cluster index out of range");
    std::uint64_t n_total = 0, f_out = 0;
    for (std::size_t a = 0; a < all_clusters.size(); ++a) {
        n_total += all_clusters[a].total;
        if (a != cluster) f_out += all_clusters[a].count(ngram);
    }
    const std::uint64_t n_c = all_clusters[cluster].total;
    if (n_total == n_c) throw DataError("out-cluster frequency needs more than one cluster");
    return static_cast<double>(f_out) / static_cast<double>(n_total - n_c);
}

double importance(double f_in, double f_out) { return f_in - f_out; }

std::size_t KeywordScorer::NgramKeyHash::operator()(const NgramKey& k) const {
    std::uint64_t x = (static_cast<std::uint64_t>(k.a) << 32) ^ k.b;
    x ^= static_cast<std::uint64_t>(k.c) * 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return static_cast<std::size_t>(x ^ (x >> 31));
}

KeywordScorer::KeywordScorer(const Corpus& corpus, KeywordConfig config,
                             const Lemmatizer* lemmatizer)
    : corpus_(&corpus), config_(std::move(config)) {
    if (config_.ngram_sizes.empty()) throw DataError("n-gram sizes must be non-empty");
    for (int n : config_.ngram_sizes)
        if (n < 1 || n > 3) throw DataError("n-gram size must be 1, 2 or 3");

    const Lemmatizer owned_lemmatizer;
    const Lemmatizer& lemma = lemmatizer ? *lemmatizer : owned_lemmatizer;
    const auto& papers = corpus.papers();
    tokens_.resize(papers.size());

    // Tokenize in parallel chunks; intern serially so ids are reproducible.
    std::unordered_map<std::string, std::uint32_t> intern;
    constexpr std::size_t kChunk = 1024;
    std::vector<std::vector<TokenStream>> scratch(std::min(kChunk, papers.size()));
    for (std::size_t base = 0; base < papers.size(); base += kChunk) {
        const std::size_t hi = std::min(base + kChunk, papers.size());
#pragma omp parallel for schedule(dynamic, 16)
        for (std::int64_t i = static_cast<std::int64_t>(base); i < static_cast<std::int64_t>(hi); ++i) {
            const std::string& text = papers[static_cast<std::size_t>(i)].abstract;
            auto& sentences = scratch[static_cast<std::size_t>(i) - base];
            if (config_.block_sentence_boundaries)
                sentences = preprocess_sentences(text, lemma);
            else
                sentences = {preprocess(text, lemma)};
        }
        for (std::size_t i = base; i < hi; ++i) {
            auto& out = tokens_[i];
            bool first_sentence = true;
            for (TokenStream& s : scratch[i - base]) {
                if (!first_sentence) out.push_back(kBreak);
                first_sentence = false;
                for (std::string& tok : s.tokens) {
                    if (config_.use_stop_list && is_stop_word(tok)) continue;
                    auto [it, inserted] =
                        intern.emplace(std::move(tok), static_cast<std::uint32_t>(vocab_.size()));
                    if (inserted) vocab_.push_back(it->first);
                    out.push_back(it->second);
                }
            }
            scratch[i - base].clear();
        }
    }

    // Lexicographic rank of each vocab id; joined n-grams compare by rank
    // tuples exactly as their space-joined strings would.
    std::vector<std::uint32_t> order(vocab_.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t x, std::uint32_t y) { return vocab_[x] < vocab_[y]; });
    lex_rank_.resize(vocab_.size());
    for (std::uint32_t r = 0; r < order.size(); ++r) lex_rank_[order[r]] = r;

    for (std::uint32_t i = 0; i < papers.size(); ++i)
        count_ngrams(i, corpus_counts_, corpus_total_);
}

void KeywordScorer::count_ngrams(std::uint32_t paper, IntCounts& into,
                                 std::uint64_t& total) const {
    const auto& toks = tokens_[paper];
    for (int n : config_.ngram_sizes) {
        const std::size_t width = static_cast<std::size_t>(n);
        if (toks.size() < width) continue;
        for (std::size_t i = 0; i + width <= toks.size(); ++i) {
            bool crosses_break = false;
            for (std::size_t k = 0; k < width; ++k)
                if (toks[i + k] == kBreak) { crosses_break = true; break; }
            if (crosses_break) continue;
            NgramKey key{toks[i], width > 1 ? toks[i + 1] : kNone, width > 2 ? toks[i + 2] : kNone};
            ++into[key];
            ++total;
        }
    }
}

std::string KeywordScorer::ngram_string(const NgramKey& k) const {
    std::string s = vocab_[k.a];
    if (k.b != kNone) {
        s.push_back(' ');
        s += vocab_[k.b];
    }
    if (k.c != kNone) {
        s.push_back(' ');
        s += vocab_[k.c];
    }
    return s;
}

bool KeywordScorer::rank_less(const NgramKey& x, const NgramKey& y) const {
    const auto rank = [&](std::uint32_t id) {
        return id == kNone ? UINT32_MAX : lex_rank_[id];
    };
    if (rank(x.a) != rank(y.a)) return rank(x.a) < rank(y.a);
    // a missing slot sorts before any word, matching shorter-string order
    const auto rank2 = [&](std::uint32_t id) { return id == kNone ? 0u : lex_rank_[id] + 1u; };
    if (rank2(x.b) != rank2(y.b)) return rank2(x.b) < rank2(y.b);
    return rank2(x.c) < rank2(y.c);
}

NgramCounts KeywordScorer::cluster_counts(std::span<const std::uint32_t> papers) const {
    IntCounts counts;
    std::uint64_t total = 0;
    for (std::uint32_t p : papers) {
        if (p >= tokens_.size()) throw DataError("paper index out of range");
        count_ngrams(p, counts, total);
    }
    NgramCounts out;
    out.total = total;
    out.counts.reserve(counts.size());
    for (const auto& [key, c] : counts) out.counts.emplace(ngram_string(key), c);
    return out;
}

std::vector<KeywordScore> KeywordScorer::top_keywords(std::span<const std::uint32_t> papers,
                                                      int n) const {
    if (n < 1) throw DataError("keyword count must be at least 1");
    if (papers.empty()) throw DataError("empty cluster");

    IntCounts cluster;
    std::uint64_t cluster_total = 0;
    for (std::uint32_t p : papers) {
        if (p >= tokens_.size()) throw DataError("paper index out of range");
        count_ngrams(p, cluster, cluster_total);
    }
    if (cluster_total == 0) throw DataError("cluster has no abstract text");

    const std::uint64_t grand_total = config_.strict_node_count_normalization
                                          ? static_cast<std::uint64_t>(corpus_->size())
                                          : corpus_total_;
    if (grand_total <= cluster_total)
        throw DataError("out-cluster frequency needs more than one cluster");
    const double out_denom = static_cast<double>(grand_total - cluster_total);

    struct Scored {
        NgramKey key;
        double f_in, f_out, importance;
    };
    std::vector<Scored> scores;
    scores.reserve(cluster.size());
    for (const auto& [key, f_c] : cluster) {
        Scored s{};
        s.key = key;
        s.f_in = static_cast<double>(f_c) / static_cast<double>(cluster_total);
        s.f_out = static_cast<double>(corpus_counts_.at(key) - f_c) / out_denom;
        s.importance = s.f_in - s.f_out;
        scores.push_back(s);
    }
    std::sort(scores.begin(), scores.end(), [&](const Scored& a, const Scored& b) {
        if (a.importance != b.importance) return a.importance > b.importance;
        if (a.f_in != b.f_in) return a.f_in > b.f_in;
        return rank_less(a.key, b.key);
    });
    if (scores.size() > static_cast<std::size_t>(n)) scores.resize(static_cast<std::size_t>(n));

    std::vector<KeywordScore> out;
    out.reserve(scores.size());
    for (const Scored& s : scores)
        out.push_back({ngram_string(s.key), s.f_in, s.f_out, s.importance});
    return out;
}

std::vector<KeywordScore> KeywordScorer::top_keywords(std::span<const std::uint32_t> papers) const {
    return top_keywords(papers, config_.top_n);
}

std::vector<LevelCluster> clusters_at_level(const PartitionData& partition, const Corpus& corpus,
                                            int level) {
    std::vector<LevelCluster> clusters;
    std::vector<std::pair<std::vector<std::uint32_t>, std::uint32_t>> entries;
    entries.reserve(partition.paths.size());
    for (const auto& [id, path] : partition.paths) {
        const std::size_t paper = corpus.index_of(id);
        if (paper == Corpus::npos)
            throw DataError("partition paper \"" + id + "\" is not in the corpus");
        std::vector<std::uint32_t> prefix = path;
        if (level >= 1 && prefix.size() > static_cast<std::size_t>(level))
            prefix.resize(static_cast<std::size_t>(level));
        entries.emplace_back(std::move(prefix), static_cast<std::uint32_t>(paper));
    }
    std::sort(entries.begin(), entries.end());
    for (auto& [prefix, paper] : entries) {
        if (clusters.empty() || clusters.back().path != prefix) {
            LevelCluster c;
            c.path = prefix;
            c.key = module_key(prefix);
            clusters.push_back(std::move(c));
        }
        clusters.back().papers.push_back(paper);
    }
    return clusters;
}

std::vector<std::pair<std::string, std::vector<KeywordScore>>> keywords_per_module(
    const KeywordScorer& scorer, const std::vector<LevelCluster>& clusters, int n) {
    std::vector<std::pair<std::string, std::vector<KeywordScore>>> out;
    out.reserve(clusters.size());
    for (const LevelCluster& c : clusters) {
        std::vector<KeywordScore> scores;
        try {
            scores = scorer.top_keywords(c.papers, n);
        } catch (const DataError&) {
            // unscoreable module (no text or single cluster): empty list
        }
        out.emplace_back(c.key, std::move(scores));
    }
    return out;
}

void write_keywords_json(const ModuleKeywords& keywords, std::ostream& out) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    for (const auto& [key, scores] : keywords) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const KeywordScore& s : scores) {
            nlohmann::ordered_json k;
            k["ngram"] = s.ngram;
            k["f_in"] = s.f_in;
            k["f_out"] = s.f_out;
            k["importance"] = s.importance;
            arr.push_back(std::move(k));
        }
        doc[key] = std::move(arr);
    }
    out << doc.dump(2) << '\n';
}

ModuleKeywords read_keywords_json(std::istream& in) {
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) throw DataError("malformed keywords file");
    ModuleKeywords out;
    for (const auto& [key, arr] : doc.items()) {
        std::vector<KeywordScore> scores;
        for (const auto& k : arr) {
            KeywordScore s;
            s.ngram = k.value("ngram", "");
            s.f_in = k.value("f_in", 0.0);
            s.f_out = k.value("f_out", 0.0);
            s.importance = k.value("importance", 0.0);
            scores.push_back(std::move(s));
        }
        out.emplace_back(key, std::move(scores));
    }
    return out;
}

}  // namespace citescope
