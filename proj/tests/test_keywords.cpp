#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "citescope/errors.hpp"
#include "citescope/keywords.hpp"
#include "support/generators.hpp"

using namespace citescope;

namespace {

NgramCounts counts_of(std::initializer_list<std::pair<const char*, std::uint64_t>> entries,
                      std::uint64_t total) {
    NgramCounts c;
    for (const auto& [k, v] : entries) c.counts[k] = v;
    c.total = total;
    return c;
}

// independent recount: tokenize with the public preprocess op and slide the
// window by hand
std::map<std::string, std::uint64_t> recount(const Corpus& corpus,
                                             const std::vector<std::uint32_t>& papers,
                                             std::uint64_t* total_out) {
    Lemmatizer lemma;
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t total = 0;
    for (std::uint32_t p : papers) {
        const auto tokens = preprocess(corpus.papers()[p].abstract, lemma).tokens;
        for (std::size_t n = 1; n <= 3; ++n) {
            if (tokens.size() < n) continue;
            for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
                std::string key = tokens[i];
                for (std::size_t k = 1; k < n; ++k) key += " " + tokens[i + k];
                ++counts[key];
                ++total;
            }
        }
    }
    if (total_out) *total_out = total;
    return counts;
}

}  // namespace

TEST_CASE("in_cluster_frequency: the worked ratio and the absence case") {
    NgramCounts c = counts_of({{"protein", 4}}, 10);
    CHECK(in_cluster_frequency(c, "protein") == 0.4);
    CHECK(in_cluster_frequency(c, "missing") == 0.0);
    NgramCounts empty;
    CHECK_THROWS_AS(in_cluster_frequency(empty, "x"), DataError);
}

TEST_CASE("out_cluster_frequency: worked example and edge cases") {
    // f_B(w)=6, n_B=20, n_c=10, N=30 -> 6/20 = 0.3
    std::vector<NgramCounts> clusters;
    clusters.push_back(counts_of({{"other", 10}}, 10));      // cluster c
    clusters.push_back(counts_of({{"w", 6}, {"x", 14}}, 20));  // cluster B
    CHECK(out_cluster_frequency(clusters, 0, "w") == 0.3);

    // w occurring only inside c scores 0 outside
    CHECK(out_cluster_frequency(clusters, 1, "x") == 0.0);

    // a single cluster has no outside
    std::vector<NgramCounts> single;
    single.push_back(counts_of({{"w", 2}}, 2));
    CHECK_THROWS_AS(out_cluster_frequency(single, 0, "w"), DataError);
}

TEST_CASE("importance is the plain difference") {
    CHECK(importance(0.4, 0.0) == 0.4);
    CHECK(importance(0.2, 0.3) == doctest::Approx(-0.1));
    CHECK(importance(0.25, 0.25) == 0.0);
}

TEST_CASE("KeywordScorer: values match a brute-force recount oracle") {
    std::vector<std::uint32_t> cluster_of;
    Corpus corpus = testgen::planted_keyword_corpus(3, 20, 11, &cluster_of);
    KeywordScorer scorer(corpus);

    std::vector<std::vector<std::uint32_t>> clusters(3);
    for (std::uint32_t i = 0; i < corpus.size(); ++i) clusters[cluster_of[i]].push_back(i);

    std::uint64_t grand_total = 0;
    std::vector<std::uint32_t> everything;
    for (std::uint32_t i = 0; i < corpus.size(); ++i) everything.push_back(i);
    auto corpus_counts = recount(corpus, everything, &grand_total);
    CHECK(scorer.corpus_ngram_total() == grand_total);

    for (std::size_t c = 0; c < 3; ++c) {
        std::uint64_t n_c = 0;
        auto cluster_counts = recount(corpus, clusters[c], &n_c);

        auto scored = scorer.top_keywords(clusters[c], 1000000);
        for (const KeywordScore& s : scored) {
            const auto f_c = cluster_counts.at(s.ngram);
            const double f_in = double(f_c) / double(n_c);
            const double f_out =
                double(corpus_counts.at(s.ngram) - f_c) / double(grand_total - n_c);
            CHECK(s.f_in == f_in);
            CHECK(s.f_out == f_out);
            CHECK(s.importance == f_in - f_out);
            CHECK(s.f_in >= 0.0);
            CHECK(s.f_in <= 1.0);
            CHECK(s.f_out >= 0.0);
            CHECK(s.f_out <= 1.0);
        }
        // every cluster n-gram is scored
        CHECK(scored.size() == cluster_counts.size());

        // planted signature word ranks first
        CHECK(scored.front().ngram == "signature" + std::to_string(c));
    }

    SUBCASE("per-cluster counts sum to the corpus-wide count") {
        for (const auto& [ngram, total_count] : corpus_counts) {
            std::uint64_t sum = 0;
            for (std::size_t c = 0; c < 3; ++c) {
                auto cc = recount(corpus, clusters[c], nullptr);
                auto it = cc.find(ngram);
                if (it != cc.end()) sum += it->second;
            }
            CHECK(sum == total_count);
            CHECK(scorer.cluster_counts(everything).count(ngram) == total_count);
        }
    }
}

TEST_CASE("top_keywords: N beyond the distinct n-grams returns them all") {
    std::vector<Paper> papers(2);
    papers[0].id = "a";
    papers[0].abstract = "alpha beta";
    papers[1].id = "b";
    papers[1].abstract = "gamma";
    Corpus corpus(papers);
    KeywordScorer scorer(corpus);
    std::vector<std::uint32_t> cluster = {0};
    auto scores = scorer.top_keywords(cluster, 50);
    CHECK(scores.size() == 3);  // alpha, beta, alpha beta
}

TEST_CASE("top_keywords: cluster without text is an error") {
    std::vector<Paper> papers(2);
    papers[0].id = "a";  // empty abstract
    papers[1].id = "b";
    papers[1].abstract = "some words";
    Corpus corpus(papers);
    KeywordScorer scorer(corpus);
    std::vector<std::uint32_t> empty_text = {0};
    CHECK_THROWS_AS(scorer.top_keywords(empty_text, 5), DataError);
    std::vector<std::uint32_t> none;
    CHECK_THROWS_AS(scorer.top_keywords(none, 5), DataError);
}

TEST_CASE("top_keywords: the whole corpus as one cluster is an error") {
    Corpus corpus = testgen::planted_keyword_corpus(2, 5, 3);
    KeywordScorer scorer(corpus);
    std::vector<std::uint32_t> everything;
    for (std::uint32_t i = 0; i < corpus.size(); ++i) everything.push_back(i);
    CHECK_THROWS_AS(scorer.top_keywords(everything, 5), DataError);
}

TEST_CASE("top_keywords: stable under permutation of the papers") {
    std::vector<std::uint32_t> cluster_of;
    Corpus corpus = testgen::planted_keyword_corpus(3, 15, 7, &cluster_of);
    KeywordScorer scorer(corpus);
    std::vector<std::uint32_t> cluster;
    for (std::uint32_t i = 0; i < corpus.size(); ++i)
        if (cluster_of[i] == 1) cluster.push_back(i);

    auto base = scorer.top_keywords(cluster, 10);
    std::mt19937_64 rng(2);
    for (int round = 0; round < 5; ++round) {
        std::shuffle(cluster.begin(), cluster.end(), rng);
        auto again = scorer.top_keywords(cluster, 10);
        REQUIRE(again.size() == base.size());
        for (std::size_t i = 0; i < base.size(); ++i) {
            CHECK(again[i].ngram == base[i].ngram);
            CHECK(again[i].importance == base[i].importance);
        }
    }
}

TEST_CASE("duplicating every abstract in a cluster leaves F_in unchanged") {
    std::vector<Paper> papers(4);
    papers[0] = {"a", "", "mass spectrometry of proteins", {}, {}};
    papers[1] = {"b", "", "capillary separation buffer", {}, {}};
    papers[2] = {"c", "", "mass spectrometry of proteins", {}, {}};
    papers[3] = {"d", "", "capillary separation buffer", {}, {}};
    Corpus corpus(papers);
    KeywordScorer scorer(corpus);

    std::vector<std::uint32_t> once = {0, 1};
    std::vector<std::uint32_t> twice = {0, 1, 2, 3};
    NgramCounts c1 = scorer.cluster_counts(once);
    NgramCounts c2 = scorer.cluster_counts(twice);
    for (const auto& [ngram, count] : c1.counts)
        CHECK(in_cluster_frequency(c1, ngram) == in_cluster_frequency(c2, ngram));
}

TEST_CASE("a word absent from the cluster would never score positive") {
    // I <= 0 for absent words follows from f_in = 0; cluster scoring covers
    // present words, so check the relation directly.
    CHECK(importance(0.0, 0.2) <= 0.0);
    CHECK(importance(0.0, 0.0) == 0.0);
}

TEST_CASE("clusters_at_level: prefixes group papers; leaf keeps full paths") {
    PartitionData partition;
    partition.levels = 2;
    partition.paths = {
        {"a", {0, 0}}, {"b", {0, 1}}, {"c", {1}}, {"d", {0, 0}},
    };
    std::vector<Paper> papers(4);
    papers[0].id = "a";
    papers[1].id = "b";
    papers[2].id = "c";
    papers[3].id = "d";
    for (auto& p : papers) p.abstract = "text";
    Corpus corpus(papers);

    auto level1 = clusters_at_level(partition, corpus, 1);
    REQUIRE(level1.size() == 2);
    CHECK(level1[0].key == "0");
    CHECK(level1[0].papers.size() == 3);
    CHECK(level1[1].key == "1");
    CHECK(level1[1].papers.size() == 1);

    auto leaf = clusters_at_level(partition, corpus, 0);
    REQUIRE(leaf.size() == 3);
    CHECK(leaf[0].key == "0/0");
    CHECK(leaf[0].papers.size() == 2);
    CHECK(leaf[1].key == "0/1");
    CHECK(leaf[2].key == "1");
}

TEST_CASE("keywords_per_module: unscoreable modules get empty lists") {
    PartitionData partition;
    partition.levels = 1;
    partition.paths = {{"a", {0}}, {"b", {1}}, {"c", {2}}};
    std::vector<Paper> papers(3);
    papers[0].id = "a";
    papers[0].abstract = "alpha beta";
    papers[1].id = "b";  // no text: module 1 cannot be scored
    papers[2].id = "c";
    papers[2].abstract = "gamma delta";
    Corpus corpus(papers);
    KeywordScorer scorer(corpus);
    auto clusters = clusters_at_level(partition, corpus, 1);
    auto keywords = keywords_per_module(scorer, clusters, 5);
    REQUIRE(keywords.size() == 3);
    CHECK(keywords[0].first == "0");
    CHECK_FALSE(keywords[0].second.empty());
    CHECK(keywords[1].second.empty());
    CHECK_FALSE(keywords[2].second.empty());
}

TEST_CASE("keywords json round-trip") {
    ModuleKeywords keywords;
    keywords.push_back({"0", {{"mass spectrometry", 0.5, 0.125, 0.375}}});
    keywords.push_back({"1", {}});
    std::stringstream buf;
    write_keywords_json(keywords, buf);
    ModuleKeywords back = read_keywords_json(buf);
    REQUIRE(back.size() == 2);
    CHECK(back[0].first == "0");
    REQUIRE(back[0].second.size() == 1);
    CHECK(back[0].second[0].ngram == "mass spectrometry");
    CHECK(back[0].second[0].importance == 0.375);
    CHECK(back[1].second.empty());
}

TEST_CASE("strict normalization divides by the paper count") {
    std::vector<Paper> papers(3);
    papers[0] = {"a", "", "x y", {}, {}};         // 3 n-grams
    papers[1] = {"b", "", "x", {}, {}};           // 1
    papers[2] = {"c", "", "z w q", {}, {}};       // 6
    Corpus corpus(papers);
    KeywordConfig strict;
    strict.strict_node_count_normalization = true;
    KeywordScorer scorer(corpus, strict);
    // cluster {a}: n_c = 3 equals N = 3 papers -> no out-cluster mass left
    std::vector<std::uint32_t> cluster = {0};
    CHECK_THROWS_AS(scorer.top_keywords(cluster, 5), DataError);

    // cluster {b}: n_c = 1 < 3 -> denominators use papers, not n-grams
    std::vector<std::uint32_t> small = {1};
    auto scores = scorer.top_keywords(small, 5);
    REQUIRE(scores.size() == 1);
    CHECK(scores[0].ngram == "x");
    CHECK(scores[0].f_in == 1.0);
    CHECK(scores[0].f_out == doctest::Approx(1.0 / 2.0));  // one other "x" over N - n_c = 2
}
