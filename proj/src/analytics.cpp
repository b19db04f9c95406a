#include "citescope/analytics.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "citescope/errors.hpp"

namespace citescope {

bool ContainmentQuery::matches(std::string_view abstract) const {
    const std::string lower = to_lower(abstract);
    for (const std::string& w : must_contain)
        if (lower.find(to_lower(w)) == std::string::npos) return false;
    for (const std::string& w : must_not_contain)
        if (lower.find(to_lower(w)) != std::string::npos) return false;
    return true;
}

double containment_stats(const Corpus& corpus, std::span<const std::uint32_t> scope,
                         const ContainmentQuery& query) {
    if (query.must_contain.empty() && query.must_not_contain.empty())
        throw DataError("containment query needs at least one word");
    if (scope.empty()) throw DataError("containment query over an empty scope");
    std::uint64_t matched = 0;
#pragma omp parallel for schedule(static) reduction(+ : matched)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(scope.size()); ++k) {
        const std::uint32_t i = scope[static_cast<std::size_t>(k)];
        if (query.matches(corpus.papers().at(i).abstract)) ++matched;
    }
    return 100.0 * static_cast<double>(matched) / static_cast<double>(scope.size());
}

double containment_stats(const Corpus& corpus, const ContainmentQuery& query) {
    std::vector<std::uint32_t> all(corpus.size());
    std::iota(all.begin(), all.end(), 0u);
    return containment_stats(corpus, all, query);
}

ClusterSummary cluster_summary(const PartitionData& partition, std::size_t named) {
    std::map<std::uint32_t, std::uint64_t> sizes;
    for (const auto& [id, path] : partition.paths) {
        if (path.empty()) throw DataError("paper \"" + id + "\" has an empty module path");
        ++sizes[path[0]];
    }
    ClusterSummary summary;
    summary.total = partition.paths.size();

    std::vector<std::pair<std::uint32_t, std::uint64_t>> ordered(sizes.begin(), sizes.end());
    std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    for (std::size_t k = 0; k < ordered.size(); ++k) {
        const double share =
            100.0 * static_cast<double>(ordered[k].second) / static_cast<double>(summary.total);
        if (k < named) {
            summary.named.push_back({std::to_string(ordered[k].first), ordered[k].second, share});
        } else {
            summary.others_size += ordered[k].second;
        }
    }
    summary.others_share =
        100.0 * static_cast<double>(summary.others_size) / static_cast<double>(summary.total);
    return summary;
}

ClassShares class_shares(const Corpus& corpus, const std::vector<PhraseClass>& classes) {
    ClassShares out;
    std::vector<std::uint64_t> counts(classes.size(), 0);
    std::uint64_t unclassified = 0;

    std::vector<std::vector<std::string>> lowered(classes.size());
    for (std::size_t c = 0; c < classes.size(); ++c)
        for (const std::string& p : classes[c].phrases) lowered[c].push_back(to_lower(p));

    const auto& papers = corpus.papers();
    std::vector<std::uint8_t> label(papers.size(), 255);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(papers.size()); ++i) {
        const std::string lower = to_lower(papers[static_cast<std::size_t>(i)].abstract);
        std::uint8_t chosen = 255;
        for (std::size_t c = 0; c < classes.size(); ++c) {
            bool all = true;
            for (const std::string& p : lowered[c])
                if (lower.find(p) == std::string::npos) { all = false; break; }
            if (all) { chosen = static_cast<std::uint8_t>(c); break; }
        }
        label[static_cast<std::size_t>(i)] = chosen;
    }
    for (std::uint8_t l : label) {
        if (l == 255) ++unclassified;
        else ++counts[l];
    }

    const double denom = corpus.empty() ? 1.0 : static_cast<double>(corpus.size());
    for (std::size_t c = 0; c < classes.size(); ++c)
        out.shares.emplace_back(classes[c].name, 100.0 * static_cast<double>(counts[c]) / denom);
    out.unclassified =
        corpus.empty() ? 0.0 : 100.0 * static_cast<double>(unclassified) / denom;
    return out;
}

Timeline timeline(const Corpus& corpus, const std::vector<std::string>& phrases) {
    Timeline tl;
    for (const std::string& phrase : phrases) {
        const std::string lower = to_lower(phrase);
        std::map<int, std::uint64_t> by_year;
        for (const Paper& p : corpus.papers()) {
            if (!p.year) continue;
            if (to_lower(p.abstract).find(lower) != std::string::npos) ++by_year[*p.year];
        }
        tl.series.emplace_back(phrase, std::move(by_year));
    }
    return tl;
}

namespace {

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

void write_timeline_csv(const Timeline& tl, std::ostream& out) {
    out << "year,phrase,count\n";
    for (const auto& [phrase, by_year] : tl.series)
        for (const auto& [year, count] : by_year)
            out << year << ',' << csv_escape(phrase) << ',' << count << '\n';
}

std::vector<LevelContext> paper_context(std::string_view paper_id, const PartitionData& partition,
                                        const KeywordScorer& scorer, int top_n) {
    const std::size_t entry = partition.index_of(paper_id);
    if (entry == PartitionData::npos)
        throw DataError("unknown paper id \"" + std::string(paper_id) + "\"");
    const auto& path = partition.paths[entry].second;

    std::vector<LevelContext> out;
    for (std::size_t level = 1; level <= path.size(); ++level) {
        const auto clusters = clusters_at_level(partition, scorer.corpus(), static_cast<int>(level));
        std::vector<std::uint32_t> prefix(path.begin(), path.begin() + static_cast<long>(level));
        const std::string key = module_key(prefix);

        LevelContext ctx;
        ctx.level = static_cast<int>(level);
        ctx.module = key;
        for (const LevelCluster& c : clusters) {
            if (c.key != key) continue;
            ctx.module_size = c.papers.size();
            ctx.keywords = scorer.top_keywords(c.papers, top_n);
            break;
        }
        out.push_back(std::move(ctx));
    }
    return out;
}

namespace reference {

double containment_stats_serial(const Corpus& corpus, std::span<const std::uint32_t> scope,
                                const ContainmentQuery& query) {
    if (scope.empty()) throw DataError("containment query over an empty scope");
    std::uint64_t matched = 0;
    for (std::uint32_t i : scope)
        if (query.matches(corpus.papers().at(i).abstract)) ++matched;
    return 100.0 * static_cast<double>(matched) / static_cast<double>(scope.size());
}

}  // namespace reference

}  // namespace citescope
