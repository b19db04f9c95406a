#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace citescope {

// One bibliographic record. references are sorted, de-duplicated and never
// contain the paper's own id.
struct Paper {
    std::string id;
    std::string title;
    std::string abstract;
    std::optional<int> year;
    std::vector<std::string> references;
};

// Immutable ordered collection of papers, sorted by id.
class Corpus {
public:
    Corpus() = default;
    // Sorts by id and validates uniqueness.
    explicit Corpus(std::vector<Paper> papers, std::string provenance = "");

    const std::vector<Paper>& papers() const { return papers_; }
    const std::string& provenance() const { return provenance_; }
    std::size_t size() const { return papers_.size(); }
    bool empty() const { return papers_.empty(); }

    // Index of a paper id, or npos.
    std::size_t index_of(std::string_view id) const;
    const Paper* find(std::string_view id) const;

    bool operator==(const Corpus& other) const { return papers_ == other.papers_; }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::vector<Paper> papers_;
    std::string provenance_;
};

inline bool operator==(const Paper& a, const Paper& b) {
    return a.id == b.id && a.title == b.title && a.abstract == b.abstract &&
           a.year == b.year && a.references == b.references;
}

enum class FilterMode { AnyOf, AllOf };

// Lowercase phrases matched as contiguous substrings of the raw abstract.
class PhraseFilter {
public:
    PhraseFilter(std::vector<std::string> phrases, FilterMode mode);

    const std::vector<std::string>& phrases() const { return phrases_; }
    FilterMode mode() const { return mode_; }

    bool matches(std::string_view abstract) const;

private:
    std::vector<std::string> phrases_;
    FilterMode mode_;
};

// Column indices for TSV parsing; -1 means "not present". id is required.
struct TsvColumnMap {
    int id = -1;
    int title = -1;
    int abstract = -1;
    int year = -1;
    int references = -1;

    int max_index() const;
};

Corpus parse_jsonl(std::istream& in, std::string provenance = "jsonl");
Corpus parse_tsv(std::istream& in, const TsvColumnMap& columns,
                 const std::string& reference_separator = ";",
                 std::string provenance = "tsv");

// Canonical JSONL serialization; parse_jsonl(write_jsonl(c)) == c.
void write_jsonl(const Corpus& corpus, std::ostream& out);

// Keeps papers whose abstract matches the filter and prunes references to
// the surviving id set.
Corpus filter_by_phrases(const Corpus& corpus, const PhraseFilter& filter);

// Restriction to an id subset, references pruned; unknown ids throw.
Corpus subset_corpus(const Corpus& corpus, std::span<const std::string> ids);

std::string to_lower(std::string_view text);

}  // namespace citescope
