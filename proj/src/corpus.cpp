#include "citescope/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "citescope/errors.hpp"

namespace citescope {

std::string to_lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

// Drops self-references and duplicates, keeps the list sorted.
void normalize_references(Paper& paper) {
    auto& refs = paper.references;
    refs.erase(std::remove(refs.begin(), refs.end(), paper.id), refs.end());
    std::sort(refs.begin(), refs.end());
    refs.erase(std::unique(refs.begin(), refs.end()), refs.end());
}

}  // namespace

Corpus::Corpus(std::vector<Paper> papers, std::string provenance)
    : papers_(std::move(papers)), provenance_(std::move(provenance)) {
    for (Paper& p : papers_) normalize_references(p);
    std::sort(papers_.begin(), papers_.end(),
              [](const Paper& a, const Paper& b) { return a.id < b.id; });
    for (std::size_t i = 0; i + 1 < papers_.size(); ++i) {
        if (papers_[i].id == papers_[i + 1].id)
            throw DataError("duplicate paper id: " + papers_[i].id);
        if (papers_[i].id.empty())
            throw DataError("empty paper id");
    }
    if (!papers_.empty() && papers_.back().id.empty())
        throw DataError("empty paper id");
}

std::size_t Corpus::index_of(std::string_view id) const {
    auto it = std::lower_bound(papers_.begin(), papers_.end(), id,
                               [](const Paper& p, std::string_view v) { return p.id < v; });
    if (it == papers_.end() || it->id != id) return npos;
    return static_cast<std::size_t>(it - papers_.begin());
}

const Paper* Corpus::find(std::string_view id) const {
    std::size_t i = index_of(id);
    return i == npos ? nullptr : &papers_[i];
}

PhraseFilter::PhraseFilter(std::vector<std::string> phrases, FilterMode mode) : mode_(mode) {
    if (phrases.empty()) throw DataError("phrase filter needs at least one phrase");
    for (const auto& p : phrases) {
        std::string t = trim(p);
        if (t.empty()) throw DataError("phrase filter contains an empty phrase");
        phrases_.push_back(to_lower(t));
    }
}

bool PhraseFilter::matches(std::string_view abstract) const {
    std::string lower = to_lower(abstract);
    if (mode_ == FilterMode::AnyOf) {
        for (const auto& p : phrases_)
            if (lower.find(p) != std::string::npos) return true;
        return false;
    }
    for (const auto& p : phrases_)
        if (lower.find(p) == std::string::npos) return false;
    return true;
}

int TsvColumnMap::max_index() const {
    return std::max({id, title, abstract, year, references});
}

Corpus parse_jsonl(std::istream& in, std::string provenance) {
    std::vector<Paper> papers;
    std::unordered_map<std::string, std::size_t> first_line_of_id;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;

        nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object())
            throw DataError("malformed JSON at line " + std::to_string(line_no));

        if (!obj.contains("id") || !obj["id"].is_string())
            throw DataError("missing string \"id\" at line " + std::to_string(line_no));

        Paper p;
        p.id = obj["id"].get<std::string>();
        if (p.id.empty())
            throw DataError("empty \"id\" at line " + std::to_string(line_no));

        auto [it, inserted] = first_line_of_id.emplace(p.id, line_no);
        if (!inserted)
            throw DataError("duplicate paper id \"" + p.id + "\" at lines " +
                            std::to_string(it->second) + " and " + std::to_string(line_no));

        if (obj.contains("title") && obj["title"].is_string())
            p.title = obj["title"].get<std::string>();
        if (obj.contains("abstract") && obj["abstract"].is_string())
            p.abstract = obj["abstract"].get<std::string>();
        if (obj.contains("year") && obj["year"].is_number_integer())
            p.year = obj["year"].get<int>();
        if (obj.contains("references")) {
            if (!obj["references"].is_array())
                throw DataError("\"references\" is not an array at line " + std::to_string(line_no));
            for (const auto& r : obj["references"]) {
                if (!r.is_string())
                    throw DataError("non-string reference at line " + std::to_string(line_no));
                p.references.push_back(r.get<std::string>());
            }
        }
        papers.push_back(std::move(p));
    }
    return Corpus(std::move(papers), std::move(provenance));
}

Corpus parse_tsv(std::istream& in, const TsvColumnMap& columns,
                 const std::string& reference_separator, std::string provenance) {
    if (columns.id < 0) throw DataError("TSV column map must assign the id column");
    if (reference_separator.empty()) throw DataError("empty reference separator");

    std::vector<Paper> papers;
    std::unordered_map<std::string, std::size_t> first_line_of_id;
    const int max_col = columns.max_index();

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;

        std::vector<std::string> cols;
        std::size_t start = 0;
        while (true) {
            std::size_t tab = line.find('\t', start);
            if (tab == std::string::npos) {
                cols.push_back(line.substr(start));
                break;
            }
            cols.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
        if (static_cast<int>(cols.size()) <= max_col)
            throw DataError("row " + std::to_string(line_no) + " has " +
                            std::to_string(cols.size()) + " columns, expected at least " +
                            std::to_string(max_col + 1));

        Paper p;
        p.id = trim(cols[static_cast<std::size_t>(columns.id)]);
        if (p.id.empty())
            throw DataError("empty id in row " + std::to_string(line_no));

        auto [it, inserted] = first_line_of_id.emplace(p.id, line_no);
        if (!inserted)
            throw DataError("duplicate paper id \"" + p.id + "\" at rows " +
                            std::to_string(it->second) + " and " + std::to_string(line_no));

        if (columns.title >= 0) p.title = cols[static_cast<std::size_t>(columns.title)];
        if (columns.abstract >= 0) p.abstract = cols[static_cast<std::size_t>(columns.abstract)];
        if (columns.year >= 0) {
            std::string y = trim(cols[static_cast<std::size_t>(columns.year)]);
            if (!y.empty()) {
                try {
                    p.year = std::stoi(y);
                } catch (const std::exception&) {
                    throw DataError("bad year \"" + y + "\" in row " + std::to_string(line_no));
                }
            }
        }
        if (columns.references >= 0) {
            const std::string& field = cols[static_cast<std::size_t>(columns.references)];
            std::size_t pos = 0;
            while (pos <= field.size() && !field.empty()) {
                std::size_t sep = field.find(reference_separator, pos);
                std::string ref = trim(sep == std::string::npos ? field.substr(pos)
                                                                : field.substr(pos, sep - pos));
                if (!ref.empty()) p.references.push_back(ref);
                if (sep == std::string::npos) break;
                pos = sep + reference_separator.size();
            }
        }
        papers.push_back(std::move(p));
    }
    return Corpus(std::move(papers), std::move(provenance));
}

void write_jsonl(const Corpus& corpus, std::ostream& out) {
    for (const Paper& p : corpus.papers()) {
        nlohmann::ordered_json obj;
        obj["id"] = p.id;
        obj["title"] = p.title;
        obj["abstract"] = p.abstract;
        if (p.year) obj["year"] = *p.year;
        obj["references"] = p.references;
        out << obj.dump() << '\n';
    }
}

Corpus subset_corpus(const Corpus& corpus, std::span<const std::string> ids) {
    std::unordered_set<std::string_view> wanted;
    for (const std::string& id : ids) {
        if (corpus.index_of(id) == Corpus::npos)
            throw DataError("id \"" + id + "\" is not in the corpus");
        wanted.insert(id);
    }
    std::vector<Paper> papers;
    papers.reserve(wanted.size());
    for (const Paper& p : corpus.papers()) {
        if (!wanted.count(p.id)) continue;
        Paper copy = p;
        auto& refs = copy.references;
        refs.erase(std::remove_if(refs.begin(), refs.end(),
                                  [&](const std::string& r) { return !wanted.count(r); }),
                   refs.end());
        papers.push_back(std::move(copy));
    }
    return Corpus(std::move(papers), corpus.provenance());
}

Corpus filter_by_phrases(const Corpus& corpus, const PhraseFilter& filter) {
    std::vector<char> keep(corpus.size(), 0);
    const auto& papers = corpus.papers();

#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(papers.size()); ++i)
        keep[static_cast<std::size_t>(i)] = filter.matches(papers[static_cast<std::size_t>(i)].abstract) ? 1 : 0;

    std::unordered_set<std::string_view> kept_ids;
    for (std::size_t i = 0; i < papers.size(); ++i)
        if (keep[i]) kept_ids.insert(papers[i].id);

    std::vector<Paper> out;
    out.reserve(kept_ids.size());
    for (std::size_t i = 0; i < papers.size(); ++i) {
        if (!keep[i]) continue;
        Paper p = papers[i];
        auto& refs = p.references;
        refs.erase(std::remove_if(refs.begin(), refs.end(),
                                  [&](const std::string& r) { return !kept_ids.count(r); }),
                   refs.end());
        out.push_back(std::move(p));
    }
    return Corpus(std::move(out), corpus.provenance());
}

}  // namespace citescope
