#include "citescope/ngrams.hpp"

#include "citescope/errors.hpp"

namespace citescope {

NgramCounts extract_ngrams(const TokenStream& tokens, const std::vector<int>& sizes) {
    if (sizes.empty()) throw DataError("n-gram sizes must be non-empty");
    for (int n : sizes)
        if (n < 1 || n > 3) throw DataError("n-gram size must be 1, 2 or 3");

    NgramCounts out;
    const std::size_t len = tokens.tokens.size();
    std::string key;
    for (int n : sizes) {
        if (len < static_cast<std::size_t>(n)) continue;
        for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= len; ++i) {
            key = tokens.tokens[i];
            for (int k = 1; k < n; ++k) {
                key.push_back(' ');
                key += tokens.tokens[i + static_cast<std::size_t>(k)];
            }
            ++out.counts[key];
            ++out.total;
        }
    }
    return out;
}

void merge_counts(NgramCounts& into, const NgramCounts& from) {
    for (const auto& [ngram, c] : from.counts) into.counts[ngram] += c;
    into.total += from.total;
}

}  // namespace citescope
