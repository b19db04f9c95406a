#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "citescope/text.hpp"

namespace citescope {

// Occurrence counts of space-joined n-grams; total is the number of n-gram
// occurrences in scope, equal to the sum of all counts.
struct NgramCounts {
    std::unordered_map<std::string, std::uint64_t> counts;
    std::uint64_t total = 0;

    std::uint64_t count(const std::string& ngram) const {
        auto it = counts.find(ngram);
        return it == counts.end() ? 0 : it->second;
    }
};

// Sliding-window n-grams for each requested size (1..3).
NgramCounts extract_ngrams(const TokenStream& tokens, const std::vector<int>& sizes);

// Commutative merge: order of merging never changes the result.
void merge_counts(NgramCounts& into, const NgramCounts& from);

}  // namespace citescope
