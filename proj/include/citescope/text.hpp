#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace citescope {

// Ordered lemmatized lowercase tokens of one text.
struct TokenStream {
    std::vector<std::string> tokens;

    bool operator==(const TokenStream&) const = default;
};

// Deterministic rule lemmatizer: exception dictionary first, then suffix
// rules (plural -s/-es, -ies/-ied -> -y, -ing/-ed with e-restoration and
// consonant-doubling undo), else identity. Expects lowercase input.
class Lemmatizer {
public:
    // Built-in exception dictionary.
    Lemmatizer();

    // Two-column whitespace-separated "form lemma" lines; # starts a comment.
    // Loaded entries override built-ins.
    void load_exceptions(std::istream& in);

    std::string lemmatize(std::string_view token) const;

private:
    std::unordered_map<std::string, std::string> exceptions_;
};

// Lowercases, replaces every character outside [a-z0-9-] with a space, keeps
// hyphens only between alphanumerics, splits on whitespace, lemmatizes.
TokenStream preprocess(std::string_view text, const Lemmatizer& lemmatizer);

// Same, but split into sentences (on . ! ?) first; used when n-grams must not
// cross sentence boundaries.
std::vector<TokenStream> preprocess_sentences(std::string_view text, const Lemmatizer& lemmatizer);

}  // namespace citescope
