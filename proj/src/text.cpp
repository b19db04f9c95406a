#include "citescope/text.hpp"

#include <cctype>
#include <istream>

namespace citescope {

namespace {

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }
bool is_alnum_ascii(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

// Built-in irregular forms. The file-based dictionary can extend or override.
const std::pair<const char*, const char*> kExceptions[] = {
    {"am", "be"},        {"is", "be"},        {"are", "be"},      {"was", "be"},
    {"were", "be"},      {"been", "be"},      {"being", "be"},    {"has", "have"},
    {"had", "have"},     {"having", "have"},  {"does", "do"},     {"did", "do"},
    {"done", "do"},      {"doing", "do"},     {"going", "go"},    {"using", "use"},
    {"used", "use"},     {"made", "make"},    {"found", "find"},  {"shown", "show"},
    {"showed", "show"},  {"given", "give"},   {"gave", "give"},   {"taken", "take"},
    {"took", "take"},    {"based", "base"},   {"species", "species"},
    {"analyses", "analysis"}, {"men", "man"}, {"women", "woman"}, {"children", "child"},
    {"described", "describe"}, {"describing", "describe"}, {"created", "create"},
    {"related", "relate"}, {"studied", "study"}, {"carried", "carry"},
    {"higher", "high"},  {"lower", "low"},    {"better", "good"}, {"best", "good"},
    {"gases", "gas"},    {"viruses", "virus"}, {"controlled", "control"},
    {"controlling", "control"}, {"induced", "induce"}, {"produced", "produce"},
    {"reduced", "reduce"}, {"measured", "measure"}, {"measuring", "measure"},
};

// After stripping -ed/-ing: restore a dropped final e or undo consonant
// doubling.
std::string fix_stem(std::string stem) {
    const std::size_t n = stem.size();
    if (n >= 2) {
        const std::string_view tail2 = std::string_view(stem).substr(n - 2);
        if (tail2 == "bl" || tail2 == "iz" || tail2 == "yz" || (tail2 == "at" && n >= 6)) {
            stem.push_back('e');
            return stem;
        }
        const char last = stem[n - 1];
        if (last == stem[n - 2] && !is_vowel(last) && last != 'l' && last != 's' && last != 'z') {
            stem.pop_back();
            return stem;
        }
        if (n >= 3 && !is_vowel(stem[n - 2]) && stem[n - 2] != 'y' && stem[n - 2] != last &&
            (last == 'c' || last == 'g' || last == 'l' || last == 'u' || last == 'v')) {
            stem.push_back('e');
            return stem;
        }
    }
    return stem;
}

}  // namespace

Lemmatizer::Lemmatizer() {
    for (const auto& [form, lemma] : kExceptions) exceptions_.emplace(form, lemma);
}

void Lemmatizer::load_exceptions(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        std::size_t b = line.find_first_of(" \t", a);
        if (b == std::string::npos) continue;
        std::size_t c = line.find_first_not_of(" \t", b);
        if (c == std::string::npos) continue;
        std::size_t d = line.find_first_of(" \t\r", c);
        if (d == std::string::npos) d = line.size();
        exceptions_[line.substr(a, b - a)] = line.substr(c, d - c);
    }
}

std::string Lemmatizer::lemmatize(std::string_view token) const {
    std::string word(token);
    auto it = exceptions_.find(word);
    if (it != exceptions_.end()) return it->second;

    const std::size_t n = word.size();
    auto ends = [&](std::string_view suffix) {
        return n >= suffix.size() &&
               std::string_view(word).substr(n - suffix.size()) == suffix;
    };

    if (n >= 5 && ends("ies")) return word.substr(0, n - 3) + "y";
    if (n >= 5 && ends("ied")) return word.substr(0, n - 3) + "y";
    if (n >= 5 && (ends("sses") || ends("xes") || ends("ches") || ends("shes")))
        return word.substr(0, n - 2);
    if (n >= 6 && ends("ing")) {
        std::string stem = fix_stem(word.substr(0, n - 3));
        if (stem.size() >= 3) return stem;
    }
    if (n >= 5 && ends("ed") && !ends("eed")) {
        std::string stem = fix_stem(word.substr(0, n - 2));
        if (stem.size() >= 3) return stem;
    }
    if (n >= 4 && word.back() == 's' && !ends("ss") && !ends("us") && !ends("is"))
        return word.substr(0, n - 1);
    return word;
}

TokenStream preprocess(std::string_view text, const Lemmatizer& lemmatizer) {
    // Lowercase and map everything outside letters/digits/hyphen to space.
    std::string cleaned(text.size(), ' ');
    for (std::size_t i = 0; i < text.size(); ++i) {
        const unsigned char c = static_cast<unsigned char>(text[i]);
        if (std::isalpha(c))
            cleaned[i] = static_cast<char>(std::tolower(c));
        else if (std::isdigit(c) || c == '-')
            cleaned[i] = static_cast<char>(c);
    }
    // Hyphens survive only between alphanumerics.
    for (std::size_t i = 0; i < cleaned.size(); ++i) {
        if (cleaned[i] != '-') continue;
        const bool left = i > 0 && is_alnum_ascii(cleaned[i - 1]);
        const bool right = i + 1 < cleaned.size() && is_alnum_ascii(cleaned[i + 1]);
        if (!left || !right) cleaned[i] = ' ';
    }

    TokenStream out;
    std::size_t i = 0;
    while (i < cleaned.size()) {
        while (i < cleaned.size() && cleaned[i] == ' ') ++i;
        std::size_t j = i;
        while (j < cleaned.size() && cleaned[j] != ' ') ++j;
        if (j > i) out.tokens.push_back(lemmatizer.lemmatize(cleaned.substr(i, j - i)));
        i = j;
    }
    return out;
}

std::vector<TokenStream> preprocess_sentences(std::string_view text, const Lemmatizer& lemmatizer) {
    std::vector<TokenStream> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        const bool boundary = i == text.size() || text[i] == '.' || text[i] == '!' || text[i] == '?';
        if (!boundary) continue;
        TokenStream s = preprocess(text.substr(start, i - start), lemmatizer);
        if (!s.tokens.empty()) out.push_back(std::move(s));
        start = i + 1;
    }
    return out;
}

}  // namespace citescope
