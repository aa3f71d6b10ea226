#include "bayesum/tokenizer.hpp"

#include <algorithm>

#include "bayesum/porter_stemmer.hpp"

namespace bayesum {

namespace {

bool is_word_byte(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

char lower(unsigned char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
}

bool all_alpha(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

}  // namespace

std::vector<AnalyzedToken> analyze(std::string_view text, const PreprocessOptions& opts) {
    std::vector<AnalyzedToken> out;
    std::string current;
    auto flush = [&] {
        if (current.empty()) return;
        AnalyzedToken tok;
        tok.stopword = opts.stopwords != nullptr && opts.stopwords->contains(current);
        tok.term = (opts.stem && all_alpha(current)) ? porter_stem(current) : current;
        out.push_back(std::move(tok));
        current.clear();
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const auto c = static_cast<unsigned char>(text[i]);
        if (is_word_byte(c)) {
            current.push_back(lower(c));
        } else if (c == '\'' && !current.empty() && i + 1 < text.size() &&
                   is_word_byte(static_cast<unsigned char>(text[i + 1]))) {
            // in-word apostrophe: "don't" -> "dont"
        } else {
            flush();
        }
    }
    flush();
    return out;
}

std::vector<std::string> tokenize(std::string_view text, const PreprocessOptions& opts) {
    std::vector<std::string> out;
    for (auto& tok : analyze(text, opts)) {
        if (opts.remove_stopwords && tok.stopword) continue;
        out.push_back(std::move(tok.term));
    }
    return out;
}

}  // namespace bayesum
