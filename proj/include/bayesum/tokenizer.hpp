#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bayesum/stopwords.hpp"

namespace bayesum {

struct PreprocessOptions {
    bool stem = true;
    bool remove_stopwords = false;
    /// Tokens seen fewer times corpus-wide are dropped at ingestion.
    std::size_t min_count = 1;
    const StopwordList* stopwords = &StopwordList::english();
};

struct AnalyzedToken {
    std::string term;
    bool stopword = false;
};

/// Lowercases, splits on anything that is not an ASCII letter or digit
/// (bytes >= 0x80 are kept as word characters so UTF-8 words stay intact),
/// drops in-word apostrophes, flags stopwords on the surface form and then
/// stems purely alphabetic tokens. Stopwords are kept and flagged.
std::vector<AnalyzedToken> analyze(std::string_view text, const PreprocessOptions& opts);

/// analyze() with flagged stopwords removed when opts.remove_stopwords is set.
std::vector<std::string> tokenize(std::string_view text, const PreprocessOptions& opts);

}  // namespace bayesum
