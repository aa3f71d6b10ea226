#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace bayesum {

struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;  // exclusive

    friend bool operator==(const Span&, const Span&) = default;
};

struct SegmentedSentence {
    Span span;
    std::string text;
};

/// Splits on '.', '!' or '?' (plus any closing quotes/brackets) followed by
/// whitespace and an uppercase letter or digit, unless the token before the
/// period is a known abbreviation or a single-letter initial. Trailing text
/// without terminal punctuation forms the last sentence. Spans are byte
/// offsets into `text`, trimmed of surrounding whitespace.
std::vector<SegmentedSentence> segment_sentences(std::string_view text);

}  // namespace bayesum
