#include "bayesum/segmenter.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace bayesum {

namespace {

constexpr std::array<std::string_view, 32> kAbbreviations = {
    "mr",  "mrs",  "ms",   "dr",  "prof", "sr",  "jr",   "st",   "vs",   "etc", "inc",
    "ltd", "co",   "corp", "gen", "gov",  "sen", "rep",  "lt",   "col",  "capt", "sgt",
    "no",  "jan",  "feb",  "aug", "sept", "oct", "nov",  "dec",  "e.g",  "i.e"};

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

bool is_closer(char c) {
    return c == '"' || c == '\'' || c == ')' || c == ']';
}

// Word immediately preceding position `dot` (exclusive), lowercased.
std::string word_before(std::string_view text, std::size_t dot) {
    std::size_t b = dot;
    while (b > 0 && !is_space(text[b - 1]) && text[b - 1] != '(' && text[b - 1] != '"') {
        --b;
    }
    std::string w(text.substr(b, dot - b));
    for (auto& c : w) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return w;
}

bool guarded(std::string_view text, std::size_t dot) {
    if (text[dot] != '.') return false;
    const std::string w = word_before(text, dot);
    if (w.size() == 1 && std::isalpha(static_cast<unsigned char>(w[0]))) return true;  // initial
    return std::find(kAbbreviations.begin(), kAbbreviations.end(), w) != kAbbreviations.end();
}

void push_trimmed(std::string_view text, std::size_t b, std::size_t e,
                  std::vector<SegmentedSentence>& out) {
    while (b < e && is_space(text[b])) ++b;
    while (e > b && is_space(text[e - 1])) --e;
    if (b == e) return;
    out.push_back({Span{b, e}, std::string(text.substr(b, e - b))});
}

}  // namespace

std::vector<SegmentedSentence> segment_sentences(std::string_view text) {
    std::vector<SegmentedSentence> out;
    std::size_t start = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (c != '.' && c != '!' && c != '?') {
            ++i;
            continue;
        }
        std::size_t end = i + 1;
        while (end < text.size() && (text[end] == '.' || text[end] == '!' || text[end] == '?' ||
                                     is_closer(text[end]))) {
            ++end;
        }
        std::size_t next = end;
        while (next < text.size() && is_space(text[next])) ++next;
        const bool at_end = next >= text.size();
        const bool boundary =
            at_end || (next > end && (std::isupper(static_cast<unsigned char>(text[next])) ||
                                      std::isdigit(static_cast<unsigned char>(text[next])) ||
                                      text[next] == '"'));
        if (boundary && !guarded(text, i)) {
            push_trimmed(text, start, end, out);
            start = end;
        }
        i = end;
    }
    push_trimmed(text, start, text.size(), out);
    return out;
}

}  // namespace bayesum
