#include "bayesum/stopwords.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "bayesum/error.hpp"

namespace bayesum {

namespace detail {
extern const std::string_view kEnglishStopwordsV1;
}

namespace {

std::vector<std::string> parse_list(std::istream& in) {
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') continue;
        words.push_back(line);
    }
    return words;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

StopwordList::StopwordList(std::string name, std::vector<std::string> words)
    : m_name(std::move(name)), m_sorted(std::move(words)) {
    std::sort(m_sorted.begin(), m_sorted.end());
    m_sorted.erase(std::unique(m_sorted.begin(), m_sorted.end()), m_sorted.end());
    std::string joined;
    for (const auto& w : m_sorted) {
        joined += w;
        joined += '\n';
    }
    m_hash = fnv1a64(joined);
    m_lookup.reserve(m_sorted.size());
    for (const auto& w : m_sorted) {
        m_lookup.insert(w);
    }
}

const StopwordList& StopwordList::english() {
    static const StopwordList list = [] {
        std::istringstream in{std::string(detail::kEnglishStopwordsV1)};
        return StopwordList("en-v1", parse_list(in));
    }();
    return list;
}

StopwordList StopwordList::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open stopword file " + path);
    }
    return StopwordList(path, parse_list(in));
}

bool StopwordList::contains(std::string_view word) const {
    return m_lookup.count(word) != 0;
}

}  // namespace bayesum
