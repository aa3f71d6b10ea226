#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace bayesum {

class StopwordList {
  public:
    StopwordList(std::string name, std::vector<std::string> words);

    /// The built-in English list (data/stopwords_en_v1.txt).
    static const StopwordList& english();
    /// One word per line; blank lines and lines starting with '#' ignored.
    static StopwordList from_file(const std::string& path);

    bool contains(std::string_view word) const;
    const std::string& name() const { return m_name; }
    std::size_t size() const { return m_sorted.size(); }
    /// FNV-1a over the sorted, newline-joined word list.
    std::uint64_t hash() const { return m_hash; }

  private:
    std::string m_name;
    std::vector<std::string> m_sorted;
    std::unordered_set<std::string_view> m_lookup;
    std::uint64_t m_hash;
};

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace bayesum
