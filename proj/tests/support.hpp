#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "bayesum/corpus.hpp"
#include "bayesum/io.hpp"

namespace testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        m_path = std::filesystem::temp_directory_path() / ("bayesum_" + tag + "_" + std::to_string(rd()));
        std::filesystem::remove_all(m_path);
        std::filesystem::create_directories(m_path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(m_path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return m_path; }
    std::filesystem::path operator/(const std::string& name) const { return m_path / name; }
    void write(const std::string& name, const std::string& text) const {
        bayesum::write_file_atomic(m_path / name, text);
    }

  private:
    std::filesystem::path m_path;
};

/// Pre-segmented toy corpus: documents of whitespace-joined words, one query
/// per title, every (doc, query) pair listed in `pairs` relevant.
inline bayesum::Corpus toy_corpus(const std::vector<std::pair<std::string, std::vector<std::string>>>& docs,
                                  const std::vector<std::pair<std::string, std::string>>& queries,
                                  const std::vector<std::pair<std::string, std::string>>& pairs, bool stem = false) {
    std::vector<bayesum::RawDocument> raw_docs;
    for (const auto& [id, sentences] : docs) raw_docs.push_back({id, sentences, std::nullopt});
    std::vector<bayesum::RawQuery> raw_queries;
    for (const auto& [id, title] : queries) {
        bayesum::RawQuery q;
        q.id = id;
        q.text[0] = title;
        raw_queries.push_back(q);
    }
    std::vector<bayesum::RawJudgment> judgments;
    for (const auto& [q, d] : pairs) judgments.push_back({q, d, true, "test"});
    bayesum::PreprocessOptions opts;
    opts.stem = stem;
    return bayesum::build_corpus(raw_docs, raw_queries, judgments, opts);
}

}  // namespace testing
