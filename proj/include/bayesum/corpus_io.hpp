#pragma once

#include <filesystem>
#include <string>

#include "bayesum/corpus.hpp"

namespace bayesum {

/// Documents: JSONL {"id", "sentences": [...]} or {"id", "text"}.
/// Queries: JSONL {"id", "title"?, "description"?, "summary"?, "concepts"?}.
/// Qrels: TSV query_id, doc_id, 0|1.
Corpus load_corpus(const std::filesystem::path& doc_path, const std::filesystem::path& query_path,
                   const std::filesystem::path& qrels_path, const PreprocessOptions& opts);

/// Parses a qrels file against an existing corpus (noisy-judgment overrides).
RelevanceMatrix read_qrels(const std::filesystem::path& path, const Corpus& corpus);

/// Canonical qrels: relevant pairs only, queries in corpus order, documents in
/// corpus order, "query_id\tdoc_id\t1\n".
std::string format_qrels(const RelevanceMatrix& relevance, const Corpus& corpus);

/// Self-contained JSON archive of an ingested corpus.
std::string corpus_to_json(const Corpus& corpus);
Corpus corpus_from_json(std::string_view json);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);
Corpus load_corpus_archive(const std::filesystem::path& path);

}  // namespace bayesum
