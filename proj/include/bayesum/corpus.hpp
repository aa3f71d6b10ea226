#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bayesum/segmenter.hpp"
#include "bayesum/tokenizer.hpp"
#include "bayesum/types.hpp"

namespace bayesum {

/// Dense bijection between token strings and ids 0..size()-1.
class Vocab {
  public:
    /// Returns the existing id or appends a new one.
    TokenId add(std::string_view token);
    std::optional<TokenId> find(std::string_view token) const;
    /// Throws DataError for unknown tokens.
    TokenId id(std::string_view token) const;
    const std::string& token(TokenId id) const { return m_tokens.at(id); }
    std::size_t size() const { return m_tokens.size(); }
    const std::vector<std::string>& tokens() const { return m_tokens; }

  private:
    std::vector<std::string> m_tokens;
    std::unordered_map<std::string, TokenId> m_ids;
};

struct Sentence {
    /// Every token, stopwords included (the view the Bayesian model uses).
    std::vector<TokenId> tokens;
    /// Stopwords removed (the view the baselines use).
    std::vector<TokenId> content;
    Span span;
    /// Index of the sentence in the source document; gaps appear where empty
    /// sentences were dropped.
    std::size_t position = 0;
};

struct Document {
    std::string id;
    std::vector<Sentence> sentences;
};

enum class QueryField : std::uint8_t { title = 0, description = 1, summary = 2, concepts = 3 };

inline constexpr std::array<QueryField, 4> kAllQueryFields = {
    QueryField::title, QueryField::description, QueryField::summary, QueryField::concepts};

std::string_view field_name(QueryField f);

/// A subset of the four query fields; the empty set is the relevance-only
/// ("no query") condition.
class FieldSet {
  public:
    constexpr FieldSet() = default;
    static constexpr FieldSet all() { return FieldSet(0xF); }
    static constexpr FieldSet none() { return FieldSet(0); }
    /// Accepts "all", "none" or a comma/plus separated list of
    /// title, desc|description, summary, concepts.
    static FieldSet parse(std::string_view spec);

    constexpr bool contains(QueryField f) const { return (m_bits >> static_cast<int>(f)) & 1U; }
    constexpr bool empty() const { return m_bits == 0; }
    FieldSet with(QueryField f) const { return FieldSet(m_bits | (1U << static_cast<int>(f))); }
    /// "none" or the selected field names joined with '+'.
    std::string label() const;

    friend constexpr bool operator==(FieldSet, FieldSet) = default;

  private:
    constexpr explicit FieldSet(unsigned bits) : m_bits(bits) {}
    unsigned m_bits = 0;
};

struct Query {
    std::string id;
    std::array<std::string, 4> text;
    std::array<std::vector<TokenId>, 4> tokens;
    std::array<std::vector<TokenId>, 4> content;

    /// Concatenation of the selected fields in title, description, summary,
    /// concepts order.
    std::vector<TokenId> select(FieldSet fields, bool content_only) const;
};

/// Sparse D x Q binary matrix, stored per query and per document.
class RelevanceMatrix {
  public:
    RelevanceMatrix() = default;
    /// `pairs` holds (doc index, query index); duplicates are merged.
    RelevanceMatrix(std::size_t num_docs, std::size_t num_queries,
                    std::vector<std::pair<std::size_t, std::size_t>> pairs);

    std::size_t num_docs() const { return m_by_doc.size(); }
    std::size_t num_queries() const { return m_by_query.size(); }
    /// Sorted ascending, duplicate free.
    std::span<const std::size_t> relevant_docs(std::size_t query) const { return m_by_query.at(query); }
    std::span<const std::size_t> relevant_queries(std::size_t doc) const { return m_by_doc.at(doc); }
    bool is_relevant(std::size_t doc, std::size_t query) const;
    std::size_t num_pairs() const;

  private:
    std::vector<std::vector<std::size_t>> m_by_query;
    std::vector<std::vector<std::size_t>> m_by_doc;
};

struct PreprocessDescriptor {
    bool stem = true;
    bool remove_stopwords = false;
    std::size_t min_count = 1;
    std::string stopword_list;
    std::uint64_t stopword_hash = 0;

    static PreprocessDescriptor from(const PreprocessOptions& opts);
    friend bool operator==(const PreprocessDescriptor&, const PreprocessDescriptor&) = default;
};

struct CorpusStats {
    std::size_t queries = 0;
    std::size_t documents = 0;
    std::size_t sentences = 0;
    std::size_t words = 0;
    std::size_t vocabulary = 0;
    std::size_t relevant_pairs = 0;
};

/// Immutable, fully indexed corpus. Construction validates every id.
class Corpus {
  public:
    Corpus(Vocab vocab, std::vector<Document> documents, std::vector<Query> queries,
           RelevanceMatrix relevance, PreprocessDescriptor descriptor,
           std::vector<std::string> warnings = {});

    const Vocab& vocab() const { return m_vocab; }
    const std::vector<Document>& documents() const { return m_documents; }
    const std::vector<Query>& queries() const { return m_queries; }
    const RelevanceMatrix& relevance() const { return m_relevance; }
    const PreprocessDescriptor& descriptor() const { return m_descriptor; }
    const std::vector<std::string>& warnings() const { return m_warnings; }
    const CorpusStats& stats() const { return m_stats; }

    std::optional<std::size_t> find_document(std::string_view id) const;
    std::optional<std::size_t> find_query(std::string_view id) const;
    std::size_t document_index(std::string_view id) const;
    std::size_t query_index(std::string_view id) const;

    /// Same text, different judgments (noisy-relevance runs).
    Corpus with_relevance(RelevanceMatrix relevance) const;

  private:
    Vocab m_vocab;
    std::vector<Document> m_documents;
    std::vector<Query> m_queries;
    RelevanceMatrix m_relevance;
    PreprocessDescriptor m_descriptor;
    std::vector<std::string> m_warnings;
    std::unordered_map<std::string, std::size_t> m_doc_index;
    std::unordered_map<std::string, std::size_t> m_query_index;
    CorpusStats m_stats;
};

/// Raw text of one document before analysis: either pre-segmented sentences
/// or a text blob to be segmented.
struct RawDocument {
    std::string id;
    std::vector<std::string> sentences;
    std::optional<std::string> text;
};

struct RawQuery {
    std::string id;
    std::array<std::string, 4> text;
};

struct RawJudgment {
    std::string query_id;
    std::string doc_id;
    bool relevant = false;
    std::string origin;  // "file:line", for error messages
};

/// Analyzes raw text and assigns token ids in a single deterministic pass
/// (documents in input order, then queries).
Corpus build_corpus(const std::vector<RawDocument>& documents, const std::vector<RawQuery>& queries,
                    const std::vector<RawJudgment>& judgments, const PreprocessOptions& opts);

}  // namespace bayesum
