#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bayesum/corpus.hpp"
#include "bayesum/langmodel.hpp"
#include "bayesum/ranking.hpp"

namespace bayesum {

/// A sentence of some document, as handed to the baseline rankers.
struct SentenceRef {
    const std::string* doc_id;
    const Sentence* sentence;
};

/// Every sentence of the listed documents, in listing order.
std::vector<SentenceRef> gather_sentences(const Corpus& corpus, std::span<const std::size_t> doc_indices);

/// Scores are the negated 1-based ranks of a seeded uniform permutation.
Ranking rank_random(std::string_view query_id, std::span<const SentenceRef> sentences, std::uint64_t seed);

/// Score = -position.
Ranking rank_position(std::string_view query_id, std::span<const SentenceRef> sentences);

/// Intersection over union of content token types.
Ranking rank_jaccard(std::string_view query_id, std::span<const TokenId> query, std::span<const SentenceRef> sentences);

/// ln(K / df) over documents' content tokens; words never seen get 0.
class IdfTable {
  public:
    explicit IdfTable(const Corpus& corpus);
    IdfTable(std::vector<double> idf) : m_idf(std::move(idf)) {}
    double operator[](TokenId w) const { return w < m_idf.size() ? m_idf[w] : 0.0; }

  private:
    std::vector<double> m_idf;
};

Ranking rank_cosine(std::string_view query_id, std::span<const TokenId> query, std::span<const SentenceRef> sentences,
                    const IdfTable& idf);

struct KlSmoothing {
    double query = 0.1;
    double sentence = 0.1;
};

/// Add-epsilon MLE over every document's content tokens.
UnigramModel baseline_background(const Corpus& corpus);

/// Query (or empty-query) model smoothed against the background; an empty
/// query is the background itself.
UnigramModel baseline_query_model(std::span<const TokenId> query, const UnigramModel& background, double lambda);

/// -KL(query model || sentence model) with a prepared query model; sentence
/// models are content MLEs smoothed against the background.
Ranking rank_kl_model(std::string_view query_id, const UnigramModel& query_model,
                      std::span<const SentenceRef> sentences, const UnigramModel& background, double sentence_lambda);

Ranking rank_kl(std::string_view query_id, std::span<const TokenId> query, std::span<const SentenceRef> sentences,
                const UnigramModel& background, const KlSmoothing& smoothing = {});

struct FeedbackConfig {
    std::size_t n = 25;
    double lambda = 0.4;

    /// n > 0 and lambda strictly inside (0, 1).
    void validate() const;
};

/// n in {5, 10, 25, 50, 100} crossed with lambda in {0.2, 0.4, 0.6, 0.8}.
std::vector<FeedbackConfig> feedback_grid();

/// Expanded query model: (1 - lambda) * query MLE + lambda * MLE of the top n
/// pool sentences under plain KL, smoothed against the background. An empty
/// query expands to the feedback model alone.
UnigramModel expanded_query_model(std::span<const TokenId> query, std::span<const SentenceRef> pool,
                                  const FeedbackConfig& cfg, const UnigramModel& background,
                                  const KlSmoothing& smoothing = {});

Ranking rank_kl_rel(std::string_view query_id, std::span<const TokenId> query, std::span<const SentenceRef> sentences,
                    std::span<const SentenceRef> pool, const FeedbackConfig& cfg, const UnigramModel& background,
                    const KlSmoothing& smoothing = {});

}  // namespace bayesum
