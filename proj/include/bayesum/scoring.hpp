#pragma once

#include <span>
#include <string_view>

#include "bayesum/corpus.hpp"
#include "bayesum/model.hpp"
#include "bayesum/ranking.hpp"

namespace bayesum {

/// p^{q_j} smoothed against p^G, ready for the left side of KL.
UnigramModel query_model(const ModelParams& params, std::string_view query_id, double smoothing);
UnigramModel query_model(const ModelParams& params, std::string_view query_id);

enum class SentenceScore {
    /// -KL(query model || sentence model), the contract.
    kl,
    /// Posterior mean share of the query component (experimental).
    posterior_proportion,
};

struct ScoreConfig {
    double query_smoothing = 0.1;
    double sentence_smoothing = 0.1;
    /// Reject documents not judged relevant to the query.
    bool require_relevant = true;
    SentenceScore mode = SentenceScore::kl;
    FitConfig inference;  // posterior_proportion only
};

/// Scores every sentence of the given documents; sentence models are the
/// sentence MLE (all tokens) smoothed against the fitted p^G.
Ranking score_sentences(const Corpus& corpus, std::string_view query_id, std::span<const std::size_t> doc_indices,
                        const ModelParams& params, const ScoreConfig& cfg = {});

}  // namespace bayesum
