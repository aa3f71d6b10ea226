#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bayesum/corpus.hpp"
#include "bayesum/model.hpp"
#include "bayesum/ranking.hpp"

namespace bayesum {

struct SynthShape {
    std::size_t num_queries = 2;         // J
    std::size_t num_documents = 4;       // K
    std::size_t sentences_per_doc = 20;  // S
    std::size_t words_per_sentence = 8;  // N
    std::size_t query_length = 4;        // title words per query; 0 gives empty queries
};

/// Knobs for drawing a ground-truth parameter set.
struct TruthOptions {
    std::size_t vocab_size = 30;
    double alpha_general = 2.0;
    double alpha_document = 1.0;
    double alpha_query = 1.0;
    /// Symmetric Dirichlet concentration for document and query models;
    /// small values give peaked, topical models.
    double topic_concentration = 0.1;
    /// Same for p^G; large values give a broad filler distribution.
    double general_concentration = 5.0;
    double smoothing = 0.1;
};

/// Document k is relevant to query k mod J.
RelevanceMatrix synthetic_relevance(std::size_t num_documents, std::size_t num_queries);

/// Ids "d000".., "q00".. in layout order; token strings "w0".."w{V-1}".
ModelParams make_true_params(const SynthShape& shape, const TruthOptions& opts, std::uint64_t seed);

struct SampledCorpus {
    Corpus corpus;
    /// Drawn mixture degrees per document and sentence, aligned with the
    /// document's mask components.
    std::vector<std::vector<std::vector<double>>> pi;

    /// Sentences whose true share of query j's component is at least
    /// `threshold`, for every relevant (query, document) pair.
    GoldSet planted_gold(double threshold = 0.5) const;
};

/// Runs the generative story: query words from p^{q_j}; per sentence
/// pi ~ Dir(alpha restricted to the mask), then z ~ Mult(pi) and w from
/// component z's emission distribution. Vocabulary ids equal model ids.
SampledCorpus sample_corpus(const ModelParams& truth, const SynthShape& shape, const RelevanceMatrix& relevance,
                            std::uint64_t seed);

/// Word marginal implied by the parameters: each sentence's E[pi] mixture of
/// emissions, averaged over sentences (all documents weighted by S).
UnigramModel analytic_marginal(const ModelParams& truth, const RelevanceMatrix& relevance);

}  // namespace bayesum
