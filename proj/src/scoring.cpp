#include "bayesum/scoring.hpp"

#include <stdexcept>

#include "bayesum/em.hpp"
#include "bayesum/error.hpp"
#include "bayesum/inference.hpp"

namespace bayesum {

UnigramModel query_model(const ModelParams& params, std::string_view query_id, double smoothing) {
    const auto j = params.query_index(query_id);
    return smooth(params.queries[j], params.general, smoothing);
}

UnigramModel query_model(const ModelParams& params, std::string_view query_id) {
    return query_model(params, query_id, params.smoothing);
}

Ranking score_sentences(const Corpus& corpus, std::string_view query_id, std::span<const std::size_t> doc_indices,
                        const ModelParams& params, const ScoreConfig& cfg) {
    if (doc_indices.empty()) throw std::invalid_argument("empty document set");
    check_compatible(corpus, params);
    const auto j = corpus.query_index(query_id);
    for (auto k : doc_indices) {
        if (k >= corpus.documents().size()) throw std::invalid_argument("document index out of range");
        if (cfg.require_relevant && !corpus.relevance().is_relevant(k, j))
            throw DataError("document '" + corpus.documents()[k].id + "' is not relevant to query '" +
                            std::string(query_id) + "'");
    }

    Ranking ranking{std::string(query_id), {}};
    const auto layout = params.layout();
    const auto q = query_model(params, query_id, cfg.query_smoothing);
    const std::size_t V = params.vocab_size();
    for (auto k : doc_indices) {
        const auto& doc = corpus.documents()[k];
        const auto mask = document_mask(corpus, k);
        for (const auto& s : doc.sentences) {
            double score = 0.0;
            if (cfg.mode == SentenceScore::kl) {
                const auto sentence = smooth(mle(CountVector::of(s.tokens), V), params.general, cfg.sentence_smoothing);
                score = -kl_divergence(q, sentence);
            } else if (mask.allows(layout.query(j))) {
                const auto post = infer_sentence(s.tokens, mask, params, cfg.inference);
                score = post.mean_pi()[mask.slot(layout.query(j))];
            }
            ranking.entries.push_back({doc.id, s.position, score});
        }
    }
    sort_ranking(ranking);
    return ranking;
}

}  // namespace bayesum
