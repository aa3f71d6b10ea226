#pragma once

#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bayesum/corpus.hpp"
#include "bayesum/ranking.hpp"

namespace bayesum {

/// (doc id, sentence position)
using SentenceKey = std::pair<std::string, std::size_t>;
using GoldSentences = std::set<SentenceKey>;

/// Mean of precision at each gold item's rank; unranked gold items count 0.
/// nullopt for empty gold.
std::optional<double> average_precision(const Ranking& ranking, const GoldSentences& gold);
/// 1 / rank of the first gold item, 0 when none is ranked.
std::optional<double> reciprocal_rank(const Ranking& ranking, const GoldSentences& gold);
/// 2 / rank of the second gold item; 1 / rank of the first when only one
/// gold item exists; 0 when not reached.
std::optional<double> p_at_2(const Ranking& ranking, const GoldSentences& gold);

/// Cohen's kappa over select / not-select decisions on items 0..universe-1.
/// Chance agreement of 1 implies identical selections and gives 1.
double kappa(const std::set<std::size_t>& a, const std::set<std::size_t>& b, std::size_t universe);
/// Mean kappa over all rater pairs; needs at least two raters.
double mean_pairwise_kappa(const std::vector<std::set<std::size_t>>& raters, std::size_t universe);

/// Precision at rank |relevant|; nullopt for an empty relevant set.
std::optional<double> r_precision(std::span<const std::string> ranked_docs, const std::set<std::string>& relevant);

/// Synthetic relevant set for one query: every candidate (IR docs within
/// `depth`, 0 meaning all, plus unretrieved true docs when beta > 0) scores
/// beta * [true] + (1 - beta) * minmax(IR score), unranked docs at 0; the top
/// |truth| win. Ties favour IR-ranked docs in IR order, then doc id.
std::vector<std::string> interpolate_judgments(const DocRanking& ir_run, const std::set<std::string>& truth,
                                               double beta, std::size_t depth = 0);

/// 0, 0.2, ..., 1.0
std::vector<double> default_betas();

struct Candidate {
    std::string doc_id;
    std::size_t sentence = 0;
    double score = 0.0;
    std::vector<TokenId> tokens;
};

/// Cosine of raw term-frequency vectors; 0 if either is empty.
double tf_cosine(std::span<const TokenId> a, std::span<const TokenId> b);

/// Repeatedly takes argmax of score - rho * max similarity to the picks so
/// far; ties go to (doc id, sentence) ascending. Returns candidate indices.
std::vector<std::size_t> greedy_select(std::span<const Candidate> pool,
                                       const std::function<double(const Candidate&, const Candidate&)>& similarity,
                                       double rho, std::size_t k);

struct SignTest {
    std::size_t wins = 0;
    std::size_t losses = 0;
    std::size_t ties = 0;
    double p_value = 1.0;  // two-sided exact binomial
};

SignTest paired_sign_test(std::span<const double> a, std::span<const double> b);

enum class EvalUnit {
    /// Each judged (query, document) pair on its own, ranking restricted to
    /// that document.
    pair,
    /// Each query over all its judged sentences.
    query,
};

struct PairScore {
    std::string query_id;
    std::string doc_id;  // empty for the query unit
    double ap = 0.0;
    double rr = 0.0;
    double p2 = 0.0;
};

struct RunScores {
    double map = 0.0;
    double mrr = 0.0;
    double p2 = 0.0;
    std::vector<PairScore> items;
};

/// Scores a run against gold; judged items with empty gold are skipped with a
/// warning. Queries absent from the run score 0.
RunScores score_run(const std::vector<Ranking>& run, const GoldSet& gold, EvalUnit unit = EvalUnit::pair);

/// TSV "query_id\tdoc_id\tsentence_index"; ids are checked against the
/// corpus when one is given.
GoldSet parse_gold(std::string_view text, const Corpus* corpus = nullptr, std::string_view origin = "gold");
std::string format_gold(const GoldSet& gold);

}  // namespace bayesum
