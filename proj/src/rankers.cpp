#include "bayesum/rankers.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace bayesum {

namespace {

Ranking make_ranking(std::string_view query_id, std::span<const SentenceRef> sentences,
                     const std::vector<double>& scores) {
    Ranking r{std::string(query_id), {}};
    r.entries.reserve(sentences.size());
    for (std::size_t i = 0; i < sentences.size(); ++i)
        r.entries.push_back({*sentences[i].doc_id, sentences[i].sentence->position, scores[i]});
    sort_ranking(r);
    return r;
}

std::unordered_map<TokenId, double> tf(std::span<const TokenId> tokens) {
    std::unordered_map<TokenId, double> out;
    for (auto w : tokens) out[w] += 1.0;
    return out;
}

UnigramModel sentence_model(const Sentence& s, const UnigramModel& background, double lambda) {
    if (s.content.empty()) return background;
    return smooth(mle(CountVector::of(s.content), background.size()), background, lambda);
}

}  // namespace

std::vector<SentenceRef> gather_sentences(const Corpus& corpus, std::span<const std::size_t> doc_indices) {
    std::vector<SentenceRef> out;
    for (auto k : doc_indices) {
        const auto& doc = corpus.documents().at(k);
        for (const auto& s : doc.sentences) out.push_back({&doc.id, &s});
    }
    return out;
}

Ranking rank_random(std::string_view query_id, std::span<const SentenceRef> sentences, std::uint64_t seed) {
    std::vector<std::size_t> order(sentences.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    // Fisher-Yates with an explicit draw so the permutation does not depend on
    // the standard library's shuffle
    for (std::size_t i = order.size(); i > 1; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        std::swap(order[i - 1], order[pick(rng)]);
    }
    std::vector<double> scores(sentences.size());
    for (std::size_t rank = 0; rank < order.size(); ++rank) scores[order[rank]] = -static_cast<double>(rank + 1);
    return make_ranking(query_id, sentences, scores);
}

Ranking rank_position(std::string_view query_id, std::span<const SentenceRef> sentences) {
    std::vector<double> scores;
    for (const auto& s : sentences) scores.push_back(-static_cast<double>(s.sentence->position));
    return make_ranking(query_id, sentences, scores);
}

Ranking rank_jaccard(std::string_view query_id, std::span<const TokenId> query, std::span<const SentenceRef> sentences) {
    const std::unordered_set<TokenId> q(query.begin(), query.end());
    std::vector<double> scores;
    for (const auto& s : sentences) {
        const std::unordered_set<TokenId> words(s.sentence->content.begin(), s.sentence->content.end());
        std::size_t common = 0;
        for (auto w : words) common += q.count(w);
        const std::size_t uni = q.size() + words.size() - common;
        scores.push_back(uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni));
    }
    return make_ranking(query_id, sentences, scores);
}

IdfTable::IdfTable(const Corpus& corpus) {
    const auto K = static_cast<double>(corpus.documents().size());
    std::vector<double> df(corpus.vocab().size(), 0.0);
    for (const auto& doc : corpus.documents()) {
        std::unordered_set<TokenId> seen;
        for (const auto& s : doc.sentences) seen.insert(s.content.begin(), s.content.end());
        for (auto w : seen) df[w] += 1.0;
    }
    m_idf.resize(df.size());
    for (std::size_t w = 0; w < df.size(); ++w) m_idf[w] = df[w] == 0.0 ? 0.0 : std::log(K / df[w]);
}

Ranking rank_cosine(std::string_view query_id, std::span<const TokenId> query, std::span<const SentenceRef> sentences,
                    const IdfTable& idf) {
    auto weigh = [&](std::span<const TokenId> tokens) {
        auto v = tf(tokens);
        for (auto& [w, x] : v) x *= idf[w];
        return v;
    };
    const auto q = weigh(query);
    double qq = 0.0;
    for (const auto& [w, x] : q) qq += x * x;
    std::vector<double> scores;
    for (const auto& s : sentences) {
        const auto v = weigh(s.sentence->content);
        double dot = 0.0;
        double ss = 0.0;
        for (const auto& [w, x] : v) {
            ss += x * x;
            if (auto it = q.find(w); it != q.end()) dot += x * it->second;
        }
        scores.push_back(qq == 0.0 || ss == 0.0 ? 0.0 : dot / std::sqrt(qq * ss));
    }
    return make_ranking(query_id, sentences, scores);
}

UnigramModel baseline_background(const Corpus& corpus) {
    std::vector<double> counts(corpus.vocab().size(), 0.0);
    for (const auto& doc : corpus.documents()) {
        for (const auto& s : doc.sentences) {
            for (auto w : s.content) counts[w] += 1.0;
        }
    }
    return background_model(counts);
}

UnigramModel baseline_query_model(std::span<const TokenId> query, const UnigramModel& background, double lambda) {
    if (query.empty()) return background;
    return smooth(mle(CountVector::of(query), background.size()), background, lambda);
}

Ranking rank_kl_model(std::string_view query_id, const UnigramModel& query_model,
                      std::span<const SentenceRef> sentences, const UnigramModel& background, double sentence_lambda) {
    std::vector<double> scores;
    for (const auto& s : sentences)
        scores.push_back(-kl_divergence(query_model, sentence_model(*s.sentence, background, sentence_lambda)));
    return make_ranking(query_id, sentences, scores);
}

Ranking rank_kl(std::string_view query_id, std::span<const TokenId> query, std::span<const SentenceRef> sentences,
                const UnigramModel& background, const KlSmoothing& smoothing) {
    return rank_kl_model(query_id, baseline_query_model(query, background, smoothing.query), sentences, background,
                         smoothing.sentence);
}

void FeedbackConfig::validate() const {
    if (n == 0) throw std::invalid_argument("feedback n must be positive");
    if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("feedback lambda must lie in (0,1)");
}

std::vector<FeedbackConfig> feedback_grid() {
    std::vector<FeedbackConfig> grid;
    for (std::size_t n : {5, 10, 25, 50, 100}) {
        for (double lambda : {0.2, 0.4, 0.6, 0.8}) grid.push_back({n, lambda});
    }
    return grid;
}

UnigramModel expanded_query_model(std::span<const TokenId> query, std::span<const SentenceRef> pool,
                                  const FeedbackConfig& cfg, const UnigramModel& background,
                                  const KlSmoothing& smoothing) {
    cfg.validate();
    if (pool.empty()) throw std::invalid_argument("empty feedback pool");
    if (pool.size() < cfg.n)
        spdlog::warn("feedback pool has {} sentences, fewer than n={}; using all", pool.size(), cfg.n);

    const auto first = rank_kl("", query, pool, background, smoothing);
    std::unordered_map<std::string, std::unordered_map<std::size_t, const Sentence*>> index;
    for (const auto& s : pool) index[*s.doc_id][s.sentence->position] = s.sentence;
    CountVector fb;
    const std::size_t take = std::min(cfg.n, first.entries.size());
    for (std::size_t i = 0; i < take; ++i) {
        const auto& e = first.entries[i];
        for (auto w : index.at(e.doc_id).at(e.sentence)->content) fb.add(w);
    }

    const std::size_t V = background.size();
    if (fb.total() == 0.0) return baseline_query_model(query, background, smoothing.query);
    const auto feedback = mle(fb, V);
    if (query.empty()) return smooth(feedback, background, smoothing.query);
    const auto expanded = interpolate(mle(CountVector::of(query), V), feedback, cfg.lambda);
    return smooth(expanded, background, smoothing.query);
}

Ranking rank_kl_rel(std::string_view query_id, std::span<const TokenId> query, std::span<const SentenceRef> sentences,
                    std::span<const SentenceRef> pool, const FeedbackConfig& cfg, const UnigramModel& background,
                    const KlSmoothing& smoothing) {
    const auto q = expanded_query_model(query, pool, cfg, background, smoothing);
    return rank_kl_model(query_id, q, sentences, background, smoothing.sentence);
}

}  // namespace bayesum
