#include "bayesum/eval.hpp"

#include <boost/math/distributions/binomial.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>
#include <stdexcept>
#include <unordered_map>

#include "bayesum/error.hpp"
#include "bayesum/io.hpp"

namespace bayesum {

namespace {

SentenceKey key_of(const RankedSentence& e) { return {e.doc_id, e.sentence}; }

}  // namespace

std::optional<double> average_precision(const Ranking& ranking, const GoldSentences& gold) {
    if (gold.empty()) return std::nullopt;
    double sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ranking.entries.size() && hits < gold.size(); ++i) {
        if (!gold.count(key_of(ranking.entries[i]))) continue;
        ++hits;
        sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
    return sum / static_cast<double>(gold.size());
}

std::optional<double> reciprocal_rank(const Ranking& ranking, const GoldSentences& gold) {
    if (gold.empty()) return std::nullopt;
    for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
        if (gold.count(key_of(ranking.entries[i]))) return 1.0 / static_cast<double>(i + 1);
    }
    return 0.0;
}

std::optional<double> p_at_2(const Ranking& ranking, const GoldSentences& gold) {
    if (gold.empty()) return std::nullopt;
    const std::size_t need = gold.size() >= 2 ? 2 : 1;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
        if (gold.count(key_of(ranking.entries[i])) && ++hits == need)
            return static_cast<double>(need) / static_cast<double>(i + 1);
    }
    return 0.0;
}

double kappa(const std::set<std::size_t>& a, const std::set<std::size_t>& b, std::size_t universe) {
    if (universe == 0) throw std::invalid_argument("kappa needs a non-empty universe");
    if ((!a.empty() && *a.rbegin() >= universe) || (!b.empty() && *b.rbegin() >= universe))
        throw std::invalid_argument("selection outside the universe");
    std::size_t both = 0;
    for (auto x : a) both += b.count(x);
    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    const std::size_t agree = both + (universe - na - nb + both);
    const auto u = static_cast<double>(universe);
    const double po = static_cast<double>(agree) / u;
    const double pe = (static_cast<double>(na) / u) * (static_cast<double>(nb) / u) +
                      (static_cast<double>(universe - na) / u) * (static_cast<double>(universe - nb) / u);
    if (pe == 1.0) return 1.0;
    return (po - pe) / (1.0 - pe);
}

double mean_pairwise_kappa(const std::vector<std::set<std::size_t>>& raters, std::size_t universe) {
    if (raters.size() < 2) throw std::invalid_argument("kappa needs at least two raters");
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < raters.size(); ++i) {
        for (std::size_t j = i + 1; j < raters.size(); ++j) {
            sum += kappa(raters[i], raters[j], universe);
            ++pairs;
        }
    }
    return sum / static_cast<double>(pairs);
}

std::optional<double> r_precision(std::span<const std::string> ranked_docs, const std::set<std::string>& relevant) {
    if (relevant.empty()) return std::nullopt;
    const std::size_t R = relevant.size();
    std::size_t hits = 0;
    for (std::size_t i = 0; i < std::min(R, ranked_docs.size()); ++i) hits += relevant.count(ranked_docs[i]);
    return static_cast<double>(hits) / static_cast<double>(R);
}

std::vector<std::string> interpolate_judgments(const DocRanking& ir_run, const std::set<std::string>& truth,
                                               double beta, std::size_t depth) {
    if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in [0,1]");
    if (truth.empty()) {
        spdlog::warn("query '{}': no true relevant documents, interpolated set is empty", ir_run.query_id);
        return {};
    }
    struct Scored {
        std::string doc;
        double score;
        std::size_t ir_rank;  // max for unranked
    };
    const std::size_t n = depth == 0 ? ir_run.entries.size() : std::min(depth, ir_run.entries.size());
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        lo = std::min(lo, ir_run.entries[i].score);
        hi = std::max(hi, ir_run.entries[i].score);
    }
    std::vector<Scored> pool;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& e = ir_run.entries[i];
        if (!seen.insert(e.doc_id).second) continue;
        const double norm = hi > lo ? (e.score - lo) / (hi - lo) : 1.0;
        pool.push_back({e.doc_id, beta * (truth.count(e.doc_id) ? 1.0 : 0.0) + (1.0 - beta) * norm, i});
    }
    if (beta > 0.0) {
        for (const auto& d : truth) {
            if (seen.insert(d).second) pool.push_back({d, beta, std::numeric_limits<std::size_t>::max()});
        }
    }
    std::sort(pool.begin(), pool.end(), [](const Scored& a, const Scored& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.ir_rank != b.ir_rank) return a.ir_rank < b.ir_rank;
        return a.doc < b.doc;
    });
    std::vector<std::string> out;
    for (std::size_t i = 0; i < truth.size() && i < pool.size(); ++i) out.push_back(pool[i].doc);
    return out;
}

std::vector<double> default_betas() { return {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}; }

double tf_cosine(std::span<const TokenId> a, std::span<const TokenId> b) {
    if (a.empty() || b.empty()) return 0.0;
    std::unordered_map<TokenId, double> ta;
    std::unordered_map<TokenId, double> tb;
    for (auto w : a) ta[w] += 1.0;
    for (auto w : b) tb[w] += 1.0;
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (const auto& [w, x] : ta) {
        na += x * x;
        if (auto it = tb.find(w); it != tb.end()) dot += x * it->second;
    }
    for (const auto& [w, x] : tb) nb += x * x;
    return dot / std::sqrt(na * nb);
}

std::vector<std::size_t> greedy_select(std::span<const Candidate> pool,
                                       const std::function<double(const Candidate&, const Candidate&)>& similarity,
                                       double rho, std::size_t k) {
    std::vector<std::size_t> picked;
    std::vector<bool> used(pool.size(), false);
    std::vector<double> max_sim(pool.size(), 0.0);
    while (picked.size() < k && picked.size() < pool.size()) {
        std::size_t best = pool.size();
        double best_value = 0.0;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (used[i]) continue;
            const double value = pool[i].score - rho * max_sim[i];
            if (best == pool.size() || value > best_value ||
                (value == best_value && std::tie(pool[i].doc_id, pool[i].sentence) <
                                            std::tie(pool[best].doc_id, pool[best].sentence))) {
                best = i;
                best_value = value;
            }
        }
        used[best] = true;
        picked.push_back(best);
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (!used[i]) max_sim[i] = std::max(max_sim[i], similarity(pool[i], pool[best]));
        }
    }
    return picked;
}

SignTest paired_sign_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("sign test needs paired samples");
    SignTest t;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) ++t.wins;
        else if (a[i] < b[i]) ++t.losses;
        else ++t.ties;
    }
    const std::size_t n = t.wins + t.losses;
    if (n == 0) return t;
    const boost::math::binomial_distribution<double> dist(static_cast<double>(n), 0.5);
    t.p_value = std::min(1.0, 2.0 * boost::math::cdf(dist, static_cast<double>(std::min(t.wins, t.losses))));
    return t;
}

RunScores score_run(const std::vector<Ranking>& run, const GoldSet& gold, EvalUnit unit) {
    std::unordered_map<std::string, const Ranking*> by_query;
    for (const auto& r : run) by_query.emplace(r.query_id, &r);
    const Ranking empty;

    std::map<std::pair<std::string, std::string>, GoldSentences> items;
    for (const auto& [pair, positions] : gold) {
        if (positions.empty()) {
            spdlog::warn("no gold sentences for query '{}' document '{}', skipped", pair.first, pair.second);
            continue;
        }
        auto& g = items[{pair.first, unit == EvalUnit::pair ? pair.second : std::string()}];
        for (auto p : positions) g.emplace(pair.second, p);
    }

    RunScores out;
    for (const auto& [item, g] : items) {
        auto it = by_query.find(item.first);
        if (it == by_query.end()) spdlog::warn("query '{}' missing from run", item.first);
        const Ranking& full = it == by_query.end() ? empty : *it->second;
        Ranking restricted;
        const Ranking* r = &full;
        if (unit == EvalUnit::pair) {
            restricted.query_id = full.query_id;
            for (const auto& e : full.entries) {
                if (e.doc_id == item.second) restricted.entries.push_back(e);
            }
            r = &restricted;
        }
        PairScore s{item.first, item.second, *average_precision(*r, g), *reciprocal_rank(*r, g), *p_at_2(*r, g)};
        out.map += s.ap;
        out.mrr += s.rr;
        out.p2 += s.p2;
        out.items.push_back(std::move(s));
    }
    if (out.items.empty()) {
        spdlog::warn("no judged items to score");
        return out;
    }
    const auto n = static_cast<double>(out.items.size());
    out.map /= n;
    out.mrr /= n;
    out.p2 /= n;
    return out;
}

GoldSet parse_gold(std::string_view text, const Corpus* corpus, std::string_view origin) {
    GoldSet gold;
    std::size_t pos = 0;
    std::size_t lineno = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = end + 1;
        ++lineno;
        if (line.empty()) continue;
        const std::string where = std::string(origin) + ":" + std::to_string(lineno);
        const auto cols = split_tabs(line);
        if (cols.size() != 3) throw DataError(where + ": expected query_id, doc_id, sentence_index");
        std::size_t index = 0;
        try {
            std::size_t used = 0;
            const std::string s(cols[2]);
            const long long v = std::stoll(s, &used);
            if (used != s.size() || v < 0) throw std::invalid_argument("bad");
            index = static_cast<std::size_t>(v);
        } catch (const std::logic_error&) {
            throw DataError(where + ": bad sentence index '" + std::string(cols[2]) + "'");
        }
        if (corpus) {
            if (!corpus->find_query(cols[0])) throw DataError(where + ": unknown query '" + std::string(cols[0]) + "'");
            const auto k = corpus->find_document(cols[1]);
            if (!k) throw DataError(where + ": unknown document '" + std::string(cols[1]) + "'");
            const auto& sents = corpus->documents()[*k].sentences;
            const bool exists = std::any_of(sents.begin(), sents.end(), [&](const Sentence& s) { return s.position == index; });
            if (!exists) throw DataError(where + ": document '" + std::string(cols[1]) + "' has no sentence " + std::to_string(index));
        }
        gold[{std::string(cols[0]), std::string(cols[1])}].insert(index);
    }
    return gold;
}

std::string format_gold(const GoldSet& gold) {
    std::ostringstream out;
    for (const auto& [pair, positions] : gold) {
        for (auto p : positions) out << pair.first << '\t' << pair.second << '\t' << p << '\n';
    }
    return out.str();
}

}  // namespace bayesum
