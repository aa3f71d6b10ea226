#include "bayesum/sampler.hpp"

#include <cstdio>
#include <random>
#include <stdexcept>

#include "bayesum/em.hpp"

namespace bayesum {

namespace {

std::vector<double> draw_dirichlet(std::mt19937_64& rng, std::span<const double> alpha) {
    std::vector<double> x(alpha.size());
    double total = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        std::gamma_distribution<double> g(alpha[i], 1.0);
        x[i] = g(rng);
        total += x[i];
    }
    if (total <= 0.0) {
        // every draw underflowed; fall back to a vertex
        std::uniform_int_distribution<std::size_t> pick(0, alpha.size() - 1);
        std::fill(x.begin(), x.end(), 0.0);
        x[pick(rng)] = 1.0;
        return x;
    }
    for (auto& v : x) v /= total;
    return x;
}

std::vector<double> symmetric_dirichlet(std::mt19937_64& rng, std::size_t n, double concentration) {
    std::vector<double> alpha(n, concentration);
    return draw_dirichlet(rng, alpha);
}

std::string padded(char prefix, std::size_t i, int width) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%c%0*zu", prefix, width, i);
    return buf;
}

int width_for(std::size_t n) {
    int w = 1;
    for (std::size_t m = 10; m < n; m *= 10) ++w;
    return std::max(w, 2);
}

/// Cumulative table for repeated categorical draws.
class Categorical {
  public:
    explicit Categorical(std::vector<double> p) : m_cdf(std::move(p)) {
        double acc = 0.0;
        for (auto& v : m_cdf) {
            acc += v;
            v = acc;
        }
    }
    std::size_t operator()(std::mt19937_64& rng) const {
        std::uniform_real_distribution<double> u(0.0, m_cdf.back());
        const double x = u(rng);
        auto it = std::upper_bound(m_cdf.begin(), m_cdf.end(), x);
        if (it == m_cdf.end()) --it;
        return static_cast<std::size_t>(it - m_cdf.begin());
    }

  private:
    std::vector<double> m_cdf;
};

std::vector<double> emission_vector(const ModelParams& p, std::size_t component) {
    std::vector<double> e(p.vocab_size());
    for (std::size_t w = 0; w < e.size(); ++w) e[w] = p.emission(component, static_cast<TokenId>(w));
    return e;
}

}  // namespace

RelevanceMatrix synthetic_relevance(std::size_t num_documents, std::size_t num_queries) {
    if (num_queries == 0) throw std::invalid_argument("at least one query required");
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t k = 0; k < num_documents; ++k) pairs.emplace_back(k, k % num_queries);
    return RelevanceMatrix(num_documents, num_queries, std::move(pairs));
}

ModelParams make_true_params(const SynthShape& shape, const TruthOptions& opts, std::uint64_t seed) {
    if (opts.vocab_size == 0 || shape.num_documents == 0 || shape.num_queries == 0)
        throw std::invalid_argument("synthetic shape must be non-empty");
    std::mt19937_64 rng(seed);
    const std::size_t V = opts.vocab_size;
    ModelParams p;
    p.smoothing = opts.smoothing;
    p.general = UnigramModel(symmetric_dirichlet(rng, V, opts.general_concentration));
    // p^G must stay strictly positive
    p.general = background_model(std::vector<double>(p.general.probs().begin(), p.general.probs().end()));
    const int dw = width_for(shape.num_documents);
    const int qw = width_for(shape.num_queries);
    for (std::size_t k = 0; k < shape.num_documents; ++k) {
        p.documents.emplace_back(symmetric_dirichlet(rng, V, opts.topic_concentration));
        p.document_ids.push_back(padded('d', k, dw + 1));
    }
    for (std::size_t j = 0; j < shape.num_queries; ++j) {
        p.queries.emplace_back(symmetric_dirichlet(rng, V, opts.topic_concentration));
        p.query_ids.push_back(padded('q', j, qw));
    }
    const auto layout = p.layout();
    p.alpha.assign(layout.size(), opts.alpha_document);
    p.alpha[0] = opts.alpha_general;
    for (std::size_t j = 0; j < shape.num_queries; ++j) p.alpha[layout.query(j)] = opts.alpha_query;
    p.validate();
    return p;
}

SampledCorpus sample_corpus(const ModelParams& truth, const SynthShape& shape, const RelevanceMatrix& relevance,
                            std::uint64_t seed) {
    truth.validate();
    const std::size_t K = truth.documents.size();
    const std::size_t J = truth.queries.size();
    if (relevance.num_docs() != K || relevance.num_queries() != J)
        throw std::invalid_argument("relevance shape does not match parameters");
    if (shape.sentences_per_doc == 0 || shape.words_per_sentence == 0)
        throw std::invalid_argument("sentences and words per sentence must be positive");

    std::mt19937_64 rng(seed);
    const auto layout = truth.layout();
    std::vector<Categorical> emit;
    emit.reserve(layout.size());
    for (std::size_t i = 0; i < layout.size(); ++i) emit.emplace_back(emission_vector(truth, i));

    Vocab vocab;
    for (std::size_t w = 0; w < truth.vocab_size(); ++w) vocab.add("w" + std::to_string(w));

    auto render = [&](const std::vector<TokenId>& words) {
        std::string out;
        for (auto w : words) {
            if (!out.empty()) out += ' ';
            out += vocab.token(w);
        }
        return out;
    };

    std::vector<Query> queries(J);
    for (std::size_t j = 0; j < J; ++j) {
        auto& q = queries[j];
        q.id = truth.query_ids[j];
        std::vector<TokenId> words;
        for (std::size_t n = 0; n < shape.query_length; ++n) words.push_back(static_cast<TokenId>(emit[layout.query(j)](rng)));
        const auto t = static_cast<std::size_t>(QueryField::title);
        q.text[t] = render(words);
        q.tokens[t] = words;
        q.content[t] = std::move(words);
    }

    std::vector<Document> docs(K);
    std::vector<std::vector<std::vector<double>>> drawn(K);
    for (std::size_t k = 0; k < K; ++k) {
        const auto mask = AllowedMask::for_document(layout, k, relevance.relevant_queries(k));
        std::vector<double> sub_alpha;
        for (auto c : mask.components()) sub_alpha.push_back(truth.alpha[c]);
        auto& doc = docs[k];
        doc.id = truth.document_ids[k];
        std::size_t offset = 0;
        for (std::size_t s = 0; s < shape.sentences_per_doc; ++s) {
            auto pi = draw_dirichlet(rng, sub_alpha);
            Categorical source(pi);
            Sentence sent;
            for (std::size_t n = 0; n < shape.words_per_sentence; ++n) {
                const auto c = mask.components()[source(rng)];
                sent.tokens.push_back(static_cast<TokenId>(emit[c](rng)));
            }
            sent.content = sent.tokens;
            const auto text = render(sent.tokens);
            sent.span = {offset, offset + text.size()};
            offset += text.size() + 1;
            sent.position = s;
            doc.sentences.push_back(std::move(sent));
            drawn[k].push_back(std::move(pi));
        }
    }

    PreprocessOptions opts;
    opts.stem = false;
    return SampledCorpus{
        Corpus(std::move(vocab), std::move(docs), std::move(queries), relevance, PreprocessDescriptor::from(opts)),
        std::move(drawn)};
}

GoldSet SampledCorpus::planted_gold(double threshold) const {
    GoldSet gold;
    const ComponentIndex layout(corpus.documents().size(), corpus.queries().size());
    for (std::size_t k = 0; k < corpus.documents().size(); ++k) {
        const auto& doc = corpus.documents()[k];
        const auto mask = AllowedMask::for_document(layout, k, corpus.relevance().relevant_queries(k));
        for (auto j : corpus.relevance().relevant_queries(k)) {
            const auto slot = mask.slot(layout.query(j));
            std::set<std::size_t> positions;
            for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
                if (pi[k][s][slot] >= threshold) positions.insert(doc.sentences[s].position);
            }
            if (!positions.empty()) gold[{corpus.queries()[j].id, doc.id}] = std::move(positions);
        }
    }
    return gold;
}

UnigramModel analytic_marginal(const ModelParams& truth, const RelevanceMatrix& relevance) {
    const auto layout = truth.layout();
    const std::size_t V = truth.vocab_size();
    const std::size_t K = truth.documents.size();
    std::vector<double> m(V, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
        const auto mask = AllowedMask::for_document(layout, k, relevance.relevant_queries(k));
        double total = 0.0;
        for (auto c : mask.components()) total += truth.alpha[c];
        for (auto c : mask.components()) {
            const double share = truth.alpha[c] / total / static_cast<double>(K);
            for (std::size_t w = 0; w < V; ++w) m[w] += share * truth.emission(c, static_cast<TokenId>(w));
        }
    }
    return mle(m);
}

}  // namespace bayesum
