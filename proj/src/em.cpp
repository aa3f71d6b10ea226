#include "bayesum/em.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bayesum/error.hpp"
#include "bayesum/io.hpp"
#include "bayesum/parallel.hpp"

namespace bayesum {

namespace {

constexpr std::size_t kSplitIterations = 10;
constexpr std::size_t kAlphaIterations = 20;

struct SentenceSlot {
    std::size_t doc;
    std::size_t sent;
};

std::vector<SentenceSlot> flatten(const Corpus& corpus) {
    std::vector<SentenceSlot> refs;
    refs.reserve(corpus.stats().sentences);
    for (std::size_t k = 0; k < corpus.documents().size(); ++k) {
        for (std::size_t s = 0; s < corpus.documents()[k].sentences.size(); ++s) refs.push_back({k, s});
    }
    return refs;
}

double inverse_digamma(double y) {
    double x = y >= -2.22 ? std::exp(y) + 0.5 : -1.0 / (y + 0.5772156649015329);
    for (int i = 0; i < 8; ++i) {
        x -= (boost::math::digamma(x) - y) / boost::math::trigamma(x);
        if (x <= 0.0) x = 1e-8;
    }
    return x;
}

/// Masked Minka fixed point: psi(alpha_a) = mean over sentences allowing a of
/// psi(sum of allowed alpha) + E[ln pi_a].
void update_alpha(std::vector<double>& alpha, const std::vector<SentencePosterior>& posteriors) {
    const std::size_t C = alpha.size();
    std::vector<double> elog_sum(C, 0.0);
    std::vector<double> members(C, 0.0);
    for (const auto& post : posteriors) {
        if (post.components.size() < 2) continue;
        double total = 0.0;
        for (double g : post.gamma) total += g;
        const double psi_total = boost::math::digamma(total);
        for (std::size_t a = 0; a < post.components.size(); ++a) {
            elog_sum[post.components[a]] += boost::math::digamma(post.gamma[a]) - psi_total;
            members[post.components[a]] += 1.0;
        }
    }
    for (std::size_t it = 0; it < kAlphaIterations; ++it) {
        std::vector<double> psi_sum(C, 0.0);
        for (const auto& post : posteriors) {
            if (post.components.size() < 2) continue;
            double s = 0.0;
            for (auto c : post.components) s += alpha[c];
            const double p = boost::math::digamma(s);
            for (auto c : post.components) psi_sum[c] += p;
        }
        for (std::size_t c = 0; c < C; ++c) {
            if (members[c] == 0.0) continue;
            alpha[c] = inverse_digamma((psi_sum[c] + elog_sum[c]) / members[c]);
        }
    }
}

/// Re-estimates stored models from expected emission counts. Counts of a
/// smoothed component are split between its own model and p^G by an inner EM
/// over which half of the mixture emitted each word.
void m_step(ModelParams& params, std::vector<std::vector<double>> counts) {
    const auto layout = params.layout();
    const std::size_t V = params.vocab_size();
    const double lambda = params.smoothing;
    std::vector<UnigramModel> current(layout.size());
    for (std::size_t i = 1; i < layout.size(); ++i) current[i] = params.component(i);
    UnigramModel general = params.general;

    for (std::size_t it = 0; it < kSplitIterations; ++it) {
        std::vector<double> g_counts = counts[0];
        std::vector<UnigramModel> next(layout.size());
        for (std::size_t i = 1; i < layout.size(); ++i) {
            const auto& c = counts[i];
            std::vector<double> own(V, 0.0);
            double own_total = 0.0;
            for (std::size_t w = 0; w < V; ++w) {
                if (c[w] == 0.0) continue;
                const double a = (1.0 - lambda) * current[i][static_cast<TokenId>(w)];
                const double b = lambda * general[static_cast<TokenId>(w)];
                const double r = a / (a + b);
                own[w] = c[w] * r;
                own_total += own[w];
                g_counts[w] += c[w] * (1.0 - r);
            }
            next[i] = own_total > 0.0 ? mle(own) : current[i];
        }
        general = background_model(g_counts);
        for (std::size_t i = 1; i < layout.size(); ++i) current[i] = std::move(next[i]);
    }

    params.general = std::move(general);
    for (std::size_t k = 0; k < layout.num_documents(); ++k) params.documents[k] = current[layout.document(k)];
    for (std::size_t j = 0; j < layout.num_queries(); ++j) params.queries[j] = current[layout.query(j)];
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

AllowedMask document_mask(const Corpus& corpus, std::size_t k) {
    const ComponentIndex layout(corpus.documents().size(), corpus.queries().size());
    return AllowedMask::for_document(layout, k, corpus.relevance().relevant_queries(k));
}

ModelParams init_params(const Corpus& corpus, const FitConfig& cfg) {
    cfg.validate();
    if (corpus.documents().empty()) throw std::invalid_argument("empty corpus");
    const std::size_t V = corpus.vocab().size();
    const auto uniform = UnigramModel::uniform(V);

    ModelParams p;
    p.smoothing = cfg.smoothing;
    std::vector<double> all(V, 0.0);
    for (const auto& doc : corpus.documents()) {
        CountVector counts;
        for (const auto& s : doc.sentences) {
            for (auto w : s.tokens) {
                counts.add(w);
                all[w] += 1.0;
            }
        }
        p.documents.push_back(interpolate(mle(counts, V), uniform, 0.5));
        p.document_ids.push_back(doc.id);
    }
    for (const auto& q : corpus.queries()) {
        const auto words = q.select(cfg.fields, false);
        for (auto w : words) all[w] += 1.0;
        p.queries.push_back(words.empty() ? uniform : interpolate(mle(CountVector::of(words), V), uniform, 0.5));
        p.query_ids.push_back(q.id);
    }
    p.general = background_model(all);
    p.alpha.assign(p.layout().size(), 1.0);
    p.alpha[0] = 2.0;
    return p;
}

void check_compatible(const Corpus& corpus, const ModelParams& params) {
    params.validate();
    if (params.vocab_size() != corpus.vocab().size())
        throw DataError("model vocabulary size " + std::to_string(params.vocab_size()) +
                        " does not match corpus vocabulary size " + std::to_string(corpus.vocab().size()));
    if (params.documents.size() != corpus.documents().size() || params.queries.size() != corpus.queries().size())
        throw DataError("model dimensions do not match corpus");
    for (std::size_t k = 0; k < params.document_ids.size(); ++k) {
        if (params.document_ids[k] != corpus.documents()[k].id)
            throw DataError("model document '" + params.document_ids[k] + "' does not match corpus document '" +
                            corpus.documents()[k].id + "'");
    }
    for (std::size_t j = 0; j < params.query_ids.size(); ++j) {
        if (params.query_ids[j] != corpus.queries()[j].id)
            throw DataError("model query '" + params.query_ids[j] + "' does not match corpus query '" +
                            corpus.queries()[j].id + "'");
    }
}

double query_log_likelihood(const Corpus& corpus, const ModelParams& params, FieldSet fields) {
    const auto layout = params.layout();
    double total = 0.0;
    for (std::size_t j = 0; j < corpus.queries().size(); ++j) {
        for (auto w : corpus.queries()[j].select(fields, false)) total += std::log(params.emission(layout.query(j), w));
    }
    return total;
}

FitResult em_fit(const Corpus& corpus, const FitConfig& cfg, std::optional<ModelParams> initial) {
    cfg.validate();
    FitResult result;
    result.params = initial ? std::move(*initial) : init_params(corpus, cfg);
    check_compatible(corpus, result.params);
    result.params.smoothing = cfg.smoothing;

    const auto refs = flatten(corpus);
    const std::size_t threads = cfg.threads == 0 ? default_threads() : cfg.threads;
    std::vector<AllowedMask> masks;
    for (std::size_t k = 0; k < corpus.documents().size(); ++k) masks.push_back(document_mask(corpus, k));

    std::vector<SentencePosterior> posteriors(refs.size());
    std::vector<std::vector<double>> warm(refs.size());
    const auto start = std::chrono::steady_clock::now();
    double previous = 0.0;

    for (std::size_t iter = 1; iter <= cfg.max_iterations; ++iter) {
        auto& params = result.params;
        parallel_for(refs.size(), threads, [&](std::size_t i) {
            const auto& ref = refs[i];
            const auto& words = corpus.documents()[ref.doc].sentences[ref.sent].tokens;
            posteriors[i] = infer_sentence(words, masks[ref.doc], params, cfg, warm[i]);
        });

        double bound = cfg.query_word_weight * query_log_likelihood(corpus, params, cfg.fields);
        for (std::size_t i = 0; i < refs.size(); ++i) {
            bound += posteriors[i].log_evidence;
            if (!std::isfinite(bound)) {
                const auto& doc = corpus.documents()[refs[i].doc];
                throw NumericalError("non-finite evidence bound at iteration " + std::to_string(iter) +
                                     ", document '" + doc.id + "' sentence " +
                                     std::to_string(doc.sentences[refs[i].sent].position));
            }
        }
        result.trace.push_back({iter, bound, seconds_since(start)});
        spdlog::debug("em iteration {}: bound {:.6f}", iter, bound);

        if (iter > 1 && std::abs(bound - previous) <= cfg.tolerance * std::abs(previous)) {
            result.converged = true;
            break;
        }
        previous = bound;

        const auto layout = params.layout();
        const std::size_t V = params.vocab_size();
        std::vector<std::vector<double>> counts(layout.size(), std::vector<double>(V, 0.0));
        for (std::size_t i = 0; i < refs.size(); ++i) {
            const auto& post = posteriors[i];
            const auto& words = corpus.documents()[refs[i].doc].sentences[refs[i].sent].tokens;
            const std::size_t A = post.components.size();
            for (std::size_t n = 0; n < words.size(); ++n) {
                for (std::size_t a = 0; a < A; ++a) counts[post.components[a]][words[n]] += post.responsibilities[n * A + a];
            }
            if (cfg.engine == InferenceEngine::variational) warm[i] = post.gamma;
        }
        if (cfg.query_word_weight > 0.0) {
            for (std::size_t j = 0; j < corpus.queries().size(); ++j) {
                for (auto w : corpus.queries()[j].select(cfg.fields, false))
                    counts[layout.query(j)][w] += cfg.query_word_weight;
            }
        }
        m_step(params, std::move(counts));
        if (cfg.alpha_mode == AlphaMode::learned) update_alpha(params.alpha, posteriors);
    }
    return result;
}

double log_evidence(const Corpus& corpus, const ModelParams& params, const FitConfig& cfg, EvidenceMode mode) {
    cfg.validate();
    check_compatible(corpus, params);
    double total = query_log_likelihood(corpus, params, cfg.fields);
    for (std::size_t k = 0; k < corpus.documents().size(); ++k) {
        const auto mask = document_mask(corpus, k);
        for (const auto& s : corpus.documents()[k].sentences) {
            if (mode == EvidenceMode::exact) {
                total += exact_posterior(make_problem(s.tokens, mask, params)).log_evidence;
            } else {
                total += infer_sentence(s.tokens, mask, params, cfg).log_evidence;
            }
        }
    }
    return total;
}

std::string format_trace_csv(const std::vector<FitTraceEntry>& trace) {
    std::ostringstream out;
    out << "iteration,bound,wall_seconds\n";
    for (const auto& e : trace) out << e.iteration << ',' << format_double(e.bound) << ',' << format_double(e.wall_seconds) << '\n';
    return out.str();
}

}  // namespace bayesum
