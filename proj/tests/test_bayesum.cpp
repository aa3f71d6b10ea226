#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "bayesum/em.hpp"
#include "bayesum/error.hpp"
#include "bayesum/params_io.hpp"
#include "bayesum/sampler.hpp"
#include "bayesum/scoring.hpp"
#include "support.hpp"

using namespace bayesum;

namespace {

SampledCorpus small_synthetic(std::uint64_t seed) {
    const SynthShape shape;
    const auto truth = make_true_params(shape, TruthOptions{}, seed);
    return sample_corpus(truth, shape, synthetic_relevance(shape.num_documents, shape.num_queries), seed + 1000);
}

double direct_neg_kl(const UnigramModel& p, const UnigramModel& q) {
    double s = 0.0;
    for (std::size_t w = 0; w < p.size(); ++w) {
        if (p[static_cast<TokenId>(w)] > 0.0)
            s += p[static_cast<TokenId>(w)] * std::log(p[static_cast<TokenId>(w)] / q[static_cast<TokenId>(w)]);
    }
    return -s;
}

}  // namespace

TEST_CASE("init params") {
    const auto c = testing::toy_corpus({{"d1", {"a a b"}}}, {{"q1", "a"}, {"q2", ""}}, {{"q1", "d1"}, {"q2", "d1"}});
    const auto p = init_params(c, FitConfig{});
    const auto a = c.vocab().id("a");
    CHECK(p.documents[0][a] == doctest::Approx(0.5 * (2.0 / 3.0) + 0.5 * 0.5));
    CHECK(p.queries[1] == UnigramModel::uniform(2));
    CHECK(p.alpha == std::vector<double>{2.0, 1.0, 1.0, 1.0});
    CHECK_NOTHROW(p.validate());
    CHECK(p.query_index("q2") == 1);
    CHECK_THROWS_AS(p.query_index("q9"), DataError);
}

TEST_CASE("zero iterations return the initialization") {
    const auto s = small_synthetic(1);
    FitConfig cfg;
    cfg.max_iterations = 0;
    const auto fit = em_fit(s.corpus, cfg);
    const auto init = init_params(s.corpus, cfg);
    CHECK(fit.trace.empty());
    CHECK(fit.params.general == init.general);
    CHECK(fit.params.documents == init.documents);
    CHECK(fit.params.queries == init.queries);
}

TEST_CASE("em bound is monotone and capped") {
    const auto s = small_synthetic(2);
    FitConfig cfg;
    cfg.max_iterations = 1;
    CHECK(em_fit(s.corpus, cfg).trace.size() == 1);

    cfg.max_iterations = 15;
    cfg.tolerance = 1e-12;
    for (auto engine : {InferenceEngine::variational, InferenceEngine::ep}) {
        cfg.engine = engine;
        const auto fit = em_fit(s.corpus, cfg);
        REQUIRE(fit.trace.size() >= 2);
        if (engine == InferenceEngine::variational) {
            for (std::size_t i = 1; i < fit.trace.size(); ++i) CHECK(fit.trace[i].bound >= fit.trace[i - 1].bound - 1e-6);
        }
        for (const auto& e : fit.trace) CHECK(std::isfinite(e.bound));
    }
}

TEST_CASE("em is deterministic across thread counts") {
    const auto s = small_synthetic(3);
    FitConfig cfg;
    cfg.max_iterations = 5;
    cfg.threads = 1;
    const auto a = em_fit(s.corpus, cfg);
    cfg.threads = 3;
    const auto b = em_fit(s.corpus, cfg);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) CHECK(a.trace[i].bound == b.trace[i].bound);
    CHECK(a.params.queries == b.params.queries);
}

TEST_CASE("learned alpha stays positive") {
    const auto s = small_synthetic(4);
    FitConfig cfg;
    cfg.max_iterations = 5;
    cfg.alpha_mode = AlphaMode::learned;
    const auto fit = em_fit(s.corpus, cfg);
    for (double a : fit.params.alpha) CHECK((a > 0.0 && std::isfinite(a)));
    CHECK(fit.params.alpha != init_params(s.corpus, cfg).alpha);
}

TEST_CASE("variational evidence bounds the exact evidence") {
    const auto c = testing::toy_corpus({{"d1", {"a b", "b c a"}}, {"d2", {"c c"}}}, {{"q1", "a"}}, {{"q1", "d1"}});
    FitConfig cfg;
    const auto p = init_params(c, cfg);
    const double exact = log_evidence(c, p, cfg, EvidenceMode::exact);
    const double vb = log_evidence(c, p, cfg);
    CHECK(vb <= exact + 1e-9);
    CHECK(std::isfinite(exact));
}

TEST_CASE("incompatible params are rejected") {
    const auto s = small_synthetic(1);
    const auto other = small_synthetic(2);
    auto p = init_params(s.corpus, FitConfig{});
    p.document_ids[0] = "zzz";
    CHECK_THROWS_AS(em_fit(s.corpus, FitConfig{}, p), DataError);
    CHECK_THROWS_AS(check_compatible(other.corpus, p), DataError);
}

TEST_CASE("sampler determinism and marginal") {
    const SynthShape small;
    const auto truth = make_true_params(small, TruthOptions{}, 8);
    const auto rel = synthetic_relevance(small.num_documents, small.num_queries);
    const auto a = sample_corpus(truth, small, rel, 1);
    const auto b = sample_corpus(truth, small, rel, 1);
    const auto c = sample_corpus(truth, small, rel, 2);
    auto flat = [](const Corpus& x) {
        std::vector<TokenId> out;
        for (const auto& d : x.documents())
            for (const auto& s : d.sentences) out.insert(out.end(), s.tokens.begin(), s.tokens.end());
        return out;
    };
    CHECK(flat(a.corpus) == flat(b.corpus));
    CHECK(flat(a.corpus) != flat(c.corpus));
    CHECK(a.planted_gold() == b.planted_gold());
    CHECK(a.corpus.queries()[0].select(FieldSet::all(), false).size() == small.query_length);

    SynthShape big = small;
    big.sentences_per_doc = 20000;
    const auto large = sample_corpus(truth, big, rel, 3);
    std::vector<double> counts(truth.vocab_size(), 0.0);
    for (auto w : flat(large.corpus)) counts[w] += 1.0;
    CHECK(total_variation(mle(counts), analytic_marginal(truth, rel)) < 0.01);
}

TEST_CASE("planted gold follows the drawn proportions") {
    const auto s = small_synthetic(5);
    const auto gold = s.planted_gold(0.5);
    const ComponentIndex layout(4, 2);
    for (const auto& [pair, positions] : gold) {
        const auto k = s.corpus.document_index(pair.second);
        const auto j = s.corpus.query_index(pair.first);
        const auto slot = document_mask(s.corpus, k).slot(layout.query(j));
        for (auto pos : positions) CHECK(s.pi[k][pos][slot] >= 0.5);
    }
    CHECK(s.planted_gold(1.01).empty());
}

TEST_CASE("score sentences") {
    const auto c = testing::toy_corpus({{"d1", {"apple apple", "zebra yak", "apple zebra"}}, {"d2", {"yak"}}},
                                       {{"q1", "apple"}}, {{"q1", "d1"}});
    auto p = init_params(c, FitConfig{});
    const auto apple = c.vocab().id("apple");
    std::vector<double> delta(c.vocab().size(), 0.0);
    delta[apple] = 1.0;
    p.queries[0] = UnigramModel(delta);

    const std::vector<std::size_t> docs{0};
    const auto r = score_sentences(c, "q1", docs, p);
    REQUIRE(r.entries.size() == 3);
    CHECK(r.entries[0].sentence == 0);
    CHECK(r.entries[0].score == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.entries[1].sentence == 2);
    const auto q = query_model(p, "q1");
    const auto& sent = c.documents()[0].sentences[2].tokens;
    const auto sm = smooth(mle(CountVector::of(sent), c.vocab().size()), p.general, 0.1);
    CHECK(r.entries[1].score == doctest::Approx(direct_neg_kl(q, sm)).epsilon(1e-12));
    CHECK(is_valid_ranking(r));

    const std::vector<std::size_t> off{1};
    CHECK_THROWS_AS(score_sentences(c, "q1", off, p), DataError);
    CHECK_THROWS_AS(score_sentences(c, "q9", docs, p), DataError);
    CHECK_THROWS_AS(score_sentences(c, "q1", std::vector<std::size_t>{}, p), std::invalid_argument);

    ScoreConfig post;
    post.mode = SentenceScore::posterior_proportion;
    const auto pr = score_sentences(c, "q1", docs, p, post);
    CHECK(pr.entries.front().sentence == 0);
}

TEST_CASE("params round trip") {
    const auto s = small_synthetic(6);
    FitConfig cfg;
    cfg.max_iterations = 3;
    const auto fit = em_fit(s.corpus, cfg);
    testing::TempDir dir("params");
    save_params(dir / "m", fit.params, s.corpus.vocab().tokens(), make_meta(cfg), fit.trace);
    const auto loaded = load_params(dir / "m");
    CHECK(loaded.params.alpha == fit.params.alpha);
    CHECK(loaded.params.general == fit.params.general);
    CHECK(loaded.params.documents == fit.params.documents);
    CHECK(loaded.params.queries == fit.params.queries);
    CHECK(loaded.params.document_ids == fit.params.document_ids);
    CHECK(loaded.params.smoothing == fit.params.smoothing);
    CHECK(loaded.meta.config_hash == make_meta(cfg).config_hash);
    CHECK_NOTHROW(check_model_vocab(loaded, s.corpus));
    CHECK(read_file(dir / "m" / "trace.csv") == format_trace_csv(fit.trace));

    const auto other = testing::toy_corpus({{"d1", {"a"}}}, {{"q1", "a"}}, {{"q1", "d1"}});
    CHECK_THROWS_AS(check_model_vocab(loaded, other), DataError);
    CHECK_THROWS_AS(load_params(dir / "nothing"), DataError);
}
