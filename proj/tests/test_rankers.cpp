#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "bayesum/rankers.hpp"
#include "support.hpp"

using namespace bayesum;

namespace {

std::vector<std::pair<std::string, std::size_t>> order(const Ranking& r) {
    std::vector<std::pair<std::string, std::size_t>> out;
    for (const auto& e : r.entries) out.emplace_back(e.doc_id, e.sentence);
    return out;
}

std::vector<TokenId> ids(const Corpus& c, const std::vector<std::string>& words) {
    std::vector<TokenId> out;
    for (const auto& w : words) out.push_back(c.vocab().id(w));
    return out;
}

/// Random fixture: distinct-looking sentences over a 12-word vocabulary and a
/// long query, so plain KL scores never tie.
Corpus random_fixture(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> word(0, 11);
    std::uniform_int_distribution<int> len(3, 9);
    std::vector<std::pair<std::string, std::vector<std::string>>> docs;
    for (int d = 0; d < 3; ++d) {
        std::vector<std::string> sents;
        for (int s = 0; s < 6; ++s) {
            std::string text;
            for (int n = len(rng); n > 0; --n) text += "tok" + std::to_string(word(rng)) + " ";
            sents.push_back(text);
        }
        docs.emplace_back("d" + std::to_string(d), sents);
    }
    std::string query;
    for (int n = 0; n < 12; ++n) query += "tok" + std::to_string(n) + " ";
    for (int n = 0; n < 8; ++n) query += "tok" + std::to_string(word(rng)) + " ";
    return testing::toy_corpus(docs, {{"q", query}}, {{"q", "d0"}, {"q", "d1"}, {"q", "d2"}});
}

}  // namespace

TEST_CASE("random ranker") {
    const auto c = testing::toy_corpus({{"d1", {"x1", "x2", "x3", "x4", "x5", "x6", "x7", "x8", "x9", "x10", "x11", "x12"}}},
                                       {{"q", "x1"}}, {{"q", "d1"}});
    const std::vector<std::size_t> docs{0};
    const auto sents = gather_sentences(c, docs);
    const auto a = rank_random("q", sents, 1);
    CHECK(order(a) == order(rank_random("q", sents, 1)));
    CHECK(order(a) != order(rank_random("q", sents, 2)));
    for (std::size_t i = 0; i < a.entries.size(); ++i) CHECK(a.entries[i].score == -static_cast<double>(i + 1));
}

TEST_CASE("position ranker") {
    const auto c = testing::toy_corpus({{"d2", {"x", "y"}}, {"d1", {"x", "y", "z"}}}, {{"q", "x"}},
                                       {{"q", "d1"}, {"q", "d2"}});
    const std::vector<std::size_t> one{1};
    CHECK(order(rank_position("q", gather_sentences(c, one))) ==
          decltype(order(Ranking{})){{"d1", 0}, {"d1", 1}, {"d1", 2}});
    const std::vector<std::size_t> both{0, 1};
    CHECK(order(rank_position("q", gather_sentences(c, both))) ==
          decltype(order(Ranking{})){{"d1", 0}, {"d2", 0}, {"d1", 1}, {"d2", 1}, {"d1", 2}});
    CHECK(rank_position("q", {}).entries.empty());
}

TEST_CASE("jaccard ranker") {
    const auto c = testing::toy_corpus({{"d", {"apple berry", "berry cherry", "date"}}}, {{"q", "apple berry"}}, {{"q", "d"}});
    const std::vector<std::size_t> docs{0};
    const auto r = rank_jaccard("q", ids(c, {"apple", "berry"}), gather_sentences(c, docs));
    REQUIRE(r.entries.size() == 3);
    CHECK(r.entries[0].score == 1.0);
    CHECK(r.entries[1].score == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(r.entries[2].score == 0.0);
}

TEST_CASE("cosine ranker") {
    const auto c = testing::toy_corpus({{"d1", {"apple berry", "apple cherry cherry"}}, {"d2", {"berry date"}}},
                                       {{"q", "apple"}}, {{"q", "d1"}, {"q", "d2"}});
    const IdfTable idf(c);
    const double l2 = std::log(2.0);
    CHECK(idf[c.vocab().id("apple")] == doctest::Approx(l2));
    CHECK(idf[c.vocab().id("berry")] == 0.0);
    const std::vector<std::size_t> docs{0, 1};
    const auto sents = gather_sentences(c, docs);
    const auto r = rank_cosine("q", ids(c, {"apple", "apple", "cherry"}), sents, idf);
    REQUIRE(r.entries.size() == 3);
    // q = (2 l2, l2) over (apple, cherry)
    CHECK(r.entries[0].sentence == 0);
    CHECK(r.entries[0].score == doctest::Approx(2.0 * l2 * l2 / (std::sqrt(5.0) * l2 * l2)).epsilon(1e-12));
    CHECK(r.entries[1].sentence == 1);
    CHECK(r.entries[1].score == doctest::Approx(4.0 / 5.0).epsilon(1e-12));
    CHECK(r.entries[2].doc_id == "d2");
    CHECK(r.entries[2].score == 0.0);
    const auto same = rank_cosine("q", ids(c, {"apple", "cherry", "cherry"}), sents, idf);
    CHECK(same.entries[0].score == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("kl ranker") {
    const auto c = testing::toy_corpus({{"d", {"apple berry", "cherry date", "apple cherry"}}}, {{"q", "apple berry"}},
                                       {{"q", "d"}});
    const auto bg = baseline_background(c);
    const std::vector<std::size_t> docs{0};
    const auto sents = gather_sentences(c, docs);
    const auto r = rank_kl("q", ids(c, {"apple", "berry"}), sents, bg);
    REQUIRE(r.entries.size() == 3);
    CHECK(r.entries[0].sentence == 0);
    CHECK(r.entries[0].score == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.entries[1].sentence == 2);
    CHECK(order(r) == order(rank_kl("q", ids(c, {"apple", "berry"}), sents, bg)));
    CHECK(baseline_query_model({}, bg, 0.1) == bg);
}

TEST_CASE("feedback grid") {
    const auto grid = feedback_grid();
    CHECK(grid.size() == 20);
    std::set<std::pair<std::size_t, double>> points;
    for (const auto& g : grid) points.emplace(g.n, g.lambda);
    CHECK(points.size() == 20);
    for (std::size_t n : {5, 10, 25, 50, 100})
        for (double l : {0.2, 0.4, 0.6, 0.8}) CHECK(points.count({n, l}) == 1);
    CHECK_THROWS((FeedbackConfig{0, 0.4}.validate()));
    CHECK_THROWS((FeedbackConfig{5, 0.0}.validate()));
    CHECK_THROWS((FeedbackConfig{5, 1.0}.validate()));
}

TEST_CASE("kl-rel reduces to kl as lambda vanishes") {
    std::mt19937_64 rng(3);
    int checked = 0;
    for (int f = 0; f < 50; ++f) {
        const auto c = random_fixture(rng);
        const auto bg = baseline_background(c);
        const std::vector<std::size_t> docs{0, 1, 2};
        const auto sents = gather_sentences(c, docs);
        const auto query = c.queries()[0].select(FieldSet::all(), true);
        const auto kl = rank_kl("q", query, sents, bg);
        bool tied = false;
        for (std::size_t i = 1; i < kl.entries.size(); ++i) tied = tied || kl.entries[i - 1].score - kl.entries[i].score <= 1e-9;
        if (tied) continue;
        ++checked;
        for (double lambda : {1e-9, 1e-12}) {
            const auto rel = rank_kl_rel("q", query, sents, sents, FeedbackConfig{5, lambda}, bg);
            CHECK(order(rel) == order(kl));
        }
    }
    CHECK(checked >= 10);
}

TEST_CASE("kl-rel clamps n to the pool") {
    std::mt19937_64 rng(4);
    const auto c = random_fixture(rng);
    const auto bg = baseline_background(c);
    const std::vector<std::size_t> docs{0, 1, 2};
    const auto sents = gather_sentences(c, docs);
    const auto query = c.queries()[0].select(FieldSet::all(), true);
    const auto whole = expanded_query_model(query, sents, FeedbackConfig{sents.size(), 0.5}, bg);
    CHECK(expanded_query_model(query, sents, FeedbackConfig{1000, 0.5}, bg) == whole);
    const auto a = rank_kl_rel("q", query, sents, sents, FeedbackConfig{1000, 0.5}, bg);
    const auto b = rank_kl_rel("q", query, sents, sents, FeedbackConfig{sents.size(), 0.5}, bg);
    CHECK(order(a) == order(b));
    const auto empty = expanded_query_model({}, sents, FeedbackConfig{5, 0.5}, bg);
    double total = 0.0;
    for (double p : empty.probs()) total += p;
    CHECK(total == doctest::Approx(1.0));
}
