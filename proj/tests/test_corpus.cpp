#include <doctest.h>

#include <stdexcept>

#include "bayesum/corpus_io.hpp"
#include "bayesum/error.hpp"
#include "bayesum/porter_stemmer.hpp"
#include "bayesum/segmenter.hpp"
#include "bayesum/stopwords.hpp"
#include "bayesum/tokenizer.hpp"
#include "support.hpp"

using namespace bayesum;

TEST_CASE("porter stemmer reference pairs") {
    const std::vector<std::pair<std::string, std::string>> pairs{
        {"caresses", "caress"}, {"ponies", "poni"},   {"ties", "ti"},         {"caress", "caress"},
        {"cats", "cat"},        {"feed", "feed"},     {"agreed", "agre"},     {"plastered", "plaster"},
        {"bled", "bled"},       {"motoring", "motor"}, {"sing", "sing"},      {"conflated", "conflat"},
        {"troubled", "troubl"}, {"sized", "size"},    {"hopping", "hop"},     {"tanned", "tan"},
        {"falling", "fall"},    {"hissing", "hiss"},  {"fizzed", "fizz"},     {"failing", "fail"},
        {"filing", "file"},     {"happy", "happi"},   {"sky", "sky"},         {"relational", "relat"},
        {"conditional", "condit"}, {"rational", "ration"}, {"valenci", "valenc"}, {"digitizer", "digit"},
        {"operator", "oper"},   {"feudalism", "feudal"}, {"decisiveness", "decis"}, {"hopefulness", "hope"},
        {"formaliti", "formal"}, {"triplicate", "triplic"}, {"formative", "form"}, {"electrical", "electr"},
        {"revival", "reviv"},   {"allowance", "allow"}, {"adjustment", "adjust"}, {"probate", "probat"},
        {"rate", "rate"},       {"cease", "ceas"},    {"controll", "control"}, {"roll", "roll"},
        {"running", "run"},     {"runs", "run"},      {"generalizations", "gener"}, {"at", "at"},
    };
    for (const auto& [in, out] : pairs) {
        CAPTURE(in);
        CHECK(porter_stem(in) == out);
    }
}

TEST_CASE("tokenize") {
    PreprocessOptions opts;
    CHECK(tokenize("", opts).empty());
    CHECK(tokenize("Running runs RUN", opts) == std::vector<std::string>{"run", "run", "run"});
    opts.remove_stopwords = true;
    CHECK(tokenize("the cat sat", opts) == std::vector<std::string>{"cat", "sat"});
    opts.stem = false;
    CHECK(tokenize("Don't STOP-now, 42x", opts) == std::vector<std::string>{"dont", "stop", "42x"});

    PreprocessOptions keep;
    const auto analyzed = analyze("The cats", keep);
    REQUIRE(analyzed.size() == 2);
    CHECK(analyzed[0].stopword);
    CHECK(analyzed[1].term == "cat");
    CHECK(!analyzed[1].stopword);
    CHECK(tokenize("same input twice", keep) == tokenize("same input twice", keep));
}

TEST_CASE("stopword list") {
    const auto& en = StopwordList::english();
    CHECK(en.contains("the"));
    CHECK(!en.contains("cat"));
    testing::TempDir dir("stop");
    dir.write("s.txt", "# comment\nzebra\n\nyak\n");
    const auto custom = StopwordList::from_file((dir / "s.txt").string());
    CHECK(custom.size() == 2);
    CHECK(custom.contains("yak"));
    CHECK(custom.hash() != en.hash());
}

TEST_CASE("segment sentences") {
    CHECK(segment_sentences("One. Two.").size() == 2);
    const auto dr = segment_sentences("Dr. Smith left. He returned.");
    REQUIRE(dr.size() == 2);
    CHECK(dr[0].text == "Dr. Smith left.");
    CHECK(dr[1].text == "He returned.");
    CHECK(segment_sentences("no terminal punctuation").size() == 1);
    CHECK(segment_sentences("").empty());
    const std::string text = "  First one!  Second?";
    for (const auto& s : segment_sentences(text)) CHECK(text.substr(s.span.begin, s.span.end - s.span.begin) == s.text);
}

TEST_CASE("build corpus and vocab round trip") {
    const auto c = testing::toy_corpus({{"d1", {"a b", "b c"}}}, {{"q1", "a"}}, {{"q1", "d1"}});
    CHECK(c.queries().size() == 1);
    CHECK(c.documents().size() == 1);
    CHECK(c.relevance().is_relevant(0, 0));
    for (TokenId w = 0; w < c.vocab().size(); ++w) CHECK(c.vocab().id(c.vocab().token(w)) == w);
    CHECK_THROWS_AS(c.vocab().id("zzz"), DataError);
    CHECK(c.stats().words == 4);
    CHECK(c.document_index("d1") == 0);
    CHECK(!c.find_query("q9"));
}

TEST_CASE("qrels with unknown ids are rejected with every offender") {
    try {
        testing::toy_corpus({{"d1", {"a"}}}, {{"q1", "a"}}, {{"q1", "dX"}, {"qY", "d1"}});
        FAIL("expected DataError");
    } catch (const DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("dX") != std::string::npos);
        CHECK(msg.find("qY") != std::string::npos);
    }
}

TEST_CASE("load corpus from files") {
    testing::TempDir dir("corpus");
    dir.write("docs.jsonl", R"({"id":"d1","text":"Cats sleep. Dogs bark loudly."})"
                            "\n"
                            R"({"id":"d2","sentences":["The cat.", "", "A dog barks."]})"
                            "\n");
    dir.write("queries.jsonl", R"({"id":"q1","title":"cats","description":"sleeping cats"})"
                               "\n");
    dir.write("qrels.tsv", "q1\td1\t1\nq1\td2\t0\n");
    const auto c = load_corpus(dir / "docs.jsonl", dir / "queries.jsonl", dir / "qrels.tsv", PreprocessOptions{});
    CHECK(c.documents()[0].sentences.size() == 2);
    REQUIRE(c.documents()[1].sentences.size() == 2);
    CHECK(c.documents()[1].sentences[1].position == 2);
    CHECK(c.relevance().relevant_docs(0).size() == 1);
    CHECK(format_qrels(c.relevance(), c) == "q1\td1\t1\n");

    save_corpus(c, dir / "a.json");
    save_corpus(load_corpus_archive(dir / "a.json"), dir / "b.json");
    CHECK(read_file(dir / "a.json") == read_file(dir / "b.json"));

    dir.write("bad.tsv", "q1\td1\n");
    try {
        load_corpus(dir / "docs.jsonl", dir / "queries.jsonl", dir / "bad.tsv", PreprocessOptions{});
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("bad.tsv:1") != std::string::npos);
    }
    dir.write("unknown.tsv", "q1\tdX\t1\n");
    CHECK_THROWS_AS(read_qrels(dir / "unknown.tsv", c), DataError);
}

TEST_CASE("field sets") {
    CHECK(FieldSet::parse("all") == FieldSet::all());
    CHECK(FieldSet::parse("none").empty());
    const auto f = FieldSet::parse("title,desc");
    CHECK(f.contains(QueryField::title));
    CHECK(f.contains(QueryField::description));
    CHECK(!f.contains(QueryField::summary));
    CHECK_THROWS(FieldSet::parse("bogus"));
}
