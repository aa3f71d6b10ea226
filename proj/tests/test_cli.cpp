#include <doctest.h>

#include <stdexcept>

#include <map>
#include <sstream>

#include "bayesum/cli.hpp"
#include "support.hpp"

using namespace bayesum;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string p(const testing::TempDir& d, const std::string& name) { return (d / name).string(); }

void pipeline(const testing::TempDir& d) {
    REQUIRE(run({"synth", "--out", p(d, "syn"), "--queries", "2", "--docs", "6", "--sentences", "10", "--words", "8",
                 "--vocab", "40", "--seed", "4"})
                .code == kExitOk);
    REQUIRE(run({"ingest", "--docs", p(d, "syn/docs.jsonl"), "--queries", p(d, "syn/queries.jsonl"), "--qrels",
                 p(d, "syn/qrels.tsv"), "--no-stem", "--out", p(d, "corpus.json")})
                .code == kExitOk);
    REQUIRE(run({"fit", "--corpus", p(d, "corpus.json"), "--iterations", "4", "--out", p(d, "model")}).code == kExitOk);
    REQUIRE(run({"rank", "--corpus", p(d, "corpus.json"), "--model", p(d, "model"), "--systems",
                 "random,position,kl,kl-rel,bayesum", "--grid", "--out", p(d, "runs")})
                .code == kExitOk);
    REQUIRE(run({"eval", "--gold", p(d, "syn/gold.tsv"), "--corpus", p(d, "corpus.json"), "--runs", p(d, "runs"),
                 "--out", p(d, "eval")})
                .code == kExitOk);
}

}  // namespace

TEST_CASE("usage errors exit 1") {
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"frobnicate"}).code == kExitUsage);
    CHECK(run({"fit", "--iterations", "many"}).code == kExitUsage);
    CHECK(run({"--help"}).code == kExitOk);
    testing::TempDir d("cli_usage");
    const auto r = run({"rank", "--corpus", p(d, "none.json"), "--systems", "bayesum", "--out", p(d, "runs")});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("--model") != std::string::npos);
}

TEST_CASE("data errors exit 2") {
    testing::TempDir d("cli_data");
    d.write("docs.jsonl", "{\"id\":\"d1\",\"sentences\":[\"a b\"]}\n");
    d.write("queries.jsonl", "{\"id\":\"q1\",\"title\":\"a\"}\n");
    d.write("qrels.tsv", "q1\tdX\t1\n");
    const auto r = run({"ingest", "--docs", p(d, "docs.jsonl"), "--queries", p(d, "queries.jsonl"), "--qrels",
                        p(d, "qrels.tsv"), "--out", p(d, "c.json")});
    CHECK(r.code == kExitData);
    CHECK(r.err.find("dX") != std::string::npos);
    CHECK(run({"fit", "--corpus", p(d, "missing.json"), "--out", p(d, "m")}).code == kExitData);
}

TEST_CASE("ingest fixture and determinism") {
    testing::TempDir d("cli_ingest");
    d.write("docs.jsonl", "{\"id\":\"d1\",\"sentences\":[\"Cats sleep.\"]}\n{\"id\":\"d2\",\"text\":\"Dogs bark. Cats run.\"}\n"
                          "{\"id\":\"d3\",\"sentences\":[\"Birds sing.\"]}\n{\"id\":\"d4\",\"sentences\":[\"Fish swim.\"]}\n");
    d.write("queries.jsonl", "{\"id\":\"q1\",\"title\":\"cats\"}\n{\"id\":\"q2\",\"title\":\"birds\"}\n");
    d.write("qrels.tsv", "q1\td1\t1\nq1\td2\t1\nq2\td3\t1\nq2\td4\t0\n");
    const std::vector<std::string> base{"ingest", "--docs", p(d, "docs.jsonl"), "--queries", p(d, "queries.jsonl"),
                                        "--qrels", p(d, "qrels.tsv"), "--out"};
    auto a = base;
    a.push_back(p(d, "a.json"));
    auto b = base;
    b.push_back(p(d, "b.json"));
    const auto r = run(a);
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("queries\t2") != std::string::npos);
    CHECK(r.out.find("documents\t4") != std::string::npos);
    REQUIRE(run(b).code == kExitOk);
    CHECK(read_file(d / "a.json") == read_file(d / "b.json"));
}

TEST_CASE("pipeline is deterministic") {
    testing::TempDir a("cli_pipe_a");
    testing::TempDir b("cli_pipe_b");
    pipeline(a);
    pipeline(b);
    const auto report = read_file(a / "eval/report.csv");
    CHECK(report == read_file(b / "eval/report.csv"));
    CHECK(read_file(a / "eval/per_query.csv") == read_file(b / "eval/per_query.csv"));
    // header + random, position, kl, bayesum and 20 grid points
    CHECK(std::count(report.begin(), report.end(), '\n') == 1 + 4 + 20);
    CHECK(std::filesystem::exists(a / "runs/all/kl-rel_n100_l0.8.run"));
    CHECK(std::filesystem::exists(a / "model/trace.csv"));

    // resume from the fitted model
    CHECK(run({"fit", "--corpus", p(a, "corpus.json"), "--iterations", "1", "--resume", p(a, "model"), "--out",
               p(a, "model2")})
              .code == kExitOk);
}

TEST_CASE("perfect run scores one") {
    testing::TempDir d("cli_perfect");
    d.write("gold.tsv", "q1\td1\t0\nq1\td1\t2\n");
    std::filesystem::create_directories(d / "runs/all");
    d.write("runs/all/best.run", "q1\td1:0\t1\t3\tbest\nq1\td1:2\t2\t2\tbest\nq1\td1:1\t3\t1\tbest\n");
    REQUIRE(run({"eval", "--gold", p(d, "gold.tsv"), "--runs", p(d, "runs"), "--out", p(d, "ev")}).code == kExitOk);
    CHECK(read_file(d / "ev/report.csv") ==
          "system,condition,oracle,selected,MAP,MRR,P@2,items\nbest,all,,best,1.000000,1.000000,1.000000,1\n");
}

TEST_CASE("oracle selection follows the requested metric") {
    testing::TempDir d("cli_oracle");
    d.write("gold.tsv", "q1\td1\t0\nq1\td1\t1\n");
    std::filesystem::create_directories(d / "runs/all");
    // point a: gold at ranks 1 and 4 (MRR 1, P@2 0.5); point b: ranks 2 and 3 (MRR 0.5, P@2 2/3)
    d.write("runs/all/fam_a.run", "q1\td1:0\t1\t4\tfam_a\nq1\td1:2\t2\t3\tfam_a\nq1\td1:3\t3\t2\tfam_a\nq1\td1:1\t4\t1\tfam_a\n");
    d.write("runs/all/fam_b.run", "q1\td1:2\t1\t4\tfam_b\nq1\td1:0\t2\t3\tfam_b\nq1\td1:1\t3\t2\tfam_b\nq1\td1:3\t4\t1\tfam_b\n");
    auto selected = [&](const std::string& metric) {
        const auto r = run({"eval", "--gold", p(d, "gold.tsv"), "--runs", p(d, "runs"), "--oracle", metric, "--out",
                            p(d, "ev_" + metric)});
        REQUIRE(r.code == kExitOk);
        const auto report = read_file(d / ("ev_" + metric) / "report.csv");
        const auto line = report.substr(report.find('\n') + 1);
        CHECK(line.rfind("fam,all," + metric + ",", 0) == 0);
        return line.substr(line.find(metric + ",") + metric.size() + 1, 5);
    };
    CHECK(selected("mrr") == "fam_a");
    CHECK(selected("p2") == "fam_b");
    CHECK(run({"eval", "--gold", p(d, "gold.tsv"), "--runs", p(d, "runs"), "--oracle", "ndcg", "--out", p(d, "x")}).code ==
          kExitUsage);
}

TEST_CASE("noise command") {
    testing::TempDir d("cli_noise");
    REQUIRE(run({"synth", "--out", p(d, "syn"), "--queries", "2", "--docs", "8", "--sentences", "2", "--vocab", "20",
                 "--seed", "1"})
                .code == kExitOk);
    REQUIRE(run({"ingest", "--docs", p(d, "syn/docs.jsonl"), "--queries", p(d, "syn/queries.jsonl"), "--qrels",
                 p(d, "syn/qrels.tsv"), "--no-stem", "--out", p(d, "c.json")})
                .code == kExitOk);
    std::string ir;
    for (int q = 0; q < 2; ++q) {
        for (int k = 0; k < 8; ++k) ir += "q0" + std::to_string(q) + "\td00" + std::to_string(k) + "\t" +
                                          std::to_string(k + 1) + "\t" + std::to_string(8 - k) + "\n";
    }
    d.write("ir.run", ir);
    REQUIRE(run({"noise", "--corpus", p(d, "c.json"), "--ir-run", p(d, "ir.run"), "--out", p(d, "noise")}).code == kExitOk);
    std::size_t files = 0;
    for (const auto& e : std::filesystem::directory_iterator(d / "noise")) files += e.path().extension() == ".tsv";
    CHECK(files == 6);
    CHECK(read_file(d / "noise/qrels_beta_1.tsv") == read_file(d / "syn/qrels.tsv"));
    CHECK(read_file(d / "noise/qrels_beta_0.tsv") == "q00\td000\t1\nq00\td001\t1\nq00\td002\t1\nq00\td003\t1\n"
                                                     "q01\td000\t1\nq01\td001\t1\nq01\td002\t1\nq01\td003\t1\n");
    std::istringstream rows(read_file(d / "noise/rprec.csv"));
    std::string line;
    std::getline(rows, line);
    std::map<std::string, double> last;
    while (std::getline(rows, line)) {
        const auto q = line.substr(0, line.find(','));
        const double v = std::stod(line.substr(line.rfind(',') + 1));
        if (last.count(q)) CHECK(v >= last[q]);
        last[q] = v;
    }
    CHECK(last.size() == 2);
}
