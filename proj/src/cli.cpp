#include "bayesum/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "bayesum/corpus_io.hpp"
#include "bayesum/em.hpp"
#include "bayesum/error.hpp"
#include "bayesum/eval.hpp"
#include "bayesum/io.hpp"
#include "bayesum/parallel.hpp"
#include "bayesum/params_io.hpp"
#include "bayesum/rankers.hpp"
#include "bayesum/sampler.hpp"
#include "bayesum/scoring.hpp"

namespace bayesum {

namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Shared {
    std::string corpus;
    std::string fields = "all";
    std::uint64_t seed = 0;
    std::size_t threads = 0;
    std::string out;
};

std::size_t thread_count(std::size_t requested) { return requested == 0 ? default_threads() : requested; }

FieldSet parse_fields(const std::string& spec) {
    try {
        return FieldSet::parse(spec);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

Corpus open_corpus(const std::string& path, const std::string& qrels) {
    if (path.empty()) throw UsageError("--corpus is required");
    auto corpus = load_corpus_archive(path);
    if (!qrels.empty()) {
        auto rel = read_qrels(qrels, corpus);
        corpus = corpus.with_relevance(std::move(rel));
    }
    return corpus;
}

std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string beta_label(double b) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", b);
    return buf;
}

// ---------------------------------------------------------------- ingest

struct IngestArgs {
    std::string docs, queries, qrels, stopwords;
    bool no_stem = false;
    std::size_t min_count = 1;
};

int cmd_ingest(const Shared& sh, const IngestArgs& a, std::ostream& out) {
    if (sh.out.empty()) throw UsageError("--out is required");
    PreprocessOptions opts;
    opts.stem = !a.no_stem;
    opts.min_count = a.min_count;
    std::optional<StopwordList> custom;
    if (!a.stopwords.empty()) {
        custom.emplace(StopwordList::from_file(a.stopwords));
        opts.stopwords = &*custom;
    }
    const auto corpus = load_corpus(a.docs, a.queries, a.qrels, opts);
    save_corpus(corpus, sh.out);
    const auto& s = corpus.stats();
    out << "queries\t" << s.queries << "\ndocuments\t" << s.documents << "\nsentences\t" << s.sentences
        << "\nwords\t" << s.words << "\nvocabulary\t" << s.vocabulary << "\nrelevant_pairs\t" << s.relevant_pairs
        << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- fit

struct FitArgs {
    std::string engine = "variational";
    std::size_t iterations = 30;
    std::size_t inner_iterations = 50;
    double tolerance = 1e-4;
    double inner_tolerance = 1e-6;
    std::string alpha = "fixed";
    double smoothing = 0.1;
    double query_weight = 1.0;
    std::string resume;
    std::string qrels;
};

FitConfig make_fit_config(const Shared& sh, const FitArgs& a) {
    FitConfig cfg;
    try {
        cfg.engine = parse_engine(a.engine);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    if (a.alpha != "fixed" && a.alpha != "learned") throw UsageError("--alpha must be fixed or learned");
    cfg.alpha_mode = a.alpha == "fixed" ? AlphaMode::fixed : AlphaMode::learned;
    cfg.max_iterations = a.iterations;
    cfg.inner_iterations = a.inner_iterations;
    cfg.tolerance = a.tolerance;
    cfg.inner_tolerance = a.inner_tolerance;
    cfg.smoothing = a.smoothing;
    cfg.query_word_weight = a.query_weight;
    cfg.fields = parse_fields(sh.fields);
    cfg.seed = sh.seed;
    cfg.threads = thread_count(sh.threads);
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

int cmd_fit(const Shared& sh, const FitArgs& a, std::ostream& out) {
    if (sh.out.empty()) throw UsageError("--out is required");
    const auto cfg = make_fit_config(sh, a);
    const auto corpus = open_corpus(sh.corpus, a.qrels);
    std::optional<ModelParams> initial;
    if (!a.resume.empty()) {
        auto loaded = load_params(a.resume);
        check_model_vocab(loaded, corpus);
        initial = std::move(loaded.params);
    }
    const auto result = em_fit(corpus, cfg, std::move(initial));
    save_params(sh.out, result.params, corpus.vocab().tokens(), make_meta(cfg), result.trace);
    out << "iterations\t" << result.trace.size() << "\nconverged\t" << (result.converged ? "yes" : "no") << "\n";
    if (!result.trace.empty()) out << "bound\t" << format_double(result.trace.back().bound) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- rank

struct RankArgs {
    std::vector<std::string> systems{"random", "position", "jaccard", "cosine", "kl", "kl-rel"};
    std::string model;
    std::string qrels;
    std::string condition;
    bool grid = false;
    std::size_t n = 25;
    double lambda = 0.4;
    double query_smoothing = 0.1;
    double sentence_smoothing = 0.1;
    std::string score = "kl";
};

const std::vector<std::string> kSystems{"random", "position", "jaccard", "cosine", "kl", "kl-rel", "bayesum"};

std::string grid_tag(const FeedbackConfig& f) {
    std::ostringstream s;
    s << "kl-rel_n" << f.n << "_l" << beta_label(f.lambda);
    return s.str();
}

int cmd_rank(const Shared& sh, const RankArgs& a, std::ostream& out) {
    if (sh.out.empty()) throw UsageError("--out is required");
    for (const auto& s : a.systems) {
        if (std::find(kSystems.begin(), kSystems.end(), s) == kSystems.end()) throw UsageError("unknown system '" + s + "'");
    }
    const bool want_bayesum = std::find(a.systems.begin(), a.systems.end(), "bayesum") != a.systems.end();
    if (want_bayesum && a.model.empty()) throw UsageError("system bayesum needs --model");
    if (a.score != "kl" && a.score != "posterior") throw UsageError("--score must be kl or posterior");
    const FeedbackConfig single{a.n, a.lambda};
    try {
        single.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const auto fields = parse_fields(sh.fields);
    const auto corpus = open_corpus(sh.corpus, a.qrels);

    std::optional<LoadedModel> model;
    if (want_bayesum) {
        model = load_params(a.model);
        check_model_vocab(*model, corpus);
        check_compatible(corpus, model->params);
    }

    // run tag -> per-query rankings
    std::vector<std::string> tags;
    for (const auto& s : a.systems) {
        if (s == "kl-rel" && a.grid) {
            for (const auto& f : feedback_grid()) tags.push_back(grid_tag(f));
        } else {
            tags.push_back(s);
        }
    }
    const std::size_t J = corpus.queries().size();
    std::vector<std::vector<Ranking>> results(tags.size(), std::vector<Ranking>(J));
    const auto background = baseline_background(corpus);
    const IdfTable idf(corpus);
    const KlSmoothing smoothing{a.query_smoothing, a.sentence_smoothing};
    ScoreConfig score_cfg;
    score_cfg.query_smoothing = a.query_smoothing;
    score_cfg.sentence_smoothing = a.sentence_smoothing;
    score_cfg.require_relevant = a.qrels.empty();
    score_cfg.mode = a.score == "kl" ? SentenceScore::kl : SentenceScore::posterior_proportion;

    parallel_for(J, thread_count(sh.threads), [&](std::size_t j) {
        const auto& q = corpus.queries()[j];
        const auto docs = corpus.relevance().relevant_docs(j);
        const auto sentences = gather_sentences(corpus, docs);
        const auto query = q.select(fields, true);
        for (std::size_t t = 0; t < tags.size(); ++t) {
            const auto& tag = tags[t];
            Ranking r{q.id, {}};
            if (tag == "random") {
                r = rank_random(q.id, sentences, sh.seed + j);
            } else if (tag == "position") {
                r = rank_position(q.id, sentences);
            } else if (tag == "jaccard") {
                r = rank_jaccard(q.id, query, sentences);
            } else if (tag == "cosine") {
                r = rank_cosine(q.id, query, sentences, idf);
            } else if (tag == "kl") {
                r = rank_kl(q.id, query, sentences, background, smoothing);
            } else if (tag == "bayesum") {
                if (!docs.empty()) r = score_sentences(corpus, q.id, docs, model->params, score_cfg);
            } else if (!sentences.empty()) {
                FeedbackConfig f = single;
                if (tag != "kl-rel") {
                    const auto& grid = feedback_grid();
                    f = grid[static_cast<std::size_t>(
                        std::find_if(grid.begin(), grid.end(), [&](const FeedbackConfig& g) { return grid_tag(g) == tag; }) -
                        grid.begin())];
                }
                r = rank_kl_rel(q.id, query, sentences, sentences, f, background, smoothing);
            }
            results[t][j] = std::move(r);
        }
    });

    const std::string condition = !a.condition.empty() ? a.condition : fields == FieldSet::all() ? "all" : fields.label();
    const fs::path dir = fs::path(sh.out) / condition;
    fs::create_directories(dir);
    for (std::size_t t = 0; t < tags.size(); ++t) {
        std::vector<Ranking> nonempty;
        for (auto& r : results[t]) {
            if (r.entries.empty()) spdlog::warn("query '{}' has no sentences to rank", r.query_id);
            else nonempty.push_back(std::move(r));
        }
        write_file_atomic(dir / (tags[t] + ".run"), format_run(nonempty, tags[t]));
        out << (dir / (tags[t] + ".run")).string() << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
    std::string gold;
    std::string runs;
    std::vector<std::string> run_files;
    std::string oracle;
    std::string unit = "pair";
};

double metric_of(const RunScores& s, const std::string& metric) {
    if (metric == "map") return s.map;
    if (metric == "mrr") return s.mrr;
    return s.p2;
}

int cmd_eval(const Shared& sh, const EvalArgs& a, std::ostream& out) {
    if (sh.out.empty()) throw UsageError("--out is required");
    if (a.gold.empty()) throw UsageError("--gold is required");
    std::string oracle = a.oracle;
    std::transform(oracle.begin(), oracle.end(), oracle.begin(), [](unsigned char c) { return std::tolower(c); });
    if (oracle == "p@2") oracle = "p2";
    if (!oracle.empty() && oracle != "map" && oracle != "mrr" && oracle != "p2")
        throw UsageError("--oracle must be map, mrr or p2");
    if (a.unit != "pair" && a.unit != "query") throw UsageError("--unit must be pair or query");
    const EvalUnit unit = a.unit == "pair" ? EvalUnit::pair : EvalUnit::query;

    std::optional<Corpus> corpus;
    if (!sh.corpus.empty()) corpus.emplace(load_corpus_archive(sh.corpus));
    const auto gold = parse_gold(read_file(a.gold), corpus ? &*corpus : nullptr, a.gold);

    std::vector<fs::path> files;
    for (const auto& f : a.run_files) files.emplace_back(f);
    if (!a.runs.empty()) {
        if (!fs::is_directory(a.runs)) throw DataError("'" + a.runs + "' is not a directory");
        for (const auto& e : fs::recursive_directory_iterator(a.runs)) {
            if (e.is_regular_file() && e.path().extension() == ".run") files.push_back(e.path());
        }
    }
    if (files.empty()) throw UsageError("no run files given (--runs or --run)");
    std::sort(files.begin(), files.end());

    struct Scored {
        std::string condition, tag, family;
        RunScores scores;
    };
    std::vector<Scored> all;
    for (const auto& f : files) {
        const auto run = parse_run(read_file(f));
        const std::string tag = f.stem().string();
        const std::string condition = f.parent_path().filename().string();
        all.push_back({condition, tag, tag.substr(0, tag.find('_')), score_run(run.rankings, gold, unit)});
    }

    // rows: (condition, system) -> chosen entry
    struct Row {
        std::string condition, system;
        const Scored* chosen;
        bool oracle;
    };
    std::vector<Row> rows;
    if (oracle.empty()) {
        for (const auto& s : all) rows.push_back({s.condition, s.tag, &s, false});
    } else {
        std::map<std::pair<std::string, std::string>, std::vector<const Scored*>> families;
        for (const auto& s : all) families[{s.condition, s.family}].push_back(&s);
        for (const auto& [key, members] : families) {
            const Scored* best = members.front();
            for (const auto* m : members) {
                if (metric_of(m->scores, oracle) > metric_of(best->scores, oracle)) best = m;
            }
            rows.push_back({key.first, key.second, best, members.size() > 1});
        }
    }
    std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
        return std::tie(x.system, x.condition) < std::tie(y.system, y.condition);
    });

    std::ostringstream report;
    std::ostringstream detail;
    report << "system,condition,oracle,selected,MAP,MRR,P@2,items\n";
    detail << "system,condition,query_id,doc_id,AP,RR,P@2\n";
    for (const auto& r : rows) {
        const auto& s = r.chosen->scores;
        report << r.system << ',' << r.condition << ',' << (r.oracle ? oracle : "") << ',' << r.chosen->tag << ','
               << fmt6(s.map) << ',' << fmt6(s.mrr) << ',' << fmt6(s.p2) << ',' << s.items.size() << '\n';
        for (const auto& i : s.items) {
            detail << r.system << ',' << r.condition << ',' << i.query_id << ',' << i.doc_id << ',' << fmt6(i.ap) << ','
                   << fmt6(i.rr) << ',' << fmt6(i.p2) << '\n';
        }
    }
    fs::create_directories(sh.out);
    write_file_atomic(fs::path(sh.out) / "report.csv", report.str());
    write_file_atomic(fs::path(sh.out) / "per_query.csv", detail.str());
    out << report.str();
    return kExitOk;
}

// ---------------------------------------------------------------- noise

struct NoiseArgs {
    std::string ir_run;
    std::string qrels;
    std::vector<double> betas = default_betas();
    std::size_t depth = 0;
};

int cmd_noise(const Shared& sh, const NoiseArgs& a, std::ostream& out) {
    if (sh.out.empty()) throw UsageError("--out is required");
    if (a.ir_run.empty()) throw UsageError("--ir-run is required");
    for (double b : a.betas) {
        if (!(b >= 0.0 && b <= 1.0)) throw UsageError("betas must lie in [0,1]");
    }
    const auto corpus = open_corpus(sh.corpus, a.qrels);
    const auto runs = parse_doc_run(read_file(a.ir_run));
    std::map<std::string, const DocRanking*> by_query;
    for (const auto& r : runs) {
        if (!corpus.find_query(r.query_id)) throw DataError(a.ir_run + ": unknown query '" + r.query_id + "'");
        by_query[r.query_id] = &r;
    }

    std::ostringstream rprec;
    rprec << "query_id,beta,r_precision\n";
    std::vector<std::pair<std::string, std::string>> outputs;
    for (double beta : a.betas) {
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t j = 0; j < corpus.queries().size(); ++j) {
            const auto& q = corpus.queries()[j];
            std::set<std::string> truth;
            for (auto k : corpus.relevance().relevant_docs(j)) truth.insert(corpus.documents()[k].id);
            const DocRanking empty{q.id, {}};
            auto it = by_query.find(q.id);
            if (it == by_query.end() && beta == a.betas.front() && !truth.empty())
                spdlog::warn("query '{}' missing from IR run", q.id);
            const auto& ir = it == by_query.end() ? empty : *it->second;
            const auto chosen = interpolate_judgments(ir, truth, beta, a.depth);
            for (const auto& d : chosen) {
                const auto k = corpus.find_document(d);
                if (!k) throw DataError(a.ir_run + ": unknown document '" + d + "'");
                pairs.emplace_back(*k, j);
            }
            if (const auto rp = r_precision(chosen, truth)) rprec << q.id << ',' << beta_label(beta) << ',' << fmt6(*rp) << '\n';
        }
        const RelevanceMatrix rel(corpus.documents().size(), corpus.queries().size(), std::move(pairs));
        outputs.emplace_back("qrels_beta_" + beta_label(beta) + ".tsv", format_qrels(rel, corpus));
    }
    fs::create_directories(sh.out);
    for (const auto& [name, text] : outputs) {
        write_file_atomic(fs::path(sh.out) / name, text);
        out << (fs::path(sh.out) / name).string() << "\n";
    }
    write_file_atomic(fs::path(sh.out) / "rprec.csv", rprec.str());
    return kExitOk;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
    SynthShape shape;
    TruthOptions truth;
    double gold_threshold = 0.5;
};

int cmd_synth(const Shared& sh, const SynthArgs& a, std::ostream& out) {
    if (sh.out.empty()) throw UsageError("--out is required");
    if (a.shape.num_documents == 0 || a.shape.num_queries == 0 || a.shape.sentences_per_doc == 0 ||
        a.shape.words_per_sentence == 0 || a.truth.vocab_size == 0)
        throw UsageError("synthetic dimensions must be positive");
    const auto truth = make_true_params(a.shape, a.truth, sh.seed);
    const auto rel = synthetic_relevance(a.shape.num_documents, a.shape.num_queries);
    const auto sample = sample_corpus(truth, a.shape, rel, sh.seed + 1000);
    const auto& c = sample.corpus;

    std::string docs;
    for (const auto& d : c.documents()) {
        nlohmann::json j;
        j["id"] = d.id;
        auto& sents = j["sentences"] = nlohmann::json::array();
        for (const auto& s : d.sentences) {
            std::string text;
            for (auto w : s.tokens) text += (text.empty() ? "" : " ") + c.vocab().token(w);
            sents.push_back(text);
        }
        docs += j.dump() + "\n";
    }
    std::string queries;
    for (const auto& q : c.queries()) {
        nlohmann::json j;
        j["id"] = q.id;
        for (auto f : kAllQueryFields) j[std::string(field_name(f))] = q.text[static_cast<std::size_t>(f)];
        queries += j.dump() + "\n";
    }
    const fs::path dir(sh.out);
    fs::create_directories(dir);
    write_file_atomic(dir / "docs.jsonl", docs);
    write_file_atomic(dir / "queries.jsonl", queries);
    write_file_atomic(dir / "qrels.tsv", format_qrels(c.relevance(), c));
    write_file_atomic(dir / "gold.tsv", format_gold(sample.planted_gold(a.gold_threshold)));
    ModelMeta meta;
    meta.fields = "title";
    meta.config = "synthetic truth";
    save_params(dir / "truth", truth, c.vocab().tokens(), meta);
    out << "documents\t" << c.documents().size() << "\nqueries\t" << c.queries().size() << "\nsentences\t"
        << c.stats().sentences << "\nwords\t" << c.stats().words << "\n";
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    auto logger = std::make_shared<spdlog::logger>("bayesum", sink);
    logger->set_pattern("%l: %v");
    auto previous = spdlog::default_logger();
    spdlog::set_default_logger(logger);
    struct Restore {
        std::shared_ptr<spdlog::logger> p;
        ~Restore() { spdlog::set_default_logger(p); }
    } restore{previous};

    CLI::App app{"BayeSum query-focused sentence ranking"};
    app.set_config("--config", "", "TOML config file; command-line flags win");
    app.require_subcommand(1);
    std::string log_level = "info";
    app.add_option("--log-level", log_level, "trace, debug, info, warn, error, off");

    Shared sh;
    auto shared_flags = [&sh](CLI::App* c, bool corpus) {
        if (corpus) c->add_option("--corpus", sh.corpus, "corpus archive written by ingest");
        c->add_option("--fields", sh.fields, "title,desc,summary,concepts | all | none");
        c->add_option("--seed", sh.seed, "random seed");
        c->add_option("--threads", sh.threads, "worker threads (0 = all cores)");
        c->add_option("--out", sh.out, "output path");
    };

    IngestArgs ia;
    auto* ingest = app.add_subcommand("ingest", "load, preprocess and archive a corpus");
    shared_flags(ingest, false);
    ingest->add_option("--docs", ia.docs, "documents JSONL")->required();
    ingest->add_option("--queries", ia.queries, "queries JSONL")->required();
    ingest->add_option("--qrels", ia.qrels, "qrels TSV")->required();
    ingest->add_option("--stopwords", ia.stopwords, "stopword list file (default: built-in English)");
    ingest->add_flag("--no-stem", ia.no_stem, "disable Porter stemming");
    ingest->add_option("--min-count", ia.min_count, "drop tokens seen fewer times");

    FitArgs fa;
    auto* fit = app.add_subcommand("fit", "fit BayeSum parameters by EM");
    shared_flags(fit, true);
    fit->add_option("--engine", fa.engine, "variational | ep");
    fit->add_option("--iterations", fa.iterations, "outer EM iterations");
    fit->add_option("--inner-iterations", fa.inner_iterations, "per-sentence iterations");
    fit->add_option("--tolerance", fa.tolerance, "relative bound change that stops EM");
    fit->add_option("--inner-tolerance", fa.inner_tolerance, "max |delta gamma| per sentence");
    fit->add_option("--alpha", fa.alpha, "fixed | learned");
    fit->add_option("--smoothing", fa.smoothing, "weight of p^G in component emissions");
    fit->add_option("--query-weight", fa.query_weight, "weight of observed query words");
    fit->add_option("--resume", fa.resume, "model directory to start from");
    fit->add_option("--qrels", fa.qrels, "relevance judgments overriding the archive's");

    RankArgs ra;
    auto* rank = app.add_subcommand("rank", "rank sentences of relevant documents per query");
    shared_flags(rank, true);
    rank->add_option("--systems", ra.systems, "random position jaccard cosine kl kl-rel bayesum")->delimiter(',');
    rank->add_option("--model", ra.model, "fitted model directory (bayesum)");
    rank->add_option("--qrels", ra.qrels, "judgments to rank over (e.g. noisy qrels)");
    rank->add_option("--condition", ra.condition, "output subdirectory (default: field label)");
    rank->add_flag("--grid", ra.grid, "sweep the kl-rel n x lambda grid");
    rank->add_option("--n", ra.n, "kl-rel feedback sentences");
    rank->add_option("--lambda", ra.lambda, "kl-rel interpolation weight");
    rank->add_option("--query-smoothing", ra.query_smoothing, "background weight in query models");
    rank->add_option("--sentence-smoothing", ra.sentence_smoothing, "background weight in sentence models");
    rank->add_option("--score", ra.score, "bayesum sentence score: kl | posterior (experimental)");

    EvalArgs ea;
    auto* eval = app.add_subcommand("eval", "score run files against gold extractions");
    shared_flags(eval, true);
    eval->add_option("--gold", ea.gold, "gold TSV query_id, doc_id, sentence_index");
    eval->add_option("--runs", ea.runs, "directory of <condition>/<tag>.run files");
    eval->add_option("--run", ea.run_files, "individual run file (repeatable)");
    eval->add_option("--oracle", ea.oracle, "collapse grid families by map | mrr | p2");
    eval->add_option("--unit", ea.unit, "pair | query");

    NoiseArgs na;
    auto* noise = app.add_subcommand("noise", "interpolate an IR run with true judgments");
    shared_flags(noise, true);
    noise->add_option("--ir-run", na.ir_run, "document run: query_id, doc_id, rank, score[, tag]");
    noise->add_option("--qrels", na.qrels, "true judgments overriding the archive's");
    noise->add_option("--betas", na.betas, "interpolation weights")->delimiter(',');
    noise->add_option("--depth", na.depth, "IR cutoff depth (0 = all)");

    SynthArgs sa;
    auto* synth = app.add_subcommand("synth", "sample a synthetic corpus from random true parameters");
    shared_flags(synth, false);
    synth->add_option("--queries", sa.shape.num_queries, "J");
    synth->add_option("--docs", sa.shape.num_documents, "K");
    synth->add_option("--sentences", sa.shape.sentences_per_doc, "sentences per document");
    synth->add_option("--words", sa.shape.words_per_sentence, "words per sentence");
    synth->add_option("--query-length", sa.shape.query_length, "title words per query");
    synth->add_option("--vocab", sa.truth.vocab_size, "vocabulary size");
    synth->add_option("--alpha-general", sa.truth.alpha_general, "true alpha of p^G");
    synth->add_option("--alpha-doc", sa.truth.alpha_document, "true alpha of document components");
    synth->add_option("--alpha-query", sa.truth.alpha_query, "true alpha of query components");
    synth->add_option("--topic-concentration", sa.truth.topic_concentration, "Dirichlet concentration of topics");
    synth->add_option("--general-concentration", sa.truth.general_concentration, "Dirichlet concentration of p^G");
    synth->add_option("--gold-threshold", sa.gold_threshold, "true query share that makes a sentence gold");

    std::vector<const char*> argv{"bayesum"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        std::ostringstream msg;
        app.exit(e, msg, msg);
        err << msg.str();
        if (msg.str().empty()) err << e.what() << "\n";
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        logger->set_level(spdlog::level::from_str(log_level));
        if (ingest->parsed()) return cmd_ingest(sh, ia, out);
        if (fit->parsed()) return cmd_fit(sh, fa, out);
        if (rank->parsed()) return cmd_rank(sh, ra, out);
        if (eval->parsed()) return cmd_eval(sh, ea, out);
        if (noise->parsed()) return cmd_noise(sh, na, out);
        if (synth->parsed()) return cmd_synth(sh, sa, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace bayesum
