#include "bayesum/corpus_io.hpp"

#include <fstream>

#include <spdlog/spdlog.h>

#include "bayesum/error.hpp"
#include "bayesum/io.hpp"
#include "json.hpp"

namespace bayesum {

using nlohmann::json;

namespace {

template <typename Fn>
void for_each_line(const std::filesystem::path& path, Fn&& fn) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        fn(line, path.string() + ":" + std::to_string(lineno));
    }
}

std::string optional_string(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return {};
    if (!it->is_string()) throw DataError(where + ": field '" + key + "' must be a string");
    return it->get<std::string>();
}

std::vector<RawDocument> read_documents(const std::filesystem::path& path) {
    std::vector<RawDocument> docs;
    for_each_line(path, [&](const std::string& line, const std::string& where) {
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw DataError(where + ": malformed JSON (" + e.what() + ")");
        }
        if (!obj.is_object() || !obj.contains("id") || !obj["id"].is_string()) {
            throw DataError(where + ": document needs a string \"id\"");
        }
        RawDocument doc;
        doc.id = obj["id"].get<std::string>();
        if (auto it = obj.find("sentences"); it != obj.end()) {
            if (!it->is_array()) throw DataError(where + ": \"sentences\" must be an array");
            for (const auto& s : *it) {
                if (!s.is_string()) throw DataError(where + ": sentences must be strings");
                doc.sentences.push_back(s.get<std::string>());
            }
        } else if (auto t = obj.find("text"); t != obj.end() && t->is_string()) {
            doc.text = t->get<std::string>();
        } else {
            throw DataError(where + ": document needs \"sentences\" or \"text\"");
        }
        docs.push_back(std::move(doc));
    });
    return docs;
}

std::vector<RawQuery> read_queries(const std::filesystem::path& path) {
    std::vector<RawQuery> queries;
    for_each_line(path, [&](const std::string& line, const std::string& where) {
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw DataError(where + ": malformed JSON (" + e.what() + ")");
        }
        if (!obj.is_object() || !obj.contains("id") || !obj["id"].is_string()) {
            throw DataError(where + ": query needs a string \"id\"");
        }
        RawQuery q;
        q.id = obj["id"].get<std::string>();
        for (auto f : kAllQueryFields) {
            q.text[static_cast<int>(f)] = optional_string(obj, std::string(field_name(f)).c_str(), where);
        }
        queries.push_back(std::move(q));
    });
    return queries;
}

std::vector<RawJudgment> read_judgments(const std::filesystem::path& path) {
    std::vector<RawJudgment> out;
    for_each_line(path, [&](const std::string& line, const std::string& where) {
        auto cols = split_tabs(line);
        if (cols.size() != 3 || (cols[2] != "0" && cols[2] != "1")) {
            throw DataError(where + ": expected query_id<TAB>doc_id<TAB>0|1");
        }
        out.push_back({std::string(cols[0]), std::string(cols[1]), cols[2] == "1", where});
    });
    return out;
}

}  // namespace

Corpus load_corpus(const std::filesystem::path& doc_path, const std::filesystem::path& query_path,
                   const std::filesystem::path& qrels_path, const PreprocessOptions& opts) {
    auto docs = read_documents(doc_path);
    auto queries = read_queries(query_path);
    auto judgments = read_judgments(qrels_path);
    Corpus corpus = build_corpus(docs, queries, judgments, opts);
    for (const auto& w : corpus.warnings()) spdlog::warn("{}", w);
    const auto& st = corpus.stats();
    spdlog::info("corpus: J={} queries, K={} documents, {} sentences, {} words, |V|={}, {} relevant pairs",
                 st.queries, st.documents, st.sentences, st.words, st.vocabulary, st.relevant_pairs);
    return corpus;
}

RelevanceMatrix read_qrels(const std::filesystem::path& path, const Corpus& corpus) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<std::string> offenders;
    for (const auto& j : read_judgments(path)) {
        auto d = corpus.find_document(j.doc_id);
        auto q = corpus.find_query(j.query_id);
        if (!d || !q) {
            offenders.push_back(j.origin + ": " + j.query_id + " " + j.doc_id);
            continue;
        }
        if (j.relevant) pairs.emplace_back(*d, *q);
    }
    if (!offenders.empty()) {
        std::string msg = "qrels reference unknown ids:";
        for (const auto& o : offenders) msg += "\n  " + o;
        throw DataError(msg);
    }
    return RelevanceMatrix(corpus.documents().size(), corpus.queries().size(), std::move(pairs));
}

std::string format_qrels(const RelevanceMatrix& relevance, const Corpus& corpus) {
    std::string out;
    for (std::size_t j = 0; j < relevance.num_queries(); ++j) {
        for (auto k : relevance.relevant_docs(j)) {
            out += corpus.queries()[j].id;
            out += '\t';
            out += corpus.documents()[k].id;
            out += "\t1\n";
        }
    }
    return out;
}

std::string corpus_to_json(const Corpus& corpus) {
    json j;
    j["format"] = "bayesum-corpus";
    j["version"] = 1;
    const auto& d = corpus.descriptor();
    j["descriptor"] = {{"stem", d.stem},
                       {"remove_stopwords", d.remove_stopwords},
                       {"min_count", d.min_count},
                       {"stopword_list", d.stopword_list},
                       {"stopword_hash", d.stopword_hash}};
    j["vocab"] = corpus.vocab().tokens();
    json docs = json::array();
    for (const auto& doc : corpus.documents()) {
        json sents = json::array();
        for (const auto& s : doc.sentences) {
            sents.push_back({{"tokens", s.tokens},
                             {"content", s.content},
                             {"span", {s.span.begin, s.span.end}},
                             {"position", s.position}});
        }
        docs.push_back({{"id", doc.id}, {"sentences", std::move(sents)}});
    }
    j["documents"] = std::move(docs);
    json queries = json::array();
    for (const auto& q : corpus.queries()) {
        json text = json::object();
        json tokens = json::array();
        json content = json::array();
        for (auto f : kAllQueryFields) {
            const int i = static_cast<int>(f);
            text[std::string(field_name(f))] = q.text[i];
            tokens.push_back(q.tokens[i]);
            content.push_back(q.content[i]);
        }
        queries.push_back({{"id", q.id}, {"text", text}, {"tokens", tokens}, {"content", content}});
    }
    j["queries"] = std::move(queries);
    json rel = json::array();
    for (std::size_t q = 0; q < corpus.relevance().num_queries(); ++q) {
        auto docs_for = corpus.relevance().relevant_docs(q);
        rel.push_back(std::vector<std::size_t>(docs_for.begin(), docs_for.end()));
    }
    j["relevance"] = std::move(rel);
    j["warnings"] = corpus.warnings();
    const auto& st = corpus.stats();
    j["stats"] = {{"queries", st.queries},     {"documents", st.documents}, {"sentences", st.sentences},
                  {"words", st.words},         {"vocabulary", st.vocabulary},
                  {"relevant_pairs", st.relevant_pairs}};
    return j.dump() + "\n";
}

Corpus corpus_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
        if (j.value("format", "") != "bayesum-corpus") throw DataError("not a corpus archive");
        PreprocessDescriptor d;
        const auto& jd = j.at("descriptor");
        d.stem = jd.at("stem").get<bool>();
        d.remove_stopwords = jd.at("remove_stopwords").get<bool>();
        d.min_count = jd.at("min_count").get<std::size_t>();
        d.stopword_list = jd.at("stopword_list").get<std::string>();
        d.stopword_hash = jd.at("stopword_hash").get<std::uint64_t>();

        Vocab vocab;
        for (const auto& t : j.at("vocab")) {
            const auto tok = t.get<std::string>();
            if (vocab.add(tok) + 1 != vocab.size()) throw DataError("duplicate vocabulary entry " + tok);
        }
        std::vector<Document> docs;
        for (const auto& jdoc : j.at("documents")) {
            Document doc;
            doc.id = jdoc.at("id").get<std::string>();
            for (const auto& js : jdoc.at("sentences")) {
                Sentence s;
                s.tokens = js.at("tokens").get<std::vector<TokenId>>();
                s.content = js.at("content").get<std::vector<TokenId>>();
                const auto span = js.at("span").get<std::vector<std::size_t>>();
                s.span = Span{span.at(0), span.at(1)};
                s.position = js.at("position").get<std::size_t>();
                doc.sentences.push_back(std::move(s));
            }
            docs.push_back(std::move(doc));
        }
        std::vector<Query> queries;
        for (const auto& jq : j.at("queries")) {
            Query q;
            q.id = jq.at("id").get<std::string>();
            for (auto f : kAllQueryFields) {
                const int i = static_cast<int>(f);
                q.text[i] = jq.at("text").at(std::string(field_name(f))).get<std::string>();
                q.tokens[i] = jq.at("tokens").at(i).get<std::vector<TokenId>>();
                q.content[i] = jq.at("content").at(i).get<std::vector<TokenId>>();
            }
            queries.push_back(std::move(q));
        }
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        const auto& rel = j.at("relevance");
        for (std::size_t q = 0; q < rel.size(); ++q) {
            for (const auto& k : rel[q]) pairs.emplace_back(k.get<std::size_t>(), q);
        }
        RelevanceMatrix relevance(docs.size(), queries.size(), std::move(pairs));
        return Corpus(std::move(vocab), std::move(docs), std::move(queries), std::move(relevance),
                      std::move(d), j.value("warnings", std::vector<std::string>{}));
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed corpus archive: ") + e.what());
    }
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
    write_file_atomic(path, corpus_to_json(corpus));
}

Corpus load_corpus_archive(const std::filesystem::path& path) {
    return corpus_from_json(read_file(path));
}

}  // namespace bayesum
