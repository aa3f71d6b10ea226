#include "bayesum/params_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>

#include "bayesum/error.hpp"
#include "bayesum/io.hpp"
#include "bayesum/stopwords.hpp"

namespace bayesum {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_plain(const fs::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw DataError("cannot write '" + path.string() + "'");
}

std::vector<std::string> parse_vocab(std::string_view text) {
    std::vector<std::string> vocab;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const auto line = text.substr(pos, end - pos);
        pos = end + 1;
        if (line.empty()) continue;
        const auto cols = split_tabs(line);
        if (cols.size() != 2 || cols[0] != std::to_string(vocab.size()))
            throw DataError("vocab.tsv line " + std::to_string(vocab.size() + 1) + ": expected '<id>\\t<token>'");
        vocab.emplace_back(cols[1]);
    }
    return vocab;
}

}  // namespace

ModelMeta make_meta(const FitConfig& cfg) {
    ModelMeta m;
    m.fields = cfg.fields.label();
    m.config = cfg.fingerprint();
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(m.config)));
    m.config_hash = buf;
    return m;
}

void save_params(const fs::path& dir, const ModelParams& params, const std::vector<std::string>& vocab,
                 const ModelMeta& meta, const std::vector<FitTraceEntry>& trace) {
    params.validate();
    if (vocab.size() != params.vocab_size()) throw std::invalid_argument("vocab size mismatch");
    fs::path tmp = dir;
    tmp += ".tmp";
    fs::remove_all(tmp);
    fs::create_directories(tmp / "documents");
    fs::create_directories(tmp / "queries");

    json j;
    j["format"] = "bayesum-model";
    j["version"] = 1;
    j["vocab_size"] = params.vocab_size();
    j["num_documents"] = params.documents.size();
    j["num_queries"] = params.queries.size();
    j["alpha"] = params.alpha;
    j["document_ids"] = params.document_ids;
    j["query_ids"] = params.query_ids;
    j["smoothing"] = params.smoothing;
    j["fields"] = meta.fields;
    j["config"] = meta.config;
    j["config_hash"] = meta.config_hash;
    write_plain(tmp / "meta.json", j.dump(2) + "\n");

    std::string v;
    for (std::size_t i = 0; i < vocab.size(); ++i) v += std::to_string(i) + "\t" + vocab[i] + "\n";
    write_plain(tmp / "vocab.tsv", v);
    write_plain(tmp / "general.tsv", format_model_tsv(params.general));
    for (std::size_t k = 0; k < params.documents.size(); ++k)
        write_plain(tmp / "documents" / (std::to_string(k) + ".tsv"), format_model_tsv(params.documents[k]));
    for (std::size_t q = 0; q < params.queries.size(); ++q)
        write_plain(tmp / "queries" / (std::to_string(q) + ".tsv"), format_model_tsv(params.queries[q]));
    if (!trace.empty()) write_plain(tmp / "trace.csv", format_trace_csv(trace));

    fs::remove_all(dir);
    fs::rename(tmp, dir);
}

LoadedModel load_params(const fs::path& dir) {
    const auto meta_path = dir / "meta.json";
    if (!fs::exists(meta_path)) throw DataError("no model at '" + dir.string() + "' (missing meta.json)");
    LoadedModel out;
    try {
        const auto j = json::parse(read_file(meta_path));
        if (j.at("format") != "bayesum-model" || j.at("version") != 1)
            throw DataError("'" + meta_path.string() + "' is not a version 1 bayesum model");
        const auto V = j.at("vocab_size").get<std::size_t>();
        const auto K = j.at("num_documents").get<std::size_t>();
        const auto J = j.at("num_queries").get<std::size_t>();
        auto& p = out.params;
        p.alpha = j.at("alpha").get<std::vector<double>>();
        p.document_ids = j.at("document_ids").get<std::vector<std::string>>();
        p.query_ids = j.at("query_ids").get<std::vector<std::string>>();
        p.smoothing = j.at("smoothing").get<double>();
        out.meta.fields = j.at("fields").get<std::string>();
        out.meta.config = j.at("config").get<std::string>();
        out.meta.config_hash = j.at("config_hash").get<std::string>();
        if (p.document_ids.size() != K || p.query_ids.size() != J)
            throw DataError("'" + meta_path.string() + "': id lists do not match dimensions");
        out.vocab = parse_vocab(read_file(dir / "vocab.tsv"));
        if (out.vocab.size() != V) throw DataError("vocab.tsv size does not match meta.json");
        p.general = parse_model_tsv(read_file(dir / "general.tsv"), V);
        for (std::size_t k = 0; k < K; ++k)
            p.documents.push_back(parse_model_tsv(read_file(dir / "documents" / (std::to_string(k) + ".tsv")), V));
        for (std::size_t q = 0; q < J; ++q)
            p.queries.push_back(parse_model_tsv(read_file(dir / "queries" / (std::to_string(q) + ".tsv")), V));
        p.validate();
    } catch (const json::exception& e) {
        throw DataError("'" + meta_path.string() + "': " + e.what());
    } catch (const std::invalid_argument& e) {
        throw DataError("invalid model at '" + dir.string() + "': " + e.what());
    }
    return out;
}

void check_model_vocab(const LoadedModel& model, const Corpus& corpus) {
    if (model.vocab != corpus.vocab().tokens()) throw DataError("model vocabulary does not match corpus vocabulary");
}

}  // namespace bayesum
