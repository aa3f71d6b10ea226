#include "bayesum/corpus.hpp"

#include <algorithm>
#include <unordered_set>

#include "bayesum/error.hpp"

namespace bayesum {

TokenId Vocab::add(std::string_view token) {
    if (auto it = m_ids.find(std::string(token)); it != m_ids.end()) {
        return it->second;
    }
    const auto id = static_cast<TokenId>(m_tokens.size());
    m_tokens.emplace_back(token);
    m_ids.emplace(m_tokens.back(), id);
    return id;
}

std::optional<TokenId> Vocab::find(std::string_view token) const {
    if (auto it = m_ids.find(std::string(token)); it != m_ids.end()) {
        return it->second;
    }
    return std::nullopt;
}

TokenId Vocab::id(std::string_view token) const {
    if (auto id = find(token)) return *id;
    throw DataError("unknown token '" + std::string(token) + "'");
}

std::string_view field_name(QueryField f) {
    switch (f) {
    case QueryField::title:
        return "title";
    case QueryField::description:
        return "description";
    case QueryField::summary:
        return "summary";
    case QueryField::concepts:
        return "concepts";
    }
    return "?";
}

FieldSet FieldSet::parse(std::string_view spec) {
    if (spec == "all") return all();
    if (spec == "none" || spec.empty()) return none();
    FieldSet out;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        std::size_t next = spec.find_first_of(",+", pos);
        if (next == std::string_view::npos) next = spec.size();
        const auto name = spec.substr(pos, next - pos);
        if (name == "title") {
            out = out.with(QueryField::title);
        } else if (name == "desc" || name == "description") {
            out = out.with(QueryField::description);
        } else if (name == "summary") {
            out = out.with(QueryField::summary);
        } else if (name == "concepts") {
            out = out.with(QueryField::concepts);
        } else {
            throw std::invalid_argument("unknown query field '" + std::string(name) + "'");
        }
        pos = next + 1;
    }
    return out;
}

std::string FieldSet::label() const {
    if (empty()) return "none";
    std::string out;
    for (auto f : kAllQueryFields) {
        if (!contains(f)) continue;
        if (!out.empty()) out += '+';
        out += field_name(f);
    }
    return out;
}

std::vector<TokenId> Query::select(FieldSet fields, bool content_only) const {
    std::vector<TokenId> out;
    for (auto f : kAllQueryFields) {
        if (!fields.contains(f)) continue;
        const auto& src = content_only ? content[static_cast<int>(f)] : tokens[static_cast<int>(f)];
        out.insert(out.end(), src.begin(), src.end());
    }
    return out;
}

RelevanceMatrix::RelevanceMatrix(std::size_t num_docs, std::size_t num_queries,
                                 std::vector<std::pair<std::size_t, std::size_t>> pairs)
    : m_by_query(num_queries), m_by_doc(num_docs) {
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    for (auto [d, q] : pairs) {
        if (d >= num_docs || q >= num_queries) {
            throw DataError("relevance pair out of range");
        }
        m_by_doc[d].push_back(q);
        m_by_query[q].push_back(d);
    }
    // pairs sorted by (d, q): per-doc lists are sorted; per-query lists are
    // filled in increasing d.
}

bool RelevanceMatrix::is_relevant(std::size_t doc, std::size_t query) const {
    const auto& docs = m_by_query.at(query);
    return std::binary_search(docs.begin(), docs.end(), doc);
}

std::size_t RelevanceMatrix::num_pairs() const {
    std::size_t n = 0;
    for (const auto& docs : m_by_query) n += docs.size();
    return n;
}

PreprocessDescriptor PreprocessDescriptor::from(const PreprocessOptions& opts) {
    PreprocessDescriptor d;
    d.stem = opts.stem;
    d.remove_stopwords = opts.remove_stopwords;
    d.min_count = opts.min_count;
    if (opts.stopwords != nullptr) {
        d.stopword_list = opts.stopwords->name();
        d.stopword_hash = opts.stopwords->hash();
    }
    return d;
}

Corpus::Corpus(Vocab vocab, std::vector<Document> documents, std::vector<Query> queries,
               RelevanceMatrix relevance, PreprocessDescriptor descriptor,
               std::vector<std::string> warnings)
    : m_vocab(std::move(vocab)),
      m_documents(std::move(documents)),
      m_queries(std::move(queries)),
      m_relevance(std::move(relevance)),
      m_descriptor(std::move(descriptor)),
      m_warnings(std::move(warnings)) {
    if (m_relevance.num_docs() != m_documents.size() || m_relevance.num_queries() != m_queries.size()) {
        throw DataError("relevance matrix shape does not match corpus");
    }
    const auto V = m_vocab.size();
    auto check_ids = [V](std::span<const TokenId> ids, const std::string& where) {
        for (auto id : ids) {
            if (id >= V) throw DataError("token id out of range in " + where);
        }
    };
    for (std::size_t k = 0; k < m_documents.size(); ++k) {
        const auto& doc = m_documents[k];
        if (!m_doc_index.emplace(doc.id, k).second) {
            throw DataError("duplicate document id '" + doc.id + "'");
        }
        if (doc.sentences.empty()) {
            throw DataError("document '" + doc.id + "' has no sentences");
        }
        for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
            const auto& sent = doc.sentences[s];
            if (sent.tokens.empty()) {
                throw DataError("document '" + doc.id + "' has an empty sentence");
            }
            if (s > 0 && sent.position <= doc.sentences[s - 1].position) {
                throw DataError("document '" + doc.id + "' sentence positions not increasing");
            }
            check_ids(sent.tokens, "document '" + doc.id + "'");
            check_ids(sent.content, "document '" + doc.id + "'");
            ++m_stats.sentences;
            m_stats.words += sent.tokens.size();
        }
    }
    for (std::size_t j = 0; j < m_queries.size(); ++j) {
        const auto& q = m_queries[j];
        if (!m_query_index.emplace(q.id, j).second) {
            throw DataError("duplicate query id '" + q.id + "'");
        }
        for (int f = 0; f < 4; ++f) {
            check_ids(q.tokens[f], "query '" + q.id + "'");
            check_ids(q.content[f], "query '" + q.id + "'");
        }
    }
    m_stats.queries = m_queries.size();
    m_stats.documents = m_documents.size();
    m_stats.vocabulary = V;
    m_stats.relevant_pairs = m_relevance.num_pairs();
}

std::optional<std::size_t> Corpus::find_document(std::string_view id) const {
    if (auto it = m_doc_index.find(std::string(id)); it != m_doc_index.end()) return it->second;
    return std::nullopt;
}

std::optional<std::size_t> Corpus::find_query(std::string_view id) const {
    if (auto it = m_query_index.find(std::string(id)); it != m_query_index.end()) return it->second;
    return std::nullopt;
}

std::size_t Corpus::document_index(std::string_view id) const {
    if (auto k = find_document(id)) return *k;
    throw DataError("unknown document id '" + std::string(id) + "'");
}

std::size_t Corpus::query_index(std::string_view id) const {
    if (auto j = find_query(id)) return *j;
    throw DataError("unknown query id '" + std::string(id) + "'");
}

Corpus Corpus::with_relevance(RelevanceMatrix relevance) const {
    return Corpus(m_vocab, m_documents, m_queries, std::move(relevance), m_descriptor, m_warnings);
}

namespace {

struct AnalyzedSentence {
    std::vector<AnalyzedToken> tokens;
    Span span;
    std::size_t position;
};

}  // namespace

Corpus build_corpus(const std::vector<RawDocument>& documents, const std::vector<RawQuery>& queries,
                    const std::vector<RawJudgment>& judgments, const PreprocessOptions& opts) {
    std::vector<std::string> warnings;

    std::vector<std::vector<AnalyzedSentence>> analyzed_docs;
    analyzed_docs.reserve(documents.size());
    for (const auto& raw : documents) {
        std::vector<AnalyzedSentence> sents;
        if (raw.text) {
            auto segments = segment_sentences(*raw.text);
            for (std::size_t s = 0; s < segments.size(); ++s) {
                sents.push_back({analyze(segments[s].text, opts), segments[s].span, s});
            }
        } else {
            std::size_t offset = 0;
            for (std::size_t s = 0; s < raw.sentences.size(); ++s) {
                const auto& text = raw.sentences[s];
                sents.push_back({analyze(text, opts), Span{offset, offset + text.size()}, s});
                offset += text.size() + 1;
            }
        }
        analyzed_docs.push_back(std::move(sents));
    }
    std::vector<std::array<std::vector<AnalyzedToken>, 4>> analyzed_queries;
    analyzed_queries.reserve(queries.size());
    for (const auto& raw : queries) {
        std::array<std::vector<AnalyzedToken>, 4> fields;
        for (int f = 0; f < 4; ++f) fields[f] = analyze(raw.text[f], opts);
        analyzed_queries.push_back(std::move(fields));
    }

    auto kept = [&](const AnalyzedToken& t) { return !(opts.remove_stopwords && t.stopword); };

    std::unordered_map<std::string, std::size_t> counts;
    if (opts.min_count > 1) {
        for (const auto& doc : analyzed_docs)
            for (const auto& s : doc)
                for (const auto& t : s.tokens)
                    if (kept(t)) ++counts[t.term];
        for (const auto& q : analyzed_queries)
            for (const auto& field : q)
                for (const auto& t : field)
                    if (kept(t)) ++counts[t.term];
    }
    auto frequent = [&](const AnalyzedToken& t) {
        return opts.min_count <= 1 || counts[t.term] >= opts.min_count;
    };

    Vocab vocab;
    auto intern = [&](const std::vector<AnalyzedToken>& toks, std::vector<TokenId>& all,
                      std::vector<TokenId>& content) {
        for (const auto& t : toks) {
            if (!kept(t) || !frequent(t)) continue;
            const auto id = vocab.add(t.term);
            all.push_back(id);
            if (!t.stopword) content.push_back(id);
        }
    };

    std::vector<Document> docs;
    docs.reserve(documents.size());
    for (std::size_t k = 0; k < documents.size(); ++k) {
        Document doc;
        doc.id = documents[k].id;
        for (const auto& as : analyzed_docs[k]) {
            Sentence sent;
            intern(as.tokens, sent.tokens, sent.content);
            if (sent.tokens.empty()) {
                warnings.push_back("document '" + doc.id + "': dropped empty sentence " +
                                   std::to_string(as.position));
                continue;
            }
            sent.span = as.span;
            sent.position = as.position;
            doc.sentences.push_back(std::move(sent));
        }
        docs.push_back(std::move(doc));
    }
    std::vector<Query> qs;
    qs.reserve(queries.size());
    for (std::size_t j = 0; j < queries.size(); ++j) {
        Query q;
        q.id = queries[j].id;
        q.text = queries[j].text;
        for (int f = 0; f < 4; ++f) intern(analyzed_queries[j][f], q.tokens[f], q.content[f]);
        qs.push_back(std::move(q));
    }

    std::unordered_map<std::string_view, std::size_t> doc_index;
    for (std::size_t k = 0; k < docs.size(); ++k) {
        if (!doc_index.emplace(docs[k].id, k).second) {
            throw DataError("duplicate document id '" + docs[k].id + "'");
        }
    }
    std::unordered_map<std::string_view, std::size_t> query_index;
    for (std::size_t j = 0; j < qs.size(); ++j) {
        if (!query_index.emplace(qs[j].id, j).second) {
            throw DataError("duplicate query id '" + qs[j].id + "'");
        }
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<std::string> offenders;
    for (const auto& jd : judgments) {
        auto d = doc_index.find(jd.doc_id);
        auto q = query_index.find(jd.query_id);
        if (d == doc_index.end() || q == query_index.end()) {
            std::string msg = jd.origin.empty() ? std::string() : jd.origin + ": ";
            if (q == query_index.end()) msg += "unknown query '" + jd.query_id + "'";
            if (d == doc_index.end()) {
                if (q == query_index.end()) msg += ", ";
                msg += "unknown document '" + jd.doc_id + "'";
            }
            offenders.push_back(std::move(msg));
            continue;
        }
        if (jd.relevant) pairs.emplace_back(d->second, q->second);
    }
    if (!offenders.empty()) {
        std::string msg = "qrels reference unknown ids:";
        for (const auto& o : offenders) msg += "\n  " + o;
        throw DataError(msg);
    }
    RelevanceMatrix relevance(docs.size(), qs.size(), std::move(pairs));
    return Corpus(std::move(vocab), std::move(docs), std::move(qs), std::move(relevance),
                  PreprocessDescriptor::from(opts), std::move(warnings));
}

}  // namespace bayesum
