#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace bayesum {

struct RankedSentence {
    std::string doc_id;
    std::size_t sentence = 0;  // position within the source document
    double score = 0.0;

    friend bool operator==(const RankedSentence&, const RankedSentence&) = default;
};

/// Higher scores first; ties broken by (doc id, sentence) ascending.
struct Ranking {
    std::string query_id;
    std::vector<RankedSentence> entries;
};

void sort_ranking(Ranking& ranking);
/// Sorted, no duplicate (doc, sentence) pairs.
bool is_valid_ranking(const Ranking& ranking);

struct ScoredDoc {
    std::string doc_id;
    double score = 0.0;
};

struct DocRanking {
    std::string query_id;
    std::vector<ScoredDoc> entries;  // in rank order
};

/// Human-selected sentence positions per (query id, doc id).
using GoldSet = std::map<std::pair<std::string, std::string>, std::set<std::size_t>>;

/// TREC-style run TSV: query_id, doc_id:sentence, rank (1-based), score, tag.
std::string format_run(const std::vector<Ranking>& rankings, std::string_view tag);

struct ParsedRun {
    std::string tag;
    std::vector<Ranking> rankings;  // one per query, in file order
};

ParsedRun parse_run(std::string_view text);

/// Document run: query_id, doc_id, rank, score[, tag]. Entries are ordered by
/// rank.
std::vector<DocRanking> parse_doc_run(std::string_view text);

}  // namespace bayesum
