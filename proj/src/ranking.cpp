#include "bayesum/ranking.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "bayesum/error.hpp"
#include "bayesum/io.hpp"

namespace bayesum {

namespace {

bool ranks_before(const RankedSentence& a, const RankedSentence& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.doc_id != b.doc_id) return a.doc_id < b.doc_id;
    return a.sentence < b.sentence;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t pos = 0;
    std::size_t lineno = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = end + 1;
        ++lineno;
        if (!line.empty()) fn(line, lineno);
    }
}

double parse_number(std::string_view s, std::size_t lineno) {
    try {
        std::size_t used = 0;
        const double v = std::stod(std::string(s), &used);
        if (used != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::logic_error&) {
        throw DataError("run line " + std::to_string(lineno) + ": bad number '" + std::string(s) + "'");
    }
}

}  // namespace

void sort_ranking(Ranking& ranking) {
    std::sort(ranking.entries.begin(), ranking.entries.end(), ranks_before);
}

bool is_valid_ranking(const Ranking& ranking) {
    std::set<std::pair<std::string, std::size_t>> seen;
    for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
        const auto& e = ranking.entries[i];
        if (!seen.emplace(e.doc_id, e.sentence).second) return false;
        if (i > 0 && ranks_before(e, ranking.entries[i - 1])) return false;
    }
    return true;
}

std::string format_run(const std::vector<Ranking>& rankings, std::string_view tag) {
    std::ostringstream out;
    for (const auto& r : rankings) {
        for (std::size_t i = 0; i < r.entries.size(); ++i) {
            const auto& e = r.entries[i];
            out << r.query_id << '\t' << e.doc_id << ':' << e.sentence << '\t' << (i + 1) << '\t'
                << format_double(e.score) << '\t' << tag << '\n';
        }
    }
    return out.str();
}

ParsedRun parse_run(std::string_view text) {
    ParsedRun run;
    for_each_line(text, [&](std::string_view line, std::size_t lineno) {
        const auto cols = split_tabs(line);
        if (cols.size() != 5) throw DataError("run line " + std::to_string(lineno) + ": expected 5 columns");
        const auto colon = cols[1].rfind(':');
        if (colon == std::string_view::npos)
            throw DataError("run line " + std::to_string(lineno) + ": expected doc_id:sentence");
        RankedSentence e;
        e.doc_id = std::string(cols[1].substr(0, colon));
        const double sentence = parse_number(cols[1].substr(colon + 1), lineno);
        if (sentence < 0 || sentence != static_cast<double>(static_cast<std::size_t>(sentence)))
            throw DataError("run line " + std::to_string(lineno) + ": bad sentence index");
        e.sentence = static_cast<std::size_t>(sentence);
        e.score = parse_number(cols[3], lineno);
        if (run.rankings.empty() || run.rankings.back().query_id != cols[0]) {
            for (const auto& r : run.rankings) {
                if (r.query_id == cols[0])
                    throw DataError("run line " + std::to_string(lineno) + ": query '" + std::string(cols[0]) +
                                    "' is not contiguous");
            }
            run.rankings.push_back({std::string(cols[0]), {}});
        }
        run.tag = std::string(cols[4]);
        run.rankings.back().entries.push_back(std::move(e));
    });
    return run;
}

std::vector<DocRanking> parse_doc_run(std::string_view text) {
    struct Row {
        double rank;
        ScoredDoc doc;
    };
    std::vector<std::string> order;
    std::vector<std::vector<Row>> rows;
    for_each_line(text, [&](std::string_view line, std::size_t lineno) {
        auto cols = split_tabs(line);
        if (cols.size() == 6) cols.erase(cols.begin() + 1);  // TREC "Q0" column
        if (cols.size() != 4 && cols.size() != 5)
            throw DataError("ir run line " + std::to_string(lineno) + ": expected 4 or 5 columns");
        const std::string qid(cols[0]);
        auto it = std::find(order.begin(), order.end(), qid);
        if (it == order.end()) {
            order.push_back(qid);
            rows.emplace_back();
            it = order.end() - 1;
        }
        rows[static_cast<std::size_t>(it - order.begin())].push_back(
            {parse_number(cols[2], lineno), {std::string(cols[1]), parse_number(cols[3], lineno)}});
    });
    std::vector<DocRanking> out;
    for (std::size_t i = 0; i < order.size(); ++i) {
        auto& r = rows[i];
        std::stable_sort(r.begin(), r.end(), [](const Row& a, const Row& b) { return a.rank < b.rank; });
        DocRanking dr{order[i], {}};
        for (auto& row : r) dr.entries.push_back(std::move(row.doc));
        out.push_back(std::move(dr));
    }
    return out;
}

}  // namespace bayesum
