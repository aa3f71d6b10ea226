#include "bayesum/langmodel.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "bayesum/error.hpp"
#include "bayesum/io.hpp"

namespace bayesum {

namespace {

constexpr double kSimplexTolerance = 1e-9;

void require_same_size(const UnigramModel& a, const UnigramModel& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("unigram models over different vocabularies");
    }
}

}  // namespace

UnigramModel::UnigramModel(std::vector<double> probs) : m_p(std::move(probs)) {
    double sum = 0.0;
    for (double v : m_p) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("unigram model has a negative or non-finite entry");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > kSimplexTolerance) {
        throw std::invalid_argument("unigram model sums to " + format_double(sum));
    }
}

UnigramModel UnigramModel::uniform(std::size_t vocab_size) {
    if (vocab_size == 0) throw std::invalid_argument("empty vocabulary");
    return UnigramModel(std::vector<double>(vocab_size, 1.0 / static_cast<double>(vocab_size)));
}

CountVector::CountVector(std::initializer_list<std::pair<const TokenId, double>> init) {
    for (const auto& [w, c] : init) add(w, c);
}

void CountVector::add(TokenId w, double c) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("negative count");
    if (c == 0.0) return;
    m_counts[w] += c;
    m_total += c;
}

double CountVector::operator[](TokenId w) const {
    auto it = m_counts.find(w);
    return it == m_counts.end() ? 0.0 : it->second;
}

CountVector CountVector::of(std::span<const TokenId> tokens) {
    CountVector c;
    for (auto w : tokens) c.add(w);
    return c;
}

UnigramModel mle(const CountVector& counts, std::size_t vocab_size) {
    if (!(counts.total() > 0.0)) throw std::invalid_argument("empty model");
    std::vector<double> p(vocab_size, 0.0);
    for (const auto& [w, c] : counts.entries()) {
        if (w >= vocab_size) throw std::invalid_argument("token id outside vocabulary");
        p[w] = c / counts.total();
    }
    return UnigramModel(std::move(p));
}

UnigramModel mle(std::span<const double> dense_counts) {
    double total = 0.0;
    for (double c : dense_counts) {
        if (!(c >= 0.0)) throw std::invalid_argument("negative count");
        total += c;
    }
    if (!(total > 0.0)) throw std::invalid_argument("empty model");
    std::vector<double> p(dense_counts.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = dense_counts[i] / total;
    return UnigramModel(std::move(p));
}

UnigramModel interpolate(const UnigramModel& a, const UnigramModel& b, double weight) {
    require_same_size(a, b);
    if (!(weight >= 0.0 && weight <= 1.0)) throw std::invalid_argument("interpolation weight outside [0,1]");
    std::vector<double> p(a.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = (1.0 - weight) * a.probs()[i] + weight * b.probs()[i];
    return UnigramModel(std::move(p));
}

UnigramModel smooth(const UnigramModel& model, const UnigramModel& background, double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0)) {
        throw std::invalid_argument("smoothing weight must lie strictly inside (0,1)");
    }
    require_same_size(model, background);
    for (double v : background.probs()) {
        if (!(v > 0.0)) throw std::invalid_argument("background model must be strictly positive");
    }
    return interpolate(model, background, lambda);
}

UnigramModel background_model(std::span<const double> dense_counts, double epsilon) {
    if (dense_counts.empty()) throw std::invalid_argument("empty vocabulary");
    const double total = std::accumulate(dense_counts.begin(), dense_counts.end(), 0.0);
    const auto V = static_cast<double>(dense_counts.size());
    if (!(total > 0.0)) return UnigramModel::uniform(dense_counts.size());
    std::vector<double> p(dense_counts.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = (1.0 - epsilon) * (dense_counts[i] / total) + epsilon / V;
    }
    return UnigramModel(std::move(p));
}

double kl_divergence(const UnigramModel& p, const UnigramModel& q) {
    require_same_size(p, q);
    // Summed as the Bregman form p ln(p/q) - p + q, whose terms are each
    // non-negative; the extra terms cancel because both sides sum to one.
    double kl = 0.0;
    for (std::size_t w = 0; w < p.size(); ++w) {
        const double pw = p.probs()[w];
        const double qw = q.probs()[w];
        if (pw == 0.0) {
            kl += qw;
            continue;
        }
        if (qw == 0.0) throw std::invalid_argument("q has zero mass where p is positive");
        const double r = qw / pw - 1.0;
        kl += pw * (r - std::log1p(r));
    }
    return kl;
}

double total_variation(const UnigramModel& p, const UnigramModel& q) {
    require_same_size(p, q);
    double d = 0.0;
    for (std::size_t w = 0; w < p.size(); ++w) d += std::abs(p.probs()[w] - q.probs()[w]);
    return 0.5 * d;
}

double dirichlet_log_density(std::span<const double> theta, std::span<const double> alpha) {
    if (theta.size() != alpha.size() || theta.empty()) {
        throw std::invalid_argument("dirichlet: dimension mismatch");
    }
    double sum_theta = 0.0;
    for (double t : theta) {
        if (!(t >= 0.0)) throw std::invalid_argument("dirichlet: theta off the simplex");
        sum_theta += t;
    }
    if (std::abs(sum_theta - 1.0) > kSimplexTolerance) {
        throw std::invalid_argument("dirichlet: theta off the simplex");
    }
    double sum_alpha = 0.0;
    double log_norm = 0.0;
    for (double a : alpha) {
        if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("dirichlet: alpha must be positive");
        sum_alpha += a;
        log_norm -= std::lgamma(a);
    }
    log_norm += std::lgamma(sum_alpha);
    double kernel = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double a = alpha[i];
        if (a == 1.0) continue;
        if (theta[i] == 0.0) {
            if (a < 1.0) throw std::invalid_argument("dirichlet: infinite density at the boundary");
            return -std::numeric_limits<double>::infinity();
        }
        kernel += (a - 1.0) * std::log(theta[i]);
    }
    return log_norm + kernel;
}

std::string format_model_tsv(const UnigramModel& model) {
    std::string out;
    for (std::size_t w = 0; w < model.size(); ++w) {
        const double p = model.probs()[w];
        if (p == 0.0) continue;
        out += std::to_string(w);
        out += '\t';
        out += format_double(p);
        out += '\n';
    }
    return out;
}

UnigramModel parse_model_tsv(std::string_view text, std::size_t vocab_size) {
    std::vector<double> p(vocab_size, 0.0);
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++lineno;
        if (line.empty()) continue;
        auto cols = split_tabs(line);
        if (cols.size() != 2) throw DataError("model tsv line " + std::to_string(lineno) + ": expected 2 columns");
        try {
            const auto w = std::stoul(std::string(cols[0]));
            if (w >= vocab_size) throw DataError("model tsv line " + std::to_string(lineno) + ": id out of range");
            p[w] = std::stod(std::string(cols[1]));
        } catch (const std::logic_error&) {
            throw DataError("model tsv line " + std::to_string(lineno) + ": not a number");
        }
    }
    try {
        return UnigramModel(std::move(p));
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("model tsv: ") + e.what());
    }
}

}  // namespace bayesum
