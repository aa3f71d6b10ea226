#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bayesum/types.hpp"

namespace bayesum {

/// Dense probability vector over a fixed vocabulary.
class UnigramModel {
  public:
    UnigramModel() = default;
    /// Throws std::invalid_argument unless entries are >= 0 and sum to 1
    /// within 1e-9.
    explicit UnigramModel(std::vector<double> probs);

    static UnigramModel uniform(std::size_t vocab_size);

    std::size_t size() const { return m_p.size(); }
    double operator[](TokenId w) const { return m_p[w]; }
    std::span<const double> probs() const { return m_p; }

    friend bool operator==(const UnigramModel&, const UnigramModel&) = default;

  private:
    std::vector<double> m_p;
};

/// Sparse, non-negative real counts. Reals because EM produces fractional
/// expected counts.
class CountVector {
  public:
    CountVector() = default;
    CountVector(std::initializer_list<std::pair<const TokenId, double>> init);

    void add(TokenId w, double c = 1.0);
    double operator[](TokenId w) const;
    double total() const { return m_total; }
    bool empty() const { return m_counts.empty(); }
    const std::map<TokenId, double>& entries() const { return m_counts; }

    static CountVector of(std::span<const TokenId> tokens);

  private:
    std::map<TokenId, double> m_counts;
    double m_total = 0.0;
};

/// p(w) = count(w) / total. Throws std::invalid_argument("empty model") on
/// zero total or out-of-range ids.
UnigramModel mle(const CountVector& counts, std::size_t vocab_size);
UnigramModel mle(std::span<const double> dense_counts);

/// (1 - weight) * a + weight * b, weight in [0, 1].
UnigramModel interpolate(const UnigramModel& a, const UnigramModel& b, double weight);

/// (1 - lambda) * model + lambda * background with lambda strictly inside
/// (0, 1); background must be strictly positive.
UnigramModel smooth(const UnigramModel& model, const UnigramModel& background, double lambda);

/// Corpus background model: MLE mixed with epsilon mass spread uniformly so
/// every id is strictly positive. Empty counts give the uniform model.
UnigramModel background_model(std::span<const double> dense_counts, double epsilon = 1e-10);

/// KL(p || q) in nats. Throws std::invalid_argument when q has zero mass where
/// p is positive or sizes differ.
double kl_divergence(const UnigramModel& p, const UnigramModel& q);

double total_variation(const UnigramModel& p, const UnigramModel& q);

/// ln Dir(theta | alpha). theta must lie on the simplex within 1e-9 and alpha
/// be strictly positive. A zero coordinate with alpha_i < 1 is an infinite
/// density and throws; with alpha_i > 1 the result is -infinity.
double dirichlet_log_density(std::span<const double> theta, std::span<const double> alpha);

/// Sparse TSV "token_id\tprobability" for nonzero entries.
std::string format_model_tsv(const UnigramModel& model);
UnigramModel parse_model_tsv(std::string_view text, std::size_t vocab_size);

}  // namespace bayesum
