#pragma once

#include <span>
#include <vector>

#include "bayesum/model.hpp"

namespace bayesum {

/// One sentence reduced to what inference needs: the Dirichlet parameters of
/// the allowed components and the per-word emission probabilities.
struct MixtureProblem {
    std::vector<double> alpha;       // A entries
    std::size_t num_words = 0;       // N
    std::vector<double> likelihood;  // N x A, row-major

    std::size_t num_components() const { return alpha.size(); }
    double at(std::size_t n, std::size_t a) const { return likelihood[n * alpha.size() + a]; }
};

MixtureProblem make_problem(std::span<const TokenId> words, const AllowedMask& mask, const ModelParams& params);

struct InnerOptions {
    std::size_t max_iterations = 50;
    double tolerance = 1e-6;
};

/// Mean-field fixed point; log_evidence is the evidence lower bound.
/// `warm_gamma`, when given, seeds the first responsibility update.
SentencePosterior variational_posterior(const MixtureProblem& problem, const InnerOptions& opts,
                                        std::span<const double> warm_gamma = {});

/// Expectation propagation with Dirichlet-form term approximations, matched
/// on normalizer, mean and total precision. Terms whose deletion leaves a
/// non-positive cavity are skipped and retried on the next sweep.
SentencePosterior ep_posterior(const MixtureProblem& problem, const InnerOptions& opts);

struct ExactPosterior {
    double log_evidence = 0.0;
    std::vector<double> mean_pi;           // A entries
    std::vector<double> responsibilities;  // N x A
};

inline constexpr std::size_t kExactMaxWords = 8;
inline constexpr std::size_t kExactMaxComponents = 3;

/// Closed-form evidence by enumerating every word-source assignment and
/// integrating pi analytically (Dirichlet-multinomial). Refuses problems
/// above the size caps with std::invalid_argument.
ExactPosterior exact_posterior(const MixtureProblem& problem, std::size_t max_words = kExactMaxWords,
                               std::size_t max_components = kExactMaxComponents);

/// Dispatches on cfg.engine and labels the result with the mask components.
SentencePosterior infer_sentence(std::span<const TokenId> words, const AllowedMask& mask,
                                 const ModelParams& params, const FitConfig& cfg,
                                 std::span<const double> warm_gamma = {});

}  // namespace bayesum
