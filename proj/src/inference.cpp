#include "bayesum/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/digamma.hpp>

#include "bayesum/error.hpp"

namespace bayesum {

namespace {

using boost::math::digamma;

double sum(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0);
}

// ln of the multivariate Beta function: sum lnGamma(x_a) - lnGamma(sum x).
double log_beta(std::span<const double> x) {
    double out = 0.0;
    for (double v : x) out += std::lgamma(v);
    return out - std::lgamma(sum(x));
}

double log_sum_exp(std::span<const double> v) {
    const double m = *std::max_element(v.begin(), v.end());
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

void check_problem(const MixtureProblem& p) {
    if (p.alpha.empty()) throw std::invalid_argument("mixture problem without components");
    if (p.likelihood.size() != p.num_words * p.alpha.size()) {
        throw std::invalid_argument("likelihood matrix has the wrong shape");
    }
    for (double a : p.alpha) {
        if (!(a > 0.0)) throw std::invalid_argument("alpha must be positive");
    }
}

// Posterior for a single allowed component: everything is forced.
SentencePosterior single_component(const MixtureProblem& p) {
    SentencePosterior out;
    out.gamma = {p.alpha[0] + static_cast<double>(p.num_words)};
    out.responsibilities.assign(p.num_words, 1.0);
    for (std::size_t n = 0; n < p.num_words; ++n) out.log_evidence += std::log(p.at(n, 0));
    return out;
}

}  // namespace

MixtureProblem make_problem(std::span<const TokenId> words, const AllowedMask& mask, const ModelParams& params) {
    MixtureProblem p;
    const auto comps = mask.components();
    p.alpha.reserve(comps.size());
    for (auto c : comps) p.alpha.push_back(params.alpha.at(c));
    p.num_words = words.size();
    p.likelihood.resize(words.size() * comps.size());
    for (std::size_t n = 0; n < words.size(); ++n) {
        bool any = false;
        for (std::size_t a = 0; a < comps.size(); ++a) {
            const double v = params.emission(comps[a], words[n]);
            p.likelihood[n * comps.size() + a] = v;
            any = any || v > 0.0;
        }
        if (!any) {
            throw NumericalError("word id " + std::to_string(words[n]) +
                                 " has zero probability under every allowed component");
        }
    }
    return p;
}

SentencePosterior variational_posterior(const MixtureProblem& problem, const InnerOptions& opts,
                                        std::span<const double> warm_gamma) {
    check_problem(problem);
    const auto A = problem.num_components();
    const auto N = problem.num_words;
    if (A == 1) return single_component(problem);

    std::vector<double> log_lik(problem.likelihood.size());
    for (std::size_t i = 0; i < log_lik.size(); ++i) log_lik[i] = std::log(problem.likelihood[i]);

    SentencePosterior out;
    out.gamma.resize(A);
    if (warm_gamma.size() == A) {
        std::copy(warm_gamma.begin(), warm_gamma.end(), out.gamma.begin());
    } else {
        for (std::size_t a = 0; a < A; ++a) {
            out.gamma[a] = problem.alpha[a] + static_cast<double>(N) / static_cast<double>(A);
        }
    }
    out.responsibilities.assign(N * A, 0.0);

    std::vector<double> dig(A);
    std::vector<double> row(A);
    std::vector<double> next(A);
    for (std::size_t it = 0; it < opts.max_iterations; ++it) {
        for (std::size_t a = 0; a < A; ++a) dig[a] = digamma(out.gamma[a]);
        next = problem.alpha;
        for (std::size_t n = 0; n < N; ++n) {
            for (std::size_t a = 0; a < A; ++a) row[a] = log_lik[n * A + a] + dig[a];
            const double norm = log_sum_exp(row);
            for (std::size_t a = 0; a < A; ++a) {
                const double phi = std::exp(row[a] - norm);
                out.responsibilities[n * A + a] = phi;
                next[a] += phi;
            }
        }
        double delta = 0.0;
        for (std::size_t a = 0; a < A; ++a) delta = std::max(delta, std::abs(next[a] - out.gamma[a]));
        out.gamma = next;
        out.iterations = it + 1;
        if (delta < opts.tolerance) break;
    }

    // Evidence lower bound at (phi, gamma).
    const double gamma_sum = sum(out.gamma);
    const double dig_sum = digamma(gamma_sum);
    std::vector<double> elog(A);
    for (std::size_t a = 0; a < A; ++a) elog[a] = digamma(out.gamma[a]) - dig_sum;

    double bound = -log_beta(problem.alpha) + log_beta(out.gamma);
    for (std::size_t a = 0; a < A; ++a) bound += (problem.alpha[a] - out.gamma[a]) * elog[a];
    for (std::size_t n = 0; n < N; ++n) {
        for (std::size_t a = 0; a < A; ++a) {
            const double phi = out.responsibilities[n * A + a];
            if (phi <= 0.0) continue;
            bound += phi * (elog[a] + log_lik[n * A + a] - std::log(phi));
        }
    }
    out.log_evidence = bound;
    return out;
}

namespace {

struct TiltedMoments {
    double log_z = 0.0;
    std::vector<double> mean;
    std::vector<double> second;  // E[pi_a^2]
    std::vector<double> share;   // posterior probability of each source
};

// Moments of Dir(pi | cavity) * sum_a pi_a L_a / Z.
TiltedMoments tilted_moments(std::span<const double> cavity, std::span<const double> lik) {
    const auto A = cavity.size();
    const double k0 = sum(cavity);
    TiltedMoments out;
    out.share.resize(A);
    double z = 0.0;
    for (std::size_t a = 0; a < A; ++a) z += (out.share[a] = cavity[a] / k0 * lik[a]);
    for (auto& w : out.share) w /= z;
    out.log_z = std::log(z);
    out.mean.assign(A, 0.0);
    out.second.assign(A, 0.0);
    const double d1 = k0 + 1.0;
    const double d2 = d1 * (k0 + 2.0);
    for (std::size_t b = 0; b < A; ++b) {
        for (std::size_t a = 0; a < A; ++a) {
            const double x = cavity[a] + (a == b ? 1.0 : 0.0);
            out.mean[a] += out.share[b] * x / d1;
            out.second[a] += out.share[b] * x * (x + 1.0) / d2;
        }
    }
    return out;
}

}  // namespace

SentencePosterior ep_posterior(const MixtureProblem& problem, const InnerOptions& opts) {
    check_problem(problem);
    const auto A = problem.num_components();
    const auto N = problem.num_words;
    if (A == 1) return single_component(problem);

    // Word t is approximated by s_t * prod_a pi_a^{beta_ta}; q(pi) = Dir(gamma)
    // with gamma = alpha + sum_t beta_t.
    const auto T = N;
    std::vector<double> beta(T * A, 0.0);
    std::vector<double> log_scale(T, 0.0);
    std::vector<std::vector<double>> share(T);
    std::vector<bool> included(T, false);
    SentencePosterior out;
    out.gamma = problem.alpha;

    std::vector<double> cavity(A);
    std::vector<double> fresh(A);
    for (std::size_t sweep = 0; sweep < opts.max_iterations; ++sweep) {
        double delta = 0.0;
        for (std::size_t t = 0; t < T; ++t) {
            bool valid = true;
            for (std::size_t a = 0; a < A; ++a) {
                cavity[a] = out.gamma[a] - beta[t * A + a];
                valid = valid && cavity[a] > 0.0;
            }
            if (!valid) {
                ++out.skipped_updates;
                continue;
            }
            const std::span<const double> lik(&problem.likelihood[t * A], A);
            auto mom = tilted_moments(cavity, lik);
            if (!std::isfinite(mom.log_z)) throw NumericalError("ep: word with zero likelihood");
            double num = 0.0;
            double den = 0.0;
            for (std::size_t a = 0; a < A; ++a) {
                num += mom.mean[a] - mom.second[a];
                den += mom.second[a] - mom.mean[a] * mom.mean[a];
            }
            if (!(den > 0.0) || !(num > 0.0)) {
                ++out.skipped_updates;
                continue;
            }
            const double precision = num / den;
            for (std::size_t a = 0; a < A; ++a) {
                fresh[a] = precision * mom.mean[a];
                delta = std::max(delta, std::abs(fresh[a] - out.gamma[a]));
                beta[t * A + a] = fresh[a] - cavity[a];
            }
            out.gamma = fresh;
            log_scale[t] = mom.log_z - (log_beta(out.gamma) - log_beta(cavity));
            share[t] = std::move(mom.share);
            included[t] = true;
        }
        out.iterations = sweep + 1;
        if (delta < opts.tolerance) break;
    }

    out.responsibilities.assign(N * A, 0.0);
    for (std::size_t t = 0; t < T; ++t) {
        if (!included[t]) {
            // Never included: a constant term normalized under the current q.
            const std::span<const double> lik(&problem.likelihood[t * A], A);
            auto mom = tilted_moments(out.gamma, lik);
            log_scale[t] = mom.log_z;
            share[t] = std::move(mom.share);
        }
        std::copy(share[t].begin(), share[t].end(), out.responsibilities.begin() + static_cast<std::ptrdiff_t>(t * A));
    }
    out.log_evidence = sum(log_scale) + log_beta(out.gamma) - log_beta(problem.alpha);
    return out;
}

ExactPosterior exact_posterior(const MixtureProblem& problem, std::size_t max_words, std::size_t max_components) {
    check_problem(problem);
    const auto A = problem.num_components();
    const auto N = problem.num_words;
    if (N > max_words || A > max_components) {
        throw std::invalid_argument("exact evidence refused: " + std::to_string(N) + " words x " +
                                    std::to_string(A) + " components exceeds the enumeration cap");
    }
    const double alpha_sum = sum(problem.alpha);
    std::vector<double> lgamma_alpha(A);
    for (std::size_t a = 0; a < A; ++a) lgamma_alpha[a] = std::lgamma(problem.alpha[a]);
    const double prior_norm = std::lgamma(alpha_sum) - std::lgamma(alpha_sum + static_cast<double>(N));

    std::size_t total = 1;
    for (std::size_t n = 0; n < N; ++n) total *= A;

    std::vector<double> log_w(total);
    std::vector<std::size_t> z(N, 0);
    std::vector<std::size_t> counts(A, 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        std::fill(counts.begin(), counts.end(), 0);
        double lw = prior_norm;
        for (std::size_t n = 0; n < N; ++n) {
            z[n] = rest % A;
            rest /= A;
            ++counts[z[n]];
            lw += std::log(problem.at(n, z[n]));
        }
        for (std::size_t a = 0; a < A; ++a) {
            lw += std::lgamma(problem.alpha[a] + static_cast<double>(counts[a])) - lgamma_alpha[a];
        }
        log_w[idx] = lw;
    }
    ExactPosterior out;
    out.log_evidence = log_sum_exp(log_w);
    out.mean_pi.assign(A, 0.0);
    out.responsibilities.assign(N * A, 0.0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        const double w = std::exp(log_w[idx] - out.log_evidence);
        std::size_t rest = idx;
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t n = 0; n < N; ++n) {
            const auto a = rest % A;
            rest /= A;
            ++counts[a];
            out.responsibilities[n * A + a] += w;
        }
        for (std::size_t a = 0; a < A; ++a) {
            out.mean_pi[a] += w * (problem.alpha[a] + static_cast<double>(counts[a])) /
                              (alpha_sum + static_cast<double>(N));
        }
    }
    return out;
}

SentencePosterior infer_sentence(std::span<const TokenId> words, const AllowedMask& mask,
                                 const ModelParams& params, const FitConfig& cfg,
                                 std::span<const double> warm_gamma) {
    const auto problem = make_problem(words, mask, params);
    const InnerOptions opts{cfg.inner_iterations, cfg.inner_tolerance};
    SentencePosterior out = cfg.engine == InferenceEngine::variational
                                ? variational_posterior(problem, opts, warm_gamma)
                                : ep_posterior(problem, opts);
    out.components.assign(mask.components().begin(), mask.components().end());
    return out;
}

}  // namespace bayesum
