#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bayesum/corpus.hpp"
#include "bayesum/langmodel.hpp"

namespace bayesum {

enum class ComponentKind { general, document, query };

struct ComponentLabel {
    ComponentKind kind;
    std::size_t index;  // document k or query j; 0 for general

    friend bool operator==(const ComponentLabel&, const ComponentLabel&) = default;
};

/// Component layout: 0 is general English, 1..K are documents and
/// K+1..K+J are queries.
class ComponentIndex {
  public:
    ComponentIndex(std::size_t num_documents, std::size_t num_queries)
        : m_docs(num_documents), m_queries(num_queries) {}

    std::size_t size() const { return 1 + m_docs + m_queries; }
    std::size_t num_documents() const { return m_docs; }
    std::size_t num_queries() const { return m_queries; }

    static constexpr std::size_t general() { return 0; }
    std::size_t document(std::size_t k) const;
    std::size_t query(std::size_t j) const;
    ComponentLabel label(std::size_t component) const;

  private:
    std::size_t m_docs;
    std::size_t m_queries;
};

/// Components a sentence of document k may draw from: general English,
/// document k itself and every query document k is relevant to.
class AllowedMask {
  public:
    static AllowedMask for_document(const ComponentIndex& layout, std::size_t k,
                                    std::span<const std::size_t> relevant_queries);
    /// Arbitrary sorted component subset that contains the general component.
    static AllowedMask from_components(std::vector<std::size_t> components);

    /// Sorted ascending; the first entry is always the general component.
    std::span<const std::size_t> components() const { return m_components; }
    std::size_t size() const { return m_components.size(); }
    bool allows(std::size_t component) const;
    /// Position of `component` within components(), or size() if masked.
    std::size_t slot(std::size_t component) const;
    std::vector<bool> to_bool(std::size_t total) const;

  private:
    std::vector<std::size_t> m_components;
};

/// {alpha, p^G, p^{d_k}, p^{q_j}}. Document and query models are stored
/// unsmoothed; the distribution a word is actually emitted from is
/// (1 - smoothing) * p^{(i)} + smoothing * p^G.
struct ModelParams {
    std::vector<double> alpha;
    UnigramModel general;
    std::vector<UnigramModel> documents;
    std::vector<UnigramModel> queries;
    std::vector<std::string> document_ids;
    std::vector<std::string> query_ids;
    double smoothing = 0.1;

    ComponentIndex layout() const { return {documents.size(), queries.size()}; }
    std::size_t vocab_size() const { return general.size(); }
    const UnigramModel& component(std::size_t i) const;
    /// Probability of w under component i's emission distribution.
    double emission(std::size_t i, TokenId w) const;
    std::size_t query_index(std::string_view id) const;
    /// Throws std::invalid_argument on any broken invariant.
    void validate() const;
};

enum class InferenceEngine { variational, ep };
enum class AlphaMode { fixed, learned };

struct FitConfig {
    InferenceEngine engine = InferenceEngine::variational;
    std::size_t max_iterations = 30;
    std::size_t inner_iterations = 50;
    /// Relative change of the evidence bound that stops EM.
    double tolerance = 1e-4;
    /// max |delta gamma| that stops the per-sentence fixed point.
    double inner_tolerance = 1e-6;
    AlphaMode alpha_mode = AlphaMode::fixed;
    std::uint64_t seed = 0;
    double smoothing = 0.1;
    /// Weight of each observed query token in the query-model M-step.
    double query_word_weight = 1.0;
    FieldSet fields = FieldSet::all();
    std::size_t threads = 1;

    void validate() const;
    /// Stable text form, hashed into model metadata.
    std::string fingerprint() const;
};

/// Approximate posterior for one sentence over its allowed components.
struct SentencePosterior {
    std::vector<std::size_t> components;
    /// Dirichlet parameters of q(pi), aligned with components.
    std::vector<double> gamma;
    /// Row-major words x components; each row sums to one.
    std::vector<double> responsibilities;
    double log_evidence = 0.0;
    std::size_t iterations = 0;
    std::size_t skipped_updates = 0;

    std::size_t num_words() const { return components.empty() ? 0 : responsibilities.size() / components.size(); }
    /// Responsibility of any component in the full layout; 0 when masked.
    double responsibility(std::size_t word, std::size_t component) const;
    /// gamma / sum(gamma), aligned with components.
    std::vector<double> mean_pi() const;
};

std::string_view engine_name(InferenceEngine e);
InferenceEngine parse_engine(std::string_view name);

}  // namespace bayesum
