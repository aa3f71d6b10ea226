#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bayesum/corpus.hpp"
#include "bayesum/inference.hpp"
#include "bayesum/model.hpp"

namespace bayesum {

AllowedMask document_mask(const Corpus& corpus, std::size_t k);

/// p^G: corpus MLE with add-epsilon; p^{d_k}, p^{q_j}: MLE mixed 50/50 with
/// uniform (uniform for empty queries); alpha = 2 for general English, 1
/// elsewhere.
ModelParams init_params(const Corpus& corpus, const FitConfig& cfg);

struct FitTraceEntry {
    std::size_t iteration = 0;
    double bound = 0.0;
    double wall_seconds = 0.0;
};

struct FitResult {
    ModelParams params;
    std::vector<FitTraceEntry> trace;
    bool converged = false;
};

/// Alternates per-sentence inference (E) with re-estimation of every
/// component model from responsibility-weighted counts (M). Observed query
/// words count toward their query model. Emission distributions are the
/// stored models smoothed against p^G, so the M-step also splits each
/// component's counts between the component and p^G.
///
/// Throws NumericalError when the bound stops being finite.
FitResult em_fit(const Corpus& corpus, const FitConfig& cfg, std::optional<ModelParams> initial = std::nullopt);

/// Sum of ln p^{q_j}(q_jn) over selected query words, under the emission
/// distributions.
double query_log_likelihood(const Corpus& corpus, const ModelParams& params, FieldSet fields);

enum class EvidenceMode { approximate, exact };

/// Query-word log-likelihood plus per-sentence evidence. Exact mode
/// enumerates word sources and refuses corpora with a sentence above the
/// enumeration caps.
double log_evidence(const Corpus& corpus, const ModelParams& params, const FitConfig& cfg,
                    EvidenceMode mode = EvidenceMode::approximate);

/// Throws DataError when params were not built for this corpus.
void check_compatible(const Corpus& corpus, const ModelParams& params);

std::string format_trace_csv(const std::vector<FitTraceEntry>& trace);

}  // namespace bayesum
