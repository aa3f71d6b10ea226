#include "bayesum/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bayesum/error.hpp"
#include "bayesum/io.hpp"

namespace bayesum {

std::size_t ComponentIndex::document(std::size_t k) const {
    if (k >= m_docs) throw std::out_of_range("document component out of range");
    return 1 + k;
}

std::size_t ComponentIndex::query(std::size_t j) const {
    if (j >= m_queries) throw std::out_of_range("query component out of range");
    return 1 + m_docs + j;
}

ComponentLabel ComponentIndex::label(std::size_t component) const {
    if (component == 0) return {ComponentKind::general, 0};
    if (component <= m_docs) return {ComponentKind::document, component - 1};
    if (component < size()) return {ComponentKind::query, component - 1 - m_docs};
    throw std::out_of_range("component out of range");
}

AllowedMask AllowedMask::for_document(const ComponentIndex& layout, std::size_t k,
                                      std::span<const std::size_t> relevant_queries) {
    AllowedMask m;
    m.m_components.reserve(2 + relevant_queries.size());
    m.m_components.push_back(ComponentIndex::general());
    m.m_components.push_back(layout.document(k));
    for (auto j : relevant_queries) m.m_components.push_back(layout.query(j));
    std::sort(m.m_components.begin() + 2, m.m_components.end());
    m.m_components.erase(std::unique(m.m_components.begin(), m.m_components.end()), m.m_components.end());
    return m;
}

AllowedMask AllowedMask::from_components(std::vector<std::size_t> components) {
    std::sort(components.begin(), components.end());
    components.erase(std::unique(components.begin(), components.end()), components.end());
    if (components.empty() || components.front() != ComponentIndex::general()) {
        throw std::invalid_argument("mask must allow the general component");
    }
    AllowedMask m;
    m.m_components = std::move(components);
    return m;
}

bool AllowedMask::allows(std::size_t component) const {
    return std::binary_search(m_components.begin(), m_components.end(), component);
}

std::size_t AllowedMask::slot(std::size_t component) const {
    auto it = std::lower_bound(m_components.begin(), m_components.end(), component);
    if (it == m_components.end() || *it != component) return m_components.size();
    return static_cast<std::size_t>(it - m_components.begin());
}

std::vector<bool> AllowedMask::to_bool(std::size_t total) const {
    std::vector<bool> out(total, false);
    for (auto c : m_components) out.at(c) = true;
    return out;
}

const UnigramModel& ModelParams::component(std::size_t i) const {
    if (i == 0) return general;
    if (i <= documents.size()) return documents[i - 1];
    return queries.at(i - 1 - documents.size());
}

double ModelParams::emission(std::size_t i, TokenId w) const {
    if (i == 0) return general[w];
    return (1.0 - smoothing) * component(i)[w] + smoothing * general[w];
}

std::size_t ModelParams::query_index(std::string_view id) const {
    auto it = std::find(query_ids.begin(), query_ids.end(), id);
    if (it == query_ids.end()) throw DataError("unknown query id '" + std::string(id) + "'");
    return static_cast<std::size_t>(it - query_ids.begin());
}

void ModelParams::validate() const {
    const auto layout_size = 1 + documents.size() + queries.size();
    if (alpha.size() != layout_size) throw std::invalid_argument("alpha length must be 1+J+K");
    for (double a : alpha) {
        if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("alpha entries must be positive");
    }
    if (document_ids.size() != documents.size() || query_ids.size() != queries.size()) {
        throw std::invalid_argument("component ids do not match component models");
    }
    if (!(smoothing > 0.0 && smoothing < 1.0)) throw std::invalid_argument("smoothing must lie in (0,1)");
    const auto V = general.size();
    if (V == 0) throw std::invalid_argument("empty general model");
    for (double p : general.probs()) {
        if (!(p > 0.0)) throw std::invalid_argument("general model must be strictly positive");
    }
    for (const auto& m : documents) {
        if (m.size() != V) throw std::invalid_argument("document model vocabulary mismatch");
    }
    for (const auto& m : queries) {
        if (m.size() != V) throw std::invalid_argument("query model vocabulary mismatch");
    }
}

void FitConfig::validate() const {
    if (inner_iterations == 0) throw std::invalid_argument("inner iterations must be positive");
    if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (!(inner_tolerance > 0.0)) throw std::invalid_argument("inner tolerance must be positive");
    if (!(smoothing > 0.0 && smoothing < 1.0)) throw std::invalid_argument("smoothing must lie in (0,1)");
    if (!(query_word_weight >= 0.0)) throw std::invalid_argument("query word weight must be non-negative");
}

std::string FitConfig::fingerprint() const {
    std::ostringstream ss;
    ss << "engine=" << engine_name(engine) << ";max_iterations=" << max_iterations
       << ";inner_iterations=" << inner_iterations << ";tolerance=" << format_double(tolerance)
       << ";inner_tolerance=" << format_double(inner_tolerance)
       << ";alpha=" << (alpha_mode == AlphaMode::fixed ? "fixed" : "learned") << ";seed=" << seed
       << ";smoothing=" << format_double(smoothing)
       << ";query_word_weight=" << format_double(query_word_weight) << ";fields=" << fields.label();
    return ss.str();
}

double SentencePosterior::responsibility(std::size_t word, std::size_t component) const {
    auto it = std::lower_bound(components.begin(), components.end(), component);
    if (it == components.end() || *it != component) return 0.0;
    const auto a = static_cast<std::size_t>(it - components.begin());
    return responsibilities.at(word * components.size() + a);
}

std::vector<double> SentencePosterior::mean_pi() const {
    double total = 0.0;
    for (double g : gamma) total += g;
    std::vector<double> out(gamma.size());
    for (std::size_t i = 0; i < gamma.size(); ++i) out[i] = gamma[i] / total;
    return out;
}

std::string_view engine_name(InferenceEngine e) {
    return e == InferenceEngine::variational ? "variational" : "ep";
}

InferenceEngine parse_engine(std::string_view name) {
    if (name == "variational" || name == "vb") return InferenceEngine::variational;
    if (name == "ep") return InferenceEngine::ep;
    throw std::invalid_argument("unknown inference engine '" + std::string(name) + "'");
}

}  // namespace bayesum
