#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bayesum/corpus.hpp"
#include "bayesum/em.hpp"
#include "bayesum/model.hpp"

namespace bayesum {

struct ModelMeta {
    std::string fields;       // FieldSet label the model was fitted with
    std::string config;       // FitConfig fingerprint
    std::string config_hash;  // hex FNV-1a of config
};

struct LoadedModel {
    ModelParams params;
    std::vector<std::string> vocab;
    ModelMeta meta;
};

/// Writes meta.json, vocab.tsv, general.tsv, documents/<k>.tsv,
/// queries/<j>.tsv and, when non-empty, trace.csv. The directory is built
/// beside the target and renamed into place.
void save_params(const std::filesystem::path& dir, const ModelParams& params, const std::vector<std::string>& vocab,
                 const ModelMeta& meta, const std::vector<FitTraceEntry>& trace = {});

LoadedModel load_params(const std::filesystem::path& dir);

/// Throws DataError unless the model's vocabulary and ids match the corpus.
void check_model_vocab(const LoadedModel& model, const Corpus& corpus);

ModelMeta make_meta(const FitConfig& cfg);

}  // namespace bayesum
