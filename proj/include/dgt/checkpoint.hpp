#pragma once

#include <memory>
#include <string>

#include "dgt/corpus.hpp"
#include "dgt/models.hpp"

namespace dgt {

inline constexpr const char* kCheckpointFormat = "dgt-ckpt-v1";

struct LoadedModel {
  std::unique_ptr<TriggerModel> model;
  Vocabs vocabs;
};

// Single JSON document: format tag, model config, vocab tables + FNV-1a
// hashes, and all parameters (sorted by name, decimal floats that round-trip
// float64 exactly).
void save_checkpoint(const TriggerModel& model, const Vocabs& vocabs, const std::string& path);
LoadedModel load_checkpoint(const std::string& path);

uint64_t vocab_hash(const Vocab& vocab);

std::string kind_to_string(ModelKind kind);
ModelKind kind_from_string(const std::string& s);

}  // namespace dgt
