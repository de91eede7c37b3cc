#pragma once

#include <cstdint>

#include "dgt/corpus.hpp"

namespace dgt {

// Synthetic trigger-detection corpus. The ambiguous slice consists of sentence
// pairs that agree on every surface feature and on the unlabeled parse, and
// disagree only in one dependency label; that label alone decides the trigger
// type. A label-blind model therefore cannot separate the members of a pair.
struct GenConfig {
  int n_train = 2000;
  int n_dev = 200;
  int n_test = 200;
  double ambiguity = 0.5;  // fraction of each split made of pair members
  uint64_t seed = 42;
};

struct SynthCorpus {
  std::vector<SentenceExample> train, dev, test;
};

SynthCorpus generate_synthetic(const GenConfig& config);

// Writes train.jsonl / dev.jsonl / test.jsonl under dir (created if missing).
void write_corpus_dir(const SynthCorpus& corpus, const std::string& dir);

}  // namespace dgt
