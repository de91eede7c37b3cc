#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dgt/tensor.hpp"

namespace dgt {

// One sentence with its dependency parse and gold trigger annotations.
// An edge (head, dep, label) points from the governing word to its dependent;
// that orientation is the "forward" direction everywhere downstream.
struct DepEdge {
  int head = 0;
  int dep = 0;
  std::string label;
  bool operator==(const DepEdge&) const = default;
};

struct Trigger {
  int index = 0;
  std::string type;
  bool operator==(const Trigger&) const = default;
};

struct SentenceExample {
  std::vector<std::string> tokens;
  std::vector<std::string> pos;
  std::vector<std::string> ner;
  std::vector<DepEdge> edges;
  std::vector<Trigger> triggers;
  bool operator==(const SentenceExample&) const = default;
};

// string <-> id table. Id 0 is reserved for UNK ("<unk>") or NONE depending on
// the vocabulary; dependency-label vocabularies reserve nothing and treat
// unknown labels as errors at encode time.
class Vocab {
 public:
  Vocab() = default;
  explicit Vocab(std::string reserved0) { add(reserved0); }

  int add(const std::string& s) {
    auto it = index_.find(s);
    if (it != index_.end()) return it->second;
    int id = static_cast<int>(entries_.size());
    index_.emplace(s, id);
    entries_.push_back(s);
    return id;
  }

  // id of s, or 0 when unregistered (only valid for vocabs with a reserved 0)
  int lookup(const std::string& s) const {
    auto it = index_.find(s);
    return it == index_.end() ? 0 : it->second;
  }

  std::optional<int> find(const std::string& s) const {
    auto it = index_.find(s);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& name(int id) const { return entries_.at(static_cast<size_t>(id)); }
  int size() const { return static_cast<int>(entries_.size()); }
  const std::vector<std::string>& entries() const { return entries_; }

 private:
  std::unordered_map<std::string, int> index_;
  std::vector<std::string> entries_;
};

struct Vocabs {
  Vocab word;      // id 0 = <unk>
  Vocab pos;       // id 0 = <unk>
  Vocab ner;       // id 0 = <unk>
  Vocab deplabel;  // no reservation; L = deplabel.size()
  Vocab event;     // id 0 = NONE
};

struct EncodedEdge {
  int head = 0;
  int dep = 0;
  int label = 0;
};

struct EncodedSentence {
  std::vector<int> words;
  std::vector<int> pos;
  std::vector<int> ner;
  std::vector<int> positions;  // 0..n-1
  std::vector<EncodedEdge> edges;
  std::vector<int> gold;  // per-token event class, 0 = NONE
  int n() const { return static_cast<int>(words.size()); }
};

constexpr int kDefaultMaxLen = 50;

// JSON Lines corpus IO. Schema per line:
// {"tokens":[...], "pos":[...], "ner":[...], "edges":[[h,d,"label"],...],
//  "triggers":[[i,"TYPE"],...]}
std::vector<SentenceExample> parse_jsonl(const std::string& path, bool require_triggers = true);
void write_jsonl(const std::string& path, const std::vector<SentenceExample>& examples);

// Vocabularies from the training split only; first-occurrence order.
// min_count applies to words (rarer ones fall back to UNK).
Vocabs build_vocabs(const std::vector<SentenceExample>& examples, int min_count = 1);

EncodedSentence encode_sentence(const SentenceExample& ex, const Vocabs& vocabs,
                                int max_len = kDefaultMaxLen);

// Batches of indices into the example list. Deterministic shuffle per seed;
// no shuffle when seed is nullopt. Final partial batch is emitted.
std::vector<std::vector<int>> batch_iter(int n_examples, int batch_size,
                                         std::optional<uint64_t> shuffle_seed);

// Two sentences form an ambiguous pair when everything except at least one
// edge label matches (tokens, POS, NER, unlabeled edge set) and their trigger
// annotations differ. Returns index pairs (i < j).
std::vector<std::pair<int, int>> ambiguous_pairs(const std::vector<SentenceExample>& examples);

}  // namespace dgt
