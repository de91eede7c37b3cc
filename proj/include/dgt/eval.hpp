#pragma once

#include <map>
#include <string>
#include <vector>

#include "dgt/corpus.hpp"
#include "dgt/models.hpp"

namespace dgt {

struct ClassScore {
  int64_t tp = 0, predicted = 0, gold = 0;
  double precision = 0, recall = 0, f1 = 0;
};

// Micro P/R/F1 over (token, type) trigger predictions. A prediction is
// correct iff the same token carries the same gold type; a type mismatch on a
// gold trigger token counts as both a false positive and a false negative.
struct EvalReport {
  int64_t tp = 0, predicted = 0, gold = 0;
  double precision = 0, recall = 0, f1 = 0;
  std::map<std::string, ClassScore> per_class;
};

// No predictions and no gold -> P = R = F1 = 1 by convention.
EvalReport score_predictions(const std::vector<std::vector<int>>& predicted,
                             const std::vector<std::vector<int>>& gold, const Vocab& event_vocab);

EvalReport evaluate_model(const TriggerModel& model, const std::vector<EncodedSentence>& sentences,
                          const Vocab& event_vocab);

std::string format_report(const EvalReport& report);
std::string report_to_json(const EvalReport& report);

}  // namespace dgt
