#include "dgt/eval.hpp"

#include <sstream>

#include "json.hpp"

namespace dgt {

namespace {

void finish(int64_t tp, int64_t predicted, int64_t gold, double& p, double& r, double& f1) {
  if (predicted == 0 && gold == 0) {
    p = r = f1 = 1.0;
    return;
  }
  p = predicted > 0 ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
  r = gold > 0 ? static_cast<double>(tp) / static_cast<double>(gold) : 0.0;
  f1 = p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

}  // namespace

EvalReport score_predictions(const std::vector<std::vector<int>>& predicted,
                             const std::vector<std::vector<int>>& gold, const Vocab& event_vocab) {
  if (predicted.size() != gold.size())
    throw ValidationError("score_predictions: prediction/gold sentence counts differ");

  EvalReport rep;
  for (size_t s = 0; s < predicted.size(); ++s) {
    if (predicted[s].size() != gold[s].size())
      throw ValidationError("score_predictions: token counts differ in sentence " + std::to_string(s));
    for (size_t i = 0; i < predicted[s].size(); ++i) {
      int p = predicted[s][i];
      int g = gold[s][i];
      if (p != 0) {
        ++rep.predicted;
        ++rep.per_class[event_vocab.name(p)].predicted;
      }
      if (g != 0) {
        ++rep.gold;
        ++rep.per_class[event_vocab.name(g)].gold;
      }
      if (p != 0 && p == g) {
        ++rep.tp;
        ++rep.per_class[event_vocab.name(p)].tp;
      }
    }
  }
  finish(rep.tp, rep.predicted, rep.gold, rep.precision, rep.recall, rep.f1);
  for (auto& [name, c] : rep.per_class) finish(c.tp, c.predicted, c.gold, c.precision, c.recall, c.f1);
  return rep;
}

EvalReport evaluate_model(const TriggerModel& model, const std::vector<EncodedSentence>& sentences,
                          const Vocab& event_vocab) {
  std::vector<std::vector<int>> predicted, gold;
  predicted.reserve(sentences.size());
  gold.reserve(sentences.size());
  for (const auto& s : sentences) {
    predicted.push_back(model.predict(s));
    gold.push_back(s.gold);
  }
  return score_predictions(predicted, gold, event_vocab);
}

std::string format_report(const EvalReport& report) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof(line), "%-16s %6s %6s %6s %8s %8s %8s\n", "class", "tp", "pred", "gold",
                "P", "R", "F1");
  os << line;
  for (const auto& [name, c] : report.per_class) {
    std::snprintf(line, sizeof(line), "%-16s %6lld %6lld %6lld %8.4f %8.4f %8.4f\n", name.c_str(),
                  static_cast<long long>(c.tp), static_cast<long long>(c.predicted),
                  static_cast<long long>(c.gold), c.precision, c.recall, c.f1);
    os << line;
  }
  std::snprintf(line, sizeof(line), "%-16s %6lld %6lld %6lld %8.4f %8.4f %8.4f\n", "micro",
                static_cast<long long>(report.tp), static_cast<long long>(report.predicted),
                static_cast<long long>(report.gold), report.precision, report.recall, report.f1);
  os << line;
  return os.str();
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["tp"] = report.tp;
  j["predicted"] = report.predicted;
  j["gold"] = report.gold;
  j["precision"] = report.precision;
  j["recall"] = report.recall;
  j["f1"] = report.f1;
  nlohmann::ordered_json classes = nlohmann::ordered_json::object();
  for (const auto& [name, c] : report.per_class) {
    classes[name] = {{"tp", c.tp},          {"predicted", c.predicted}, {"gold", c.gold},
                     {"precision", c.precision}, {"recall", c.recall},  {"f1", c.f1}};
  }
  j["per_class"] = std::move(classes);
  return j.dump();
}

}  // namespace dgt
