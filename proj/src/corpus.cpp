#include "dgt/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "dgt/rng.hpp"
#include "json.hpp"

namespace dgt {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void line_error(const std::string& path, size_t line_no, const std::string& what) {
  throw ValidationError(path + ":" + std::to_string(line_no) + ": " + what);
}

std::vector<std::string> string_array(const ordered_json& j, const char* key, const std::string& path,
                                      size_t line_no) {
  if (!j.contains(key)) line_error(path, line_no, std::string("missing key \"") + key + "\"");
  const auto& arr = j.at(key);
  if (!arr.is_array()) line_error(path, line_no, std::string("\"") + key + "\" is not an array");
  std::vector<std::string> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_string()) line_error(path, line_no, std::string("\"") + key + "\" holds a non-string");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

std::vector<SentenceExample> parse_jsonl(const std::string& path, bool require_triggers) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open corpus file: " + path);

  std::vector<SentenceExample> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      line_error(path, line_no, std::string("malformed JSON: ") + e.what());
    }

    SentenceExample ex;
    ex.tokens = string_array(j, "tokens", path, line_no);
    ex.pos = string_array(j, "pos", path, line_no);
    ex.ner = string_array(j, "ner", path, line_no);
    int n = static_cast<int>(ex.tokens.size());
    if (ex.pos.size() != ex.tokens.size() || ex.ner.size() != ex.tokens.size())
      line_error(path, line_no, "tokens/pos/ner lengths differ");

    if (!j.contains("edges")) line_error(path, line_no, "missing key \"edges\"");
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
          !e[2].is_string())
        line_error(path, line_no, "edge is not [head:int, dep:int, label:str]");
      DepEdge edge{e[0].get<int>(), e[1].get<int>(), e[2].get<std::string>()};
      if (edge.head < 0 || edge.head >= n || edge.dep < 0 || edge.dep >= n)
        line_error(path, line_no, "edge index out of range for " + std::to_string(n) + " tokens");
      if (edge.head == edge.dep) line_error(path, line_no, "self-loop edge");
      ex.edges.push_back(std::move(edge));
    }

    if (j.contains("triggers")) {
      std::vector<bool> seen(static_cast<size_t>(n), false);
      for (const auto& t : j.at("triggers")) {
        if (!t.is_array() || t.size() != 2 || !t[0].is_number_integer() || !t[1].is_string())
          line_error(path, line_no, "trigger is not [index:int, type:str]");
        Trigger trig{t[0].get<int>(), t[1].get<std::string>()};
        if (trig.index < 0 || trig.index >= n)
          line_error(path, line_no, "trigger index out of range for " + std::to_string(n) + " tokens");
        if (seen[static_cast<size_t>(trig.index)])
          line_error(path, line_no, "duplicate trigger at token " + std::to_string(trig.index));
        seen[static_cast<size_t>(trig.index)] = true;
        ex.triggers.push_back(std::move(trig));
      }
    } else if (require_triggers) {
      line_error(path, line_no, "missing key \"triggers\"");
    }

    out.push_back(std::move(ex));
  }
  return out;
}

void write_jsonl(const std::string& path, const std::vector<SentenceExample>& examples) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write corpus file: " + path);
  for (const auto& ex : examples) {
    ordered_json j;
    j["tokens"] = ex.tokens;
    j["pos"] = ex.pos;
    j["ner"] = ex.ner;
    auto edges = ordered_json::array();
    for (const auto& e : ex.edges) edges.push_back({e.head, e.dep, e.label});
    j["edges"] = std::move(edges);
    auto triggers = ordered_json::array();
    for (const auto& t : ex.triggers) triggers.push_back({t.index, t.type});
    j["triggers"] = std::move(triggers);
    out << j.dump() << "\n";
  }
}

Vocabs build_vocabs(const std::vector<SentenceExample>& examples, int min_count) {
  Vocabs v;
  v.word = Vocab("<unk>");
  v.pos = Vocab("<unk>");
  v.ner = Vocab("<unk>");
  v.event = Vocab("NONE");

  std::unordered_map<std::string, int> word_count;
  for (const auto& ex : examples)
    for (const auto& w : ex.tokens) ++word_count[w];

  for (const auto& ex : examples) {
    for (const auto& w : ex.tokens)
      if (word_count[w] >= min_count) v.word.add(w);
    for (const auto& p : ex.pos) v.pos.add(p);
    for (const auto& t : ex.ner) v.ner.add(t);
    for (const auto& e : ex.edges) v.deplabel.add(e.label);
    for (const auto& t : ex.triggers) v.event.add(t.type);
  }
  return v;
}

EncodedSentence encode_sentence(const SentenceExample& ex, const Vocabs& vocabs, int max_len) {
  if (max_len < 1) throw ValidationError("encode_sentence: max_len must be >= 1");
  int n = std::min(static_cast<int>(ex.tokens.size()), max_len);

  EncodedSentence enc;
  enc.words.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    enc.words.push_back(vocabs.word.lookup(ex.tokens[static_cast<size_t>(i)]));
    enc.pos.push_back(vocabs.pos.lookup(ex.pos[static_cast<size_t>(i)]));
    enc.ner.push_back(vocabs.ner.lookup(ex.ner[static_cast<size_t>(i)]));
    enc.positions.push_back(i);
  }
  enc.gold.assign(static_cast<size_t>(n), 0);

  for (const auto& e : ex.edges) {
    if (e.head >= n || e.dep >= n) continue;  // truncated away
    auto label = vocabs.deplabel.find(e.label);
    if (!label)
      throw ValidationError("encode_sentence: unregistered dependency label \"" + e.label +
                            "\" (labels index adjacency channels and cannot be mapped to UNK)");
    enc.edges.push_back({e.head, e.dep, *label});
  }
  for (const auto& t : ex.triggers) {
    if (t.index >= n) continue;
    auto ev = vocabs.event.find(t.type);
    if (!ev) throw ValidationError("encode_sentence: unregistered event type \"" + t.type + "\"");
    enc.gold[static_cast<size_t>(t.index)] = *ev;
  }
  return enc;
}

std::vector<std::vector<int>> batch_iter(int n_examples, int batch_size,
                                         std::optional<uint64_t> shuffle_seed) {
  if (batch_size < 1) throw ValidationError("batch_iter: batch_size must be >= 1");
  std::vector<int> order(static_cast<size_t>(n_examples));
  for (int i = 0; i < n_examples; ++i) order[static_cast<size_t>(i)] = i;
  if (shuffle_seed) {
    Rng rng(*shuffle_seed);
    rng.shuffle(order);
  }
  std::vector<std::vector<int>> batches;
  for (int start = 0; start < n_examples; start += batch_size) {
    int end = std::min(n_examples, start + batch_size);
    batches.emplace_back(order.begin() + start, order.begin() + end);
  }
  return batches;
}

std::vector<std::pair<int, int>> ambiguous_pairs(const std::vector<SentenceExample>& examples) {
  // Group by everything except edge labels, then pair up members whose
  // labeled edges and triggers both differ.
  auto signature = [](const SentenceExample& ex) {
    std::ostringstream os;
    for (const auto& t : ex.tokens) os << t << '\x1f';
    os << '\x1e';
    for (const auto& p : ex.pos) os << p << '\x1f';
    os << '\x1e';
    for (const auto& t : ex.ner) os << t << '\x1f';
    os << '\x1e';
    std::vector<std::pair<int, int>> unlabeled;
    for (const auto& e : ex.edges) unlabeled.emplace_back(e.head, e.dep);
    std::sort(unlabeled.begin(), unlabeled.end());
    for (const auto& [h, d] : unlabeled) os << h << ',' << d << ';';
    return os.str();
  };

  auto labeled_key = [](const SentenceExample& ex) {
    std::vector<std::tuple<int, int, std::string>> edges;
    for (const auto& e : ex.edges) edges.emplace_back(e.head, e.dep, e.label);
    std::sort(edges.begin(), edges.end());
    return edges;
  };

  std::map<std::string, std::vector<int>> groups;
  for (size_t i = 0; i < examples.size(); ++i) groups[signature(examples[i])].push_back(static_cast<int>(i));

  std::vector<std::pair<int, int>> pairs;
  for (const auto& [sig, members] : groups) {
    for (size_t a = 0; a < members.size(); ++a) {
      for (size_t b = a + 1; b < members.size(); ++b) {
        const auto& ea = examples[static_cast<size_t>(members[a])];
        const auto& eb = examples[static_cast<size_t>(members[b])];
        if (labeled_key(ea) != labeled_key(eb) && ea.triggers != eb.triggers)
          pairs.emplace_back(members[a], members[b]);
      }
    }
  }
  return pairs;
}

}  // namespace dgt
