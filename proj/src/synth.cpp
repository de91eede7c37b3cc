#include "dgt/synth.hpp"

#include <cmath>
#include <filesystem>

#include "dgt/rng.hpp"

namespace dgt {

namespace {

struct AmbigTemplate {
  std::vector<std::string> tokens, pos, ner;
  std::vector<DepEdge> fixed_edges;
  int amb_head, amb_dep;
  std::string label_a, label_b;
  std::string type_a, type_b;
  int trigger_index;
};

// Fixed surfaces on purpose: repeated instantiations collide across draws,
// which is what makes the pair structure dense enough to measure.
const std::vector<AmbigTemplate>& ambig_templates() {
  static const std::vector<AmbigTemplate> kTemplates = {
      {{"the", "police", "fired", "the", "protesters"},
       {"DET", "NOUN", "VERB", "DET", "NOUN"},
       {"O", "ORG", "O", "O", "PER"},
       {{1, 0, "det"}, {4, 3, "det"}, {2, 4, "nmod"}},
       2, 1, "nsubj", "obj", "ATTACK", "END_POSITION", 2},
      {{"the", "troops", "moved", "the", "convoy"},
       {"DET", "NOUN", "VERB", "DET", "NOUN"},
       {"O", "ORG", "O", "O", "VEH"},
       {{1, 0, "det"}, {4, 3, "det"}, {2, 1, "nsubj"}},
       2, 4, "obj", "iobj", "TRANSPORT", "MEET", 2},
      {{"the", "committee", "opened", "the", "offices"},
       {"DET", "NOUN", "VERB", "DET", "NOUN"},
       {"O", "ORG", "O", "O", "FAC"},
       {{1, 0, "det"}, {4, 3, "det"}, {2, 1, "nsubj"}},
       2, 4, "obj", "nmod", "ATTACK", "TRANSPORT", 2},
      {{"the", "director", "left", "the", "firm"},
       {"DET", "NOUN", "VERB", "DET", "NOUN"},
       {"O", "PER", "O", "O", "ORG"},
       {{1, 0, "det"}, {4, 3, "det"}, {2, 1, "nsubj"}},
       2, 4, "obj", "case", "END_POSITION", "TRANSPORT", 2},
      {{"the", "bank", "paid", "the", "staff"},
       {"DET", "NOUN", "VERB", "DET", "NOUN"},
       {"O", "ORG", "O", "O", "PER"},
       {{1, 0, "det"}, {4, 3, "det"}, {2, 4, "obj"}},
       2, 1, "nsubj", "iobj", "TRANSFER", "START_POSITION", 2},
      {{"the", "envoys", "met", "the", "ministers"},
       {"DET", "NOUN", "VERB", "DET", "NOUN"},
       {"O", "PER", "O", "O", "PER"},
       {{1, 0, "det"}, {4, 3, "det"}, {2, 1, "nsubj"}},
       2, 4, "obj", "advmod", "MEET", "START_POSITION", 2},
  };
  return kTemplates;
}

struct FillerVerb {
  std::string verb;
  std::string type;  // empty = no trigger
};

const std::vector<FillerVerb>& filler_verbs() {
  static const std::vector<FillerVerb> kVerbs = {
      {"attacked", "ATTACK"},      {"bombed", "ATTACK"},     {"traveled", "TRANSPORT"},
      {"departed", "TRANSPORT"},   {"gathered", "MEET"},     {"convened", "MEET"},
      {"resigned", "END_POSITION"},{"retired", "END_POSITION"}, {"joined", "START_POSITION"},
      {"hired", "START_POSITION"}, {"donated", "TRANSFER"},  {"wired", "TRANSFER"},
      {"watched", ""},             {"described", ""},        {"ignored", ""},
  };
  return kVerbs;
}

const std::vector<std::pair<std::string, std::string>>& filler_nouns() {
  static const std::vector<std::pair<std::string, std::string>> kNouns = {
      {"soldiers", "PER"}, {"workers", "PER"},  {"city", "GPE"},   {"village", "GPE"},
      {"embassy", "FAC"},  {"airport", "FAC"},  {"union", "ORG"},  {"agency", "ORG"},
      {"reporters", "PER"}, {"border", "LOC"},  {"harbor", "LOC"}, {"council", "ORG"},
  };
  return kNouns;
}

const std::vector<std::string>& filler_adjectives() {
  static const std::vector<std::string> kAdj = {"local", "foreign", "new", "former", "senior", "armed"};
  return kAdj;
}

std::pair<SentenceExample, SentenceExample> make_pair(const AmbigTemplate& t) {
  SentenceExample a;
  a.tokens = t.tokens;
  a.pos = t.pos;
  a.ner = t.ner;
  a.edges = t.fixed_edges;
  SentenceExample b = a;
  a.edges.push_back({t.amb_head, t.amb_dep, t.label_a});
  b.edges.push_back({t.amb_head, t.amb_dep, t.label_b});
  a.triggers.push_back({t.trigger_index, t.type_a});
  b.triggers.push_back({t.trigger_index, t.type_b});
  return {std::move(a), std::move(b)};
}

SentenceExample make_filler(Rng& rng) {
  const auto& verbs = filler_verbs();
  const auto& nouns = filler_nouns();
  const auto& adjs = filler_adjectives();
  const FillerVerb& fv = verbs[static_cast<size_t>(rng.index(verbs.size()))];
  const auto& [subj, subj_ner] = nouns[static_cast<size_t>(rng.index(nouns.size()))];
  const auto& [obj, obj_ner] = nouns[static_cast<size_t>(rng.index(nouns.size()))];

  SentenceExample ex;
  if (rng.chance(0.5)) {
    // the ADJ N V the N
    const std::string& adj = adjs[static_cast<size_t>(rng.index(adjs.size()))];
    ex.tokens = {"the", adj, subj, fv.verb, "the", obj};
    ex.pos = {"DET", "ADJ", "NOUN", "VERB", "DET", "NOUN"};
    ex.ner = {"O", "O", subj_ner, "O", "O", obj_ner};
    ex.edges = {{2, 0, "det"}, {2, 1, "amod"}, {3, 2, "nsubj"}, {5, 4, "det"}, {3, 5, "obj"}};
    if (!fv.type.empty()) ex.triggers.push_back({3, fv.type});
  } else {
    // the N V the N
    ex.tokens = {"the", subj, fv.verb, "the", obj};
    ex.pos = {"DET", "NOUN", "VERB", "DET", "NOUN"};
    ex.ner = {"O", subj_ner, "O", "O", obj_ner};
    ex.edges = {{1, 0, "det"}, {2, 1, "nsubj"}, {4, 3, "det"}, {2, 4, "obj"}};
    if (!fv.type.empty()) ex.triggers.push_back({2, fv.type});
  }
  return ex;
}

std::vector<SentenceExample> generate_split(int n, double ambiguity, Rng& rng) {
  int n_pairs = static_cast<int>(std::llround(static_cast<double>(n) * ambiguity / 2.0));
  n_pairs = std::min(n_pairs, n / 2);

  std::vector<SentenceExample> out;
  out.reserve(static_cast<size_t>(n));
  const auto& templates = ambig_templates();
  for (int i = 0; i < n_pairs; ++i) {
    auto [a, b] = make_pair(templates[static_cast<size_t>(rng.index(templates.size()))]);
    out.push_back(std::move(a));
    out.push_back(std::move(b));
  }
  while (static_cast<int>(out.size()) < n) out.push_back(make_filler(rng));
  rng.shuffle(out);
  return out;
}

}  // namespace

SynthCorpus generate_synthetic(const GenConfig& config) {
  if (config.n_train < 1 || config.n_dev < 1 || config.n_test < 1)
    throw ValidationError("generate_synthetic: split sizes must be >= 1");
  if (config.ambiguity < 0.0 || config.ambiguity > 1.0)
    throw ValidationError("generate_synthetic: ambiguity must lie in [0, 1]");

  Rng rng(config.seed);
  SynthCorpus corpus;
  corpus.train = generate_split(config.n_train, config.ambiguity, rng);
  corpus.dev = generate_split(config.n_dev, config.ambiguity, rng);
  corpus.test = generate_split(config.n_test, config.ambiguity, rng);
  return corpus;
}

void write_corpus_dir(const SynthCorpus& corpus, const std::string& dir) {
  std::filesystem::create_directories(dir);
  write_jsonl(dir + "/train.jsonl", corpus.train);
  write_jsonl(dir + "/dev.jsonl", corpus.dev);
  write_jsonl(dir + "/test.jsonl", corpus.test);
}

}  // namespace dgt
