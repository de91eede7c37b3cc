#include "dgt/checkpoint.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dgt {

namespace {

using nlohmann::ordered_json;

std::string hash_hex(uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ordered_json dump_vocab(const Vocab& v) { return ordered_json(v.entries()); }

Vocab load_vocab(const ordered_json& j) {
  Vocab v;
  for (const auto& e : j) v.add(e.get<std::string>());
  return v;
}

}  // namespace

uint64_t vocab_hash(const Vocab& vocab) {
  uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (const auto& entry : vocab.entries()) {
    for (unsigned char c : entry) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0x1f;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string kind_to_string(ModelKind kind) { return kind == ModelKind::Gcn ? "gcn" : "moganed"; }

ModelKind kind_from_string(const std::string& s) {
  if (s == "gcn") return ModelKind::Gcn;
  if (s == "moganed") return ModelKind::Moganed;
  throw ValidationError("unknown model kind: " + s);
}

void save_checkpoint(const TriggerModel& model, const Vocabs& vocabs, const std::string& path) {
  const ModelConfig& c = model.config();
  ordered_json j;
  j["format"] = kCheckpointFormat;

  ordered_json cfg;
  cfg["kind"] = kind_to_string(c.kind);
  cfg["gtn"] = c.gtn;
  cfg["K"] = c.K;
  cfg["T"] = c.T;
  cfg["leaky_slope"] = c.leaky_slope;
  cfg["max_len"] = c.max_len;
  cfg["dims"] = {{"word_dim", c.dims.word_dim},   {"feat_dim", c.dims.feat_dim},
                 {"lstm_hidden", c.dims.lstm_hidden}, {"graph_dim", c.dims.graph_dim},
                 {"attn_dim", c.dims.attn_dim},   {"agg_dim", c.dims.agg_dim},
                 {"cls_hidden", c.dims.cls_hidden}};
  cfg["n_words"] = c.n_words;
  cfg["n_pos"] = c.n_pos;
  cfg["n_ner"] = c.n_ner;
  cfg["n_labels"] = c.n_labels;
  cfg["n_classes"] = c.n_classes;
  cfg["seed"] = c.seed;
  j["config"] = std::move(cfg);

  j["vocabs"] = {{"word", dump_vocab(vocabs.word)},
                 {"pos", dump_vocab(vocabs.pos)},
                 {"ner", dump_vocab(vocabs.ner)},
                 {"deplabel", dump_vocab(vocabs.deplabel)},
                 {"event", dump_vocab(vocabs.event)}};
  j["vocab_hashes"] = {{"word", hash_hex(vocab_hash(vocabs.word))},
                       {"pos", hash_hex(vocab_hash(vocabs.pos))},
                       {"ner", hash_hex(vocab_hash(vocabs.ner))},
                       {"deplabel", hash_hex(vocab_hash(vocabs.deplabel))},
                       {"event", hash_hex(vocab_hash(vocabs.event))}};

  std::vector<std::pair<std::string, TensorPtr>> sorted = model.params();
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  ordered_json params = ordered_json::object();
  for (const auto& [name, p] : sorted) {
    params[name] = {{"shape", p->shape}, {"data", p->data}};
  }
  j["params"] = std::move(params);

  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write checkpoint: " + path);
  out << j.dump() << "\n";
}

LoadedModel load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open checkpoint: " + path);
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("checkpoint " + path + " is corrupt: " + e.what());
  }

  if (!j.contains("format") || j.at("format").get<std::string>() != kCheckpointFormat)
    throw ValidationError("checkpoint " + path + ": unsupported format tag");

  const auto& cfg = j.at("config");
  ModelConfig c;
  c.kind = kind_from_string(cfg.at("kind").get<std::string>());
  c.gtn = cfg.at("gtn").get<bool>();
  c.K = cfg.at("K").get<int>();
  c.T = cfg.at("T").get<int>();
  c.leaky_slope = cfg.at("leaky_slope").get<double>();
  c.max_len = cfg.at("max_len").get<int>();
  const auto& dims = cfg.at("dims");
  c.dims.word_dim = dims.at("word_dim").get<int>();
  c.dims.feat_dim = dims.at("feat_dim").get<int>();
  c.dims.lstm_hidden = dims.at("lstm_hidden").get<int>();
  c.dims.graph_dim = dims.at("graph_dim").get<int>();
  c.dims.attn_dim = dims.at("attn_dim").get<int>();
  c.dims.agg_dim = dims.at("agg_dim").get<int>();
  c.dims.cls_hidden = dims.at("cls_hidden").get<int>();
  c.n_words = cfg.at("n_words").get<int>();
  c.n_pos = cfg.at("n_pos").get<int>();
  c.n_ner = cfg.at("n_ner").get<int>();
  c.n_labels = cfg.at("n_labels").get<int>();
  c.n_classes = cfg.at("n_classes").get<int>();
  c.seed = cfg.at("seed").get<uint64_t>();

  LoadedModel loaded;
  const auto& jv = j.at("vocabs");
  loaded.vocabs.word = load_vocab(jv.at("word"));
  loaded.vocabs.pos = load_vocab(jv.at("pos"));
  loaded.vocabs.ner = load_vocab(jv.at("ner"));
  loaded.vocabs.deplabel = load_vocab(jv.at("deplabel"));
  loaded.vocabs.event = load_vocab(jv.at("event"));

  const auto& hashes = j.at("vocab_hashes");
  const std::pair<const char*, const Vocab*> checks[] = {{"word", &loaded.vocabs.word},
                                                         {"pos", &loaded.vocabs.pos},
                                                         {"ner", &loaded.vocabs.ner},
                                                         {"deplabel", &loaded.vocabs.deplabel},
                                                         {"event", &loaded.vocabs.event}};
  for (const auto& [name, vocab] : checks) {
    if (hashes.at(name).get<std::string>() != hash_hex(vocab_hash(*vocab)))
      throw ValidationError(std::string("checkpoint ") + path + ": vocab hash mismatch for " + name);
  }

  loaded.model = std::make_unique<TriggerModel>(c);
  const auto& params = j.at("params");
  size_t assigned = 0;
  for (const auto& [name, p] : loaded.model->params()) {
    if (!params.contains(name))
      throw ValidationError("checkpoint " + path + ": missing parameter " + name);
    const auto& entry = params.at(name);
    std::vector<int> shape = entry.at("shape").get<std::vector<int>>();
    if (shape != p->shape)
      throw ValidationError("checkpoint " + path + ": shape mismatch for " + name + ": file " +
                            shape_str(shape) + " vs model " + shape_str(p->shape));
    std::vector<double> data = entry.at("data").get<std::vector<double>>();
    if (data.size() != p->data.size())
      throw ValidationError("checkpoint " + path + ": data size mismatch for " + name);
    p->data = std::move(data);
    ++assigned;
  }
  if (assigned != params.size())
    throw ValidationError("checkpoint " + path + ": unexpected extra parameters in file");
  return loaded;
}

}  // namespace dgt
