#pragma once

#include <string>
#include <vector>

#include "dgt/corpus.hpp"
#include "dgt/graph.hpp"
#include "dgt/graphs.hpp"
#include "dgt/gtn.hpp"
#include "dgt/rng.hpp"
#include "dgt/tensor.hpp"

namespace dgt {

struct ModelDims {
  int word_dim = 100;
  int feat_dim = 50;  // POS / NER / position embeddings
  int lstm_hidden = 100;
  int graph_dim = 150;
  int attn_dim = 150;  // attention projection width in the multi-order gate
  int agg_dim = 100;   // hop-order aggregation scorer width
  int cls_hidden = 100;

  int token_dim() const { return word_dim + 3 * feat_dim; }
  int context_dim() const { return 2 * lstm_hidden; }

  static ModelDims tiny() {
    ModelDims d;
    d.word_dim = 8;
    d.feat_dim = 4;
    d.lstm_hidden = 6;
    d.graph_dim = 10;
    d.attn_dim = 8;
    d.agg_dim = 6;
    d.cls_hidden = 8;
    return d;
  }
};

struct ModelConfig {
  ModelKind kind = ModelKind::Gcn;
  bool gtn = false;
  int K = 1;  // stacked conv layers (Gcn)
  int T = 3;  // parallel hop orders (Moganed)
  double leaky_slope = 0.2;
  int max_len = kDefaultMaxLen;
  ModelDims dims;
  int n_words = 0;
  int n_pos = 0;
  int n_ner = 0;
  int n_labels = 0;   // L
  int n_classes = 0;  // event classes including NONE
  uint64_t seed = 42;
};

struct LstmDirParams {
  TensorPtr Wx;  // 4H x token_dim
  TensorPtr Wh;  // 4H x H
  TensorPtr b;   // 1 x 4H
};

// Weights of one gated convolution role (Eq.-style gate: A(u,v) *
// sigmoid(w_att . h_v + eps)).
struct GatedConvParams {
  TensorPtr W;      // d_out x d_in
  TensorPtr b;      // 1 x d_out
  TensorPtr w_att;  // d_in
  TensorPtr eps;    // 1 x 1
};

// Weights of one multi-order attention branch role: the gate is a masked row
// softmax of A(u,v) * leaky_relu(W_c [W_att h_u || W_att h_v]).
struct MoganedConvParams {
  TensorPtr W;      // d_out x d_in
  TensorPtr b;      // 1 x d_out
  TensorPtr W_att;  // d' x d_in
  TensorPtr W_c;    // 1 x 2d'
};

// Either graph model over the shared embedding + BiLSTM encoder. Parameters
// are created once (seeded) and shared across per-sentence graphs.
class TriggerModel {
 public:
  explicit TriggerModel(const ModelConfig& config);

  const ModelConfig& config() const { return config_; }
  const std::vector<std::pair<std::string, TensorPtr>>& params() const { return params_; }
  TensorPtr param(const std::string& name) const;
  int64_t trainable_scalars() const;
  void zero_grad() const;

  // Graph builders; call g.forward()/g.backward() on the result.
  NodeId build_logits(Graph& g, const EncodedSentence& sent) const;
  NodeId build_loss(Graph& g, const EncodedSentence& sent) const;

  // Forward-only helpers.
  std::vector<double> logits(const EncodedSentence& sent) const;
  std::vector<int> predict(const EncodedSentence& sent) const;  // argmax; ties -> lowest class

  // Individual stages, exposed for verification.
  NodeId embed_tokens(Graph& g, const EncodedSentence& sent) const;
  NodeId bilstm_encode(Graph& g, NodeId X, int n) const;
  NodeId gated_conv(Graph& g, NodeId H, NodeId A, const GatedConvParams& p) const;
  NodeId moganed_attention(Graph& g, NodeId H0, NodeId A, const MoganedConvParams& p) const;
  NodeId model1_forward(Graph& g, NodeId P, int n, const LabeledAdjacencySet& set) const;
  NodeId moganed_forward(Graph& g, NodeId P, int n, const LabeledAdjacencySet& set) const;
  NodeId classify_tokens(Graph& g, NodeId H, int n) const;

  const std::vector<GatedConvParams>& conv_layer(int k) const { return gcn_layers_[static_cast<size_t>(k)]; }
  const GtnCombination& combo(Direction d) const { return d == Direction::Fwd ? combo_fwd_ : combo_rev_; }
  const MetaPathChain& chain(Direction d, int t) const {
    return (d == Direction::Fwd ? chains_fwd_ : chains_rev_)[static_cast<size_t>(t - 1)];
  }

 private:
  TensorPtr add_param(const std::string& name, Tensor t);
  TensorPtr glorot(const std::string& name, std::vector<int> shape);
  TensorPtr zeros(const std::string& name, std::vector<int> shape);

  ModelConfig config_;
  std::vector<std::pair<std::string, TensorPtr>> params_;
  mutable Rng* init_rng_ = nullptr;  // only during construction

  TensorPtr emb_word_, emb_pos_, emb_ner_, emb_position_;
  LstmDirParams lstm_fwd_, lstm_bwd_;
  std::vector<std::vector<GatedConvParams>> gcn_layers_;      // [K][role]
  std::vector<std::vector<MoganedConvParams>> mog_branches_;  // [T][role]
  TensorPtr agg_Ws_, agg_c_;
  TensorPtr cls_W1_, cls_b1_, cls_W2_, cls_b2_;
  GtnCombination combo_fwd_, combo_rev_;          // Gcn + gtn
  std::vector<MetaPathChain> chains_fwd_, chains_rev_;  // Moganed + gtn, index t-1
};

// Class ids for one logits matrix (row-major n x n_classes).
std::vector<int> argmax_classes(const std::vector<double>& logits, int n, int n_classes);

}  // namespace dgt
