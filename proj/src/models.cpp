#include "dgt/models.hpp"

#include <cmath>

namespace dgt {

namespace {
const char* role_name(int r) { return r == 0 ? "fwd" : r == 1 ? "rev" : "loop"; }
}  // namespace

TriggerModel::TriggerModel(const ModelConfig& config) : config_(config) {
  if (config_.n_words < 1 || config_.n_pos < 1 || config_.n_ner < 1 || config_.n_classes < 1)
    throw ValidationError("model: vocabulary sizes must be set");
  if (config_.n_labels < 1) throw ValidationError("model: label count must be >= 1");
  if (config_.kind == ModelKind::Gcn && (config_.K < 1 || config_.K > 8))
    throw ValidationError("model: K out of range");
  if (config_.kind == ModelKind::Moganed && (config_.T < 1 || config_.T > 8))
    throw ValidationError("model: T out of range");

  Rng rng(config_.seed);
  init_rng_ = &rng;
  const ModelDims& d = config_.dims;

  emb_word_ = glorot("embed.word", {config_.n_words, d.word_dim});
  emb_pos_ = glorot("embed.pos", {config_.n_pos, d.feat_dim});
  emb_ner_ = glorot("embed.ner", {config_.n_ner, d.feat_dim});
  emb_position_ = glorot("embed.position", {config_.max_len, d.feat_dim});

  int H = d.lstm_hidden;
  for (int dir = 0; dir < 2; ++dir) {
    LstmDirParams& p = dir == 0 ? lstm_fwd_ : lstm_bwd_;
    std::string prefix = dir == 0 ? "lstm.fwd." : "lstm.bwd.";
    p.Wx = glorot(prefix + "Wx", {4 * H, d.token_dim()});
    p.Wh = glorot(prefix + "Wh", {4 * H, H});
    p.b = zeros(prefix + "b", {1, 4 * H});
  }

  if (config_.kind == ModelKind::Gcn) {
    for (int k = 0; k < config_.K; ++k) {
      int d_in = k == 0 ? d.context_dim() : d.graph_dim;
      std::vector<GatedConvParams> layer;
      for (int r = 0; r < 3; ++r) {
        std::string prefix = "gcn.k" + std::to_string(k) + "." + role_name(r) + ".";
        GatedConvParams p;
        p.W = glorot(prefix + "W", {d.graph_dim, d_in});
        p.b = zeros(prefix + "b", {1, d.graph_dim});
        p.w_att = glorot(prefix + "w_att", {d_in});
        p.eps = zeros(prefix + "eps", {1, 1});
        layer.push_back(std::move(p));
      }
      gcn_layers_.push_back(std::move(layer));
    }
  } else {
    for (int t = 1; t <= config_.T; ++t) {
      std::vector<MoganedConvParams> branch;
      for (int r = 0; r < 3; ++r) {
        std::string prefix = "mog.t" + std::to_string(t) + "." + role_name(r) + ".";
        MoganedConvParams p;
        p.W = glorot(prefix + "W", {d.graph_dim, d.context_dim()});
        p.b = zeros(prefix + "b", {1, d.graph_dim});
        p.W_att = glorot(prefix + "W_att", {d.attn_dim, d.context_dim()});
        p.W_c = glorot(prefix + "W_c", {1, 2 * d.attn_dim});
        branch.push_back(std::move(p));
      }
      mog_branches_.push_back(std::move(branch));
    }
    agg_Ws_ = glorot("agg.Ws", {d.agg_dim, d.graph_dim});
    agg_c_ = glorot("agg.c", {d.agg_dim, 1});
  }

  cls_W1_ = glorot("cls.W1", {d.cls_hidden, d.graph_dim});
  cls_b1_ = zeros("cls.b1", {1, d.cls_hidden});
  cls_W2_ = glorot("cls.W2", {config_.n_classes, d.cls_hidden});
  cls_b2_ = zeros("cls.b2", {1, config_.n_classes});

  if (config_.gtn) {
    int L = config_.n_labels;
    if (config_.kind == ModelKind::Gcn) {
      combo_fwd_ = GtnCombination::create(L);
      combo_rev_ = GtnCombination::create(L);
      params_.emplace_back("gtn.fwd.w", combo_fwd_.w);
      params_.emplace_back("gtn.rev.w", combo_rev_.w);
    } else {
      for (int t = 1; t <= config_.T; ++t) {
        chains_fwd_.push_back(MetaPathChain::create(Direction::Fwd, t, L));
        chains_rev_.push_back(MetaPathChain::create(Direction::Rev, t, L));
        for (int i = 0; i < t; ++i) {
          params_.emplace_back("gtn.fwd.t" + std::to_string(t) + ".q" + std::to_string(i),
                               chains_fwd_.back().combos[static_cast<size_t>(i)].w);
          params_.emplace_back("gtn.rev.t" + std::to_string(t) + ".q" + std::to_string(i),
                               chains_rev_.back().combos[static_cast<size_t>(i)].w);
        }
      }
    }
  }

  init_rng_ = nullptr;
}

TensorPtr TriggerModel::add_param(const std::string& name, Tensor t) {
  t.requires_grad = true;
  t.grad.assign(t.data.size(), 0.0);
  TensorPtr p = make_tensor(std::move(t));
  params_.emplace_back(name, p);
  return p;
}

TensorPtr TriggerModel::glorot(const std::string& name, std::vector<int> shape) {
  int fan_out = shape[0];
  int fan_in = shape.size() > 1 ? shape[1] : 1;
  if (shape.size() == 1) {
    fan_in = shape[0];
    fan_out = 1;
  }
  double r = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Tensor t = Tensor::zeros(shape);
  for (double& v : t.data) v = init_rng_->uniform(-r, r);
  return add_param(name, std::move(t));
}

TensorPtr TriggerModel::zeros(const std::string& name, std::vector<int> shape) {
  return add_param(name, Tensor::zeros(std::move(shape)));
}

TensorPtr TriggerModel::param(const std::string& name) const {
  for (const auto& [n, p] : params_)
    if (n == name) return p;
  throw ValidationError("unknown parameter: " + name);
}

int64_t TriggerModel::trainable_scalars() const {
  int64_t total = 0;
  for (const auto& [n, p] : params_)
    if (p->requires_grad) total += p->numel();
  return total;
}

void TriggerModel::zero_grad() const {
  for (const auto& [n, p] : params_) p->zero_grad();
}

NodeId TriggerModel::embed_tokens(Graph& g, const EncodedSentence& sent) const {
  if (sent.n() < 1) throw ValidationError("embed_tokens: empty sentence");
  for (int pos : sent.positions)
    if (pos >= config_.max_len) throw ValidationError("embed_tokens: position exceeds max_len");
  return g.concat_cols({g.gather_rows(g.leaf(emb_word_), sent.words),
                        g.gather_rows(g.leaf(emb_pos_), sent.pos),
                        g.gather_rows(g.leaf(emb_ner_), sent.ner),
                        g.gather_rows(g.leaf(emb_position_), sent.positions)});
}

NodeId TriggerModel::bilstm_encode(Graph& g, NodeId X, int n) const {
  int H = config_.dims.lstm_hidden;
  auto run = [&](const LstmDirParams& p, bool reverse) {
    NodeId xw = g.matmul(X, g.transpose(g.leaf(p.Wx)));  // n x 4H
    NodeId wht = g.transpose(g.leaf(p.Wh));
    NodeId b = g.leaf(p.b);
    NodeId h = g.constant(Tensor::zeros({1, H}));
    NodeId c = g.constant(Tensor::zeros({1, H}));
    std::vector<NodeId> states(static_cast<size_t>(n));
    for (int step = 0; step < n; ++step) {
      int t = reverse ? n - 1 - step : step;
      NodeId z = g.add(g.gather_rows(xw, {t}), g.add(g.matmul(h, wht), b));
      NodeId i_gate = g.sigmoid(g.slice_cols(z, 0, H));
      NodeId f_gate = g.sigmoid(g.slice_cols(z, H, H));
      NodeId g_cand = g.tanh_(g.slice_cols(z, 2 * H, H));
      NodeId o_gate = g.sigmoid(g.slice_cols(z, 3 * H, H));
      c = g.add(g.mul(f_gate, c), g.mul(i_gate, g_cand));
      h = g.mul(o_gate, g.tanh_(c));
      states[static_cast<size_t>(t)] = h;
    }
    return g.concat_rows(states);  // n x H, token order
  };
  return g.concat_cols({run(lstm_fwd_, false), run(lstm_bwd_, true)});
}

NodeId TriggerModel::gated_conv(Graph& g, NodeId H, NodeId A, const GatedConvParams& p) const {
  int n = g.shape(H)[0];
  int d_in = g.shape(H)[1];
  NodeId ones = g.constant(Tensor::full({n, 1}, 1.0));
  NodeId messages = g.add(g.matmul(H, g.transpose(g.leaf(p.W))), g.matmul(ones, g.leaf(p.b)));
  NodeId gate_in = g.add(g.matmul(H, g.reshape(g.leaf(p.w_att), {d_in, 1})), g.matmul(ones, g.leaf(p.eps)));
  NodeId gates = g.mul(A, g.matmul(ones, g.transpose(g.sigmoid(gate_in))));
  return g.matmul(gates, messages);
}

NodeId TriggerModel::moganed_attention(Graph& g, NodeId H0, NodeId A, const MoganedConvParams& p) const {
  int n = g.shape(H0)[0];
  int dp = config_.dims.attn_dim;
  NodeId proj = g.matmul(H0, g.transpose(g.leaf(p.W_att)));  // n x d'
  NodeId wc = g.leaf(p.W_c);
  NodeId from_u = g.matmul(proj, g.transpose(g.slice_cols(wc, 0, dp)));   // n x 1
  NodeId from_v = g.matmul(proj, g.transpose(g.slice_cols(wc, dp, dp)));  // n x 1
  NodeId ones_row = g.constant(Tensor::full({1, n}, 1.0));
  NodeId ones_col = g.constant(Tensor::full({n, 1}, 1.0));
  NodeId scores = g.add(g.matmul(from_u, ones_row), g.matmul(ones_col, g.transpose(from_v)));
  NodeId energies = g.mul(A, g.leaky_relu(scores, config_.leaky_slope));
  return g.masked_softmax_rows(energies, A);
}

NodeId TriggerModel::model1_forward(Graph& g, NodeId P, int n, const LabeledAdjacencySet& set) const {
  NodeId a_fwd, a_rev;
  if (config_.gtn) {
    a_fwd = combine(g, combo_fwd_, set.fwd);
    a_rev = combine(g, combo_rev_, set.rev);
  } else {
    HomogeneousTriple triple = collapse_homogeneous(set);
    a_fwd = g.constant(std::move(triple.fwd));
    a_rev = g.constant(std::move(triple.rev));
  }
  NodeId a_loop = g.constant(Tensor::identity(n));

  NodeId h = P;
  for (int k = 0; k < config_.K; ++k) {
    const auto& layer = gcn_layers_[static_cast<size_t>(k)];
    NodeId sum = g.add(g.add(gated_conv(g, h, a_fwd, layer[0]), gated_conv(g, h, a_rev, layer[1])),
                       gated_conv(g, h, a_loop, layer[2]));
    h = g.relu(sum);
  }
  return h;
}

NodeId TriggerModel::moganed_forward(Graph& g, NodeId P, int n, const LabeledAdjacencySet& set) const {
  HomogeneousTriple triple;
  if (!config_.gtn) triple = collapse_homogeneous(set);
  NodeId a_loop = g.constant(Tensor::identity(n));
  NodeId ones = g.constant(Tensor::full({n, 1}, 1.0));
  NodeId ones_gd = g.constant(Tensor::full({1, config_.dims.graph_dim}, 1.0));

  std::vector<NodeId> branch_out;  // v_t, each n x graph_dim
  for (int t = 1; t <= config_.T; ++t) {
    NodeId a_fwd, a_rev;
    if (config_.gtn) {
      a_fwd = metapath_product(g, chains_fwd_[static_cast<size_t>(t - 1)], set);
      a_rev = metapath_product(g, chains_rev_[static_cast<size_t>(t - 1)], set);
    } else {
      a_fwd = g.constant(matrix_power(triple.fwd, t));
      a_rev = g.constant(matrix_power(triple.rev, t));
    }
    const auto& branch = mog_branches_[static_cast<size_t>(t - 1)];
    NodeId adj[3] = {a_fwd, a_rev, a_loop};
    NodeId v_t = -1;
    for (int r = 0; r < 3; ++r) {
      const MoganedConvParams& p = branch[static_cast<size_t>(r)];
      NodeId gates = moganed_attention(g, P, adj[r], p);
      NodeId messages = g.add(g.matmul(P, g.transpose(g.leaf(p.W))), g.matmul(ones, g.leaf(p.b)));
      NodeId role_out = g.elu(g.matmul(gates, messages));
      v_t = r == 0 ? role_out : g.add(v_t, role_out);
    }
    branch_out.push_back(v_t);
  }

  // per-token attention over hop orders
  std::vector<NodeId> scores;
  for (NodeId v : branch_out)
    scores.push_back(g.matmul(g.tanh_(g.matmul(v, g.transpose(g.leaf(agg_Ws_)))), g.leaf(agg_c_)));
  NodeId alpha = g.softmax_rows(g.concat_cols(scores));  // n x T
  NodeId out = -1;
  for (int t = 0; t < config_.T; ++t) {
    NodeId weighted = g.mul(g.matmul(g.slice_cols(alpha, t, 1), ones_gd), branch_out[static_cast<size_t>(t)]);
    out = t == 0 ? weighted : g.add(out, weighted);
  }
  return out;
}

NodeId TriggerModel::classify_tokens(Graph& g, NodeId H, int n) const {
  NodeId ones = g.constant(Tensor::full({n, 1}, 1.0));
  NodeId hidden = g.relu(g.add(g.matmul(H, g.transpose(g.leaf(cls_W1_))), g.matmul(ones, g.leaf(cls_b1_))));
  return g.add(g.matmul(hidden, g.transpose(g.leaf(cls_W2_))), g.matmul(ones, g.leaf(cls_b2_)));
}

NodeId TriggerModel::build_logits(Graph& g, const EncodedSentence& sent) const {
  int n = sent.n();
  LabeledAdjacencySet set = build_labeled_adjacency(sent, config_.n_labels);
  NodeId X = embed_tokens(g, sent);
  NodeId P = bilstm_encode(g, X, n);
  NodeId H = config_.kind == ModelKind::Gcn ? model1_forward(g, P, n, set)
                                            : moganed_forward(g, P, n, set);
  return classify_tokens(g, H, n);
}

NodeId TriggerModel::build_loss(Graph& g, const EncodedSentence& sent) const {
  return g.cross_entropy_logits(build_logits(g, sent), sent.gold);
}

std::vector<double> TriggerModel::logits(const EncodedSentence& sent) const {
  Graph g;
  NodeId out = build_logits(g, sent);
  g.forward();
  return g.value(out);
}

std::vector<int> TriggerModel::predict(const EncodedSentence& sent) const {
  return argmax_classes(logits(sent), sent.n(), config_.n_classes);
}

std::vector<int> argmax_classes(const std::vector<double>& logits, int n, int n_classes) {
  std::vector<int> out(static_cast<size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    const double* row = logits.data() + static_cast<size_t>(i) * n_classes;
    int best = 0;
    for (int c = 1; c < n_classes; ++c)
      if (row[c] > row[best]) best = c;
    out[static_cast<size_t>(i)] = best;
  }
  return out;
}

}  // namespace dgt
