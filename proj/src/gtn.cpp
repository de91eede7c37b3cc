#include "dgt/gtn.hpp"

#include <cmath>

namespace dgt {

std::vector<double> combination_alpha(const GtnCombination& comb) {
  const auto& w = comb.w->data;
  double mx = w[0];
  for (double v : w) mx = std::max(mx, v);
  std::vector<double> alpha(w.size());
  double sum = 0.0;
  for (size_t i = 0; i < w.size(); ++i) {
    alpha[i] = std::exp(w[i] - mx);
    sum += alpha[i];
  }
  for (double& a : alpha) a /= sum;
  return alpha;
}

NodeId combine(Graph& g, const GtnCombination& comb, const std::vector<Tensor>& stack) {
  int L = comb.labels();
  if (static_cast<int>(stack.size()) != L)
    throw ValidationError("combine: stack has " + std::to_string(stack.size()) + " matrices for L=" +
                          std::to_string(L));
  int n = stack[0].shape[0];
  // Row l of S is stack[l] flattened; Q = reshape(alpha . S).
  Tensor flat = Tensor::zeros({L, n * n});
  for (int l = 0; l < L; ++l)
    for (int i = 0; i < n * n; ++i) flat.data[static_cast<size_t>(l) * n * n + i] = stack[static_cast<size_t>(l)].data[static_cast<size_t>(i)];
  NodeId alpha = g.softmax_rows(g.reshape(g.leaf(comb.w), {1, L}));
  NodeId q_flat = g.matmul(alpha, g.constant(std::move(flat)));
  return g.reshape(q_flat, {n, n});
}

NodeId metapath_product(Graph& g, const MetaPathChain& chain, const LabeledAdjacencySet& set) {
  if (chain.length() < 1) throw ValidationError("metapath_product: chain must have length >= 1");
  const auto& stack = set.stack(chain.direction);
  NodeId q = combine(g, chain.combos[0], stack);
  for (size_t i = 1; i < chain.combos.size(); ++i) q = g.matmul(q, combine(g, chain.combos[i], stack));
  return q;
}

Tensor combine_value(const GtnCombination& comb, const std::vector<Tensor>& stack) {
  Graph g;
  NodeId q = combine(g, comb, stack);
  g.forward();
  return Tensor(g.shape(q), g.value(q));
}

Tensor metapath_product_value(const MetaPathChain& chain, const LabeledAdjacencySet& set) {
  Graph g;
  NodeId q = metapath_product(g, chain, set);
  g.forward();
  return Tensor(g.shape(q), g.value(q));
}

int64_t gtn_param_count(ModelKind kind, int L, int k_or_t) {
  if (L < 0) throw ValidationError("gtn_param_count: L must be >= 0");
  if (kind == ModelKind::Gcn) return 2LL * L;
  int64_t T = k_or_t;
  return static_cast<int64_t>(L) * T * (T + 1);
}

}  // namespace dgt
