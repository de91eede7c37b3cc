#pragma once

#include <string>
#include <vector>

#include "dgt/graph.hpp"
#include "dgt/graphs.hpp"
#include "dgt/tensor.hpp"

namespace dgt {

// One learnable soft edge-type selection: alpha = softmax(w), Q = sum_l
// alpha_l * A_l. Weights are global model parameters; Q is recomputed per
// sentence from that sentence's label stacks.
struct GtnCombination {
  TensorPtr w;  // length L

  static GtnCombination create(int L) {
    GtnCombination c;
    c.w = make_tensor(Tensor::zeros({L}, /*rg=*/true));  // uniform alpha start
    return c;
  }
  int labels() const { return w->shape[0]; }
};

// Ordered combinations whose product realizes a length-t composite relation
// over one direction's label stacks.
struct MetaPathChain {
  Direction direction = Direction::Fwd;
  std::vector<GtnCombination> combos;

  static MetaPathChain create(Direction d, int t, int L) {
    MetaPathChain chain;
    chain.direction = d;
    for (int i = 0; i < t; ++i) chain.combos.push_back(GtnCombination::create(L));
    return chain;
  }
  int length() const { return static_cast<int>(combos.size()); }
};

// Plain alpha values (softmax of w), for inspection and invariant tests.
std::vector<double> combination_alpha(const GtnCombination& comb);

// Differentiable Q = sum_l softmax(w)_l * stack[l] as a graph node.
NodeId combine(Graph& g, const GtnCombination& comb, const std::vector<Tensor>& stack);

// Q_0 * Q_1 * ... * Q_{t-1} over the chain's direction.
NodeId metapath_product(Graph& g, const MetaPathChain& chain, const LabeledAdjacencySet& set);

// Non-graph evaluation helpers (used by oracles/tests).
Tensor combine_value(const GtnCombination& comb, const std::vector<Tensor>& stack);
Tensor metapath_product_value(const MetaPathChain& chain, const LabeledAdjacencySet& set);

enum class ModelKind { Gcn, Moganed };

// Extra trainable scalars a label-aware model carries over its label-blind
// baseline: 2L for the stacked model (shared across layers), L*T*(T+1) for
// the multi-order model (2Lt per hop order t, summed over t = 1..T).
int64_t gtn_param_count(ModelKind kind, int L, int k_or_t);

}  // namespace dgt
