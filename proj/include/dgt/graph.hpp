#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "dgt/tensor.hpp"

namespace dgt {

using NodeId = int32_t;

enum class Op : uint8_t {
  Leaf,
  Matmul,
  Transpose,
  Add,
  Mul,
  Scale,
  Concat0,   // stack rows
  Concat1,   // concat along last axis
  SoftmaxRows,
  MaskedSoftmaxRows,  // softmax per row over {j : mask(i,j) != 0}; empty row -> zero row
  Sigmoid,
  Tanh,
  Relu,
  Elu,        // alpha = 1
  LeakyRelu,  // negative slope in `scalar`
  GatherRows,
  SliceCols,
  Reshape,
  SumAll,
  MeanAll,
  MaskedFill,  // out = mask != 0 ? scalar : x
  CrossEntropyLogits,  // mean token-level CE; gold ids in `ints`
};

const char* op_name(Op op);

struct Node {
  Op op;
  std::vector<NodeId> in;
  std::vector<int> shape;
  std::vector<double> val;   // empty for Leaf (aliases the tensor)
  std::vector<double> grad;  // allocated during backward
  TensorPtr leaf;            // Leaf only
  double scalar = 0.0;       // Scale factor / fill value / LeakyRelu slope
  std::vector<int> ints;     // gather ids / slice {start,len} / gold ids
};

// Reverse-mode tape. Nodes are appended in topological order by construction;
// forward() evaluates everything, backward() pushes gradients to every leaf
// tensor with requires_grad set (accumulating into Tensor::grad).
//
// The primitive set is the catalog needed by the models plus a few structural
// helpers (row stacking, column slicing, reshape, masked row softmax).
class Graph {
 public:
  // Leaves alias external tensors; the same tensor maps to a single node.
  NodeId leaf(const TensorPtr& t);
  // Graph-owned constant (no gradient).
  NodeId constant(Tensor t);

  NodeId matmul(NodeId a, NodeId b);
  NodeId transpose(NodeId x);
  NodeId add(NodeId a, NodeId b);
  NodeId mul(NodeId a, NodeId b);
  NodeId scale(NodeId x, double c);
  NodeId concat_rows(const std::vector<NodeId>& xs);
  NodeId concat_cols(const std::vector<NodeId>& xs);
  NodeId softmax_rows(NodeId x);
  NodeId masked_softmax_rows(NodeId x, NodeId mask);
  NodeId sigmoid(NodeId x);
  NodeId tanh_(NodeId x);
  NodeId relu(NodeId x);
  NodeId elu(NodeId x);
  NodeId leaky_relu(NodeId x, double slope);
  NodeId gather_rows(NodeId table, std::vector<int> ids);
  NodeId slice_cols(NodeId x, int start, int len);
  NodeId reshape(NodeId x, std::vector<int> shape);
  NodeId sum_all(NodeId x);
  NodeId mean_all(NodeId x);
  NodeId masked_fill(NodeId x, NodeId mask, double value);
  NodeId cross_entropy_logits(NodeId logits, std::vector<int> gold);

  void forward();
  // Accumulates into leaf tensors' grad buffers. Requires forward() first and
  // a single-element loss node.
  void backward(NodeId loss);

  const std::vector<double>& value(NodeId id) const;
  const std::vector<int>& shape(NodeId id) const { return nodes_[id].shape; }
  const std::vector<double>& grad(NodeId id) const { return nodes_[id].grad; }
  size_t size() const { return nodes_.size(); }
  bool evaluated() const { return evaluated_; }

 private:
  NodeId push(Node n);
  void check_2d(NodeId x, const char* who) const;
  void eval_node(Node& n);

  std::vector<Node> nodes_;
  std::unordered_map<const Tensor*, NodeId> leaf_index_;
  bool evaluated_ = false;
};

}  // namespace dgt
