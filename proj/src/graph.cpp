#include "dgt/graph.hpp"

#include <cmath>
#include <cstring>

namespace dgt {

const char* op_name(Op op) {
  switch (op) {
    case Op::Leaf: return "leaf";
    case Op::Matmul: return "matmul";
    case Op::Transpose: return "transpose";
    case Op::Add: return "add";
    case Op::Mul: return "mul";
    case Op::Scale: return "scale";
    case Op::Concat0: return "concat_rows";
    case Op::Concat1: return "concat_cols";
    case Op::SoftmaxRows: return "softmax_rows";
    case Op::MaskedSoftmaxRows: return "masked_softmax_rows";
    case Op::Sigmoid: return "sigmoid";
    case Op::Tanh: return "tanh";
    case Op::Relu: return "relu";
    case Op::Elu: return "elu";
    case Op::LeakyRelu: return "leaky_relu";
    case Op::GatherRows: return "gather_rows";
    case Op::SliceCols: return "slice_cols";
    case Op::Reshape: return "reshape";
    case Op::SumAll: return "sum_all";
    case Op::MeanAll: return "mean_all";
    case Op::MaskedFill: return "masked_fill";
    case Op::CrossEntropyLogits: return "cross_entropy_logits";
  }
  return "?";
}

namespace {

int64_t numel_of(const std::vector<int>& s) {
  int64_t n = 1;
  for (int d : s) n *= d;
  return n;
}

[[noreturn]] void shape_fail(const char* who, const std::vector<int>& a, const std::vector<int>& b) {
  throw ValidationError(std::string("shape mismatch in ") + who + ": " + shape_str(a) + " vs " + shape_str(b));
}

}  // namespace

NodeId Graph::push(Node n) {
  nodes_.push_back(std::move(n));
  evaluated_ = false;
  return static_cast<NodeId>(nodes_.size() - 1);
}

void Graph::check_2d(NodeId x, const char* who) const {
  if (nodes_[x].shape.size() != 2)
    throw ValidationError(std::string(who) + ": expected 2-d input, got " + shape_str(nodes_[x].shape));
}

NodeId Graph::leaf(const TensorPtr& t) {
  auto it = leaf_index_.find(t.get());
  if (it != leaf_index_.end()) return it->second;
  Node n;
  n.op = Op::Leaf;
  n.shape = t->shape;
  n.leaf = t;
  NodeId id = push(std::move(n));
  leaf_index_[t.get()] = id;
  return id;
}

NodeId Graph::constant(Tensor t) {
  t.requires_grad = false;
  return leaf(make_tensor(std::move(t)));
}

NodeId Graph::matmul(NodeId a, NodeId b) {
  check_2d(a, "matmul");
  check_2d(b, "matmul");
  const auto& sa = nodes_[a].shape;
  const auto& sb = nodes_[b].shape;
  if (sa[1] != sb[0]) shape_fail("matmul", sa, sb);
  Node n;
  n.op = Op::Matmul;
  n.in = {a, b};
  n.shape = {sa[0], sb[1]};
  return push(std::move(n));
}

NodeId Graph::transpose(NodeId x) {
  check_2d(x, "transpose");
  Node n;
  n.op = Op::Transpose;
  n.in = {x};
  n.shape = {nodes_[x].shape[1], nodes_[x].shape[0]};
  return push(std::move(n));
}

NodeId Graph::add(NodeId a, NodeId b) {
  if (nodes_[a].shape != nodes_[b].shape) shape_fail("add", nodes_[a].shape, nodes_[b].shape);
  Node n;
  n.op = Op::Add;
  n.in = {a, b};
  n.shape = nodes_[a].shape;
  return push(std::move(n));
}

NodeId Graph::mul(NodeId a, NodeId b) {
  if (nodes_[a].shape != nodes_[b].shape) shape_fail("mul", nodes_[a].shape, nodes_[b].shape);
  Node n;
  n.op = Op::Mul;
  n.in = {a, b};
  n.shape = nodes_[a].shape;
  return push(std::move(n));
}

NodeId Graph::scale(NodeId x, double c) {
  Node n;
  n.op = Op::Scale;
  n.in = {x};
  n.shape = nodes_[x].shape;
  n.scalar = c;
  return push(std::move(n));
}

NodeId Graph::concat_rows(const std::vector<NodeId>& xs) {
  if (xs.empty()) throw ValidationError("concat_rows: no inputs");
  int cols = -1, rows = 0;
  for (NodeId x : xs) {
    check_2d(x, "concat_rows");
    if (cols < 0) cols = nodes_[x].shape[1];
    if (nodes_[x].shape[1] != cols) shape_fail("concat_rows", nodes_[xs[0]].shape, nodes_[x].shape);
    rows += nodes_[x].shape[0];
  }
  Node n;
  n.op = Op::Concat0;
  n.in = xs;
  n.shape = {rows, cols};
  return push(std::move(n));
}

NodeId Graph::concat_cols(const std::vector<NodeId>& xs) {
  if (xs.empty()) throw ValidationError("concat_cols: no inputs");
  int rows = -1, cols = 0;
  for (NodeId x : xs) {
    check_2d(x, "concat_cols");
    if (rows < 0) rows = nodes_[x].shape[0];
    if (nodes_[x].shape[0] != rows) shape_fail("concat_cols", nodes_[xs[0]].shape, nodes_[x].shape);
    cols += nodes_[x].shape[1];
  }
  Node n;
  n.op = Op::Concat1;
  n.in = xs;
  n.shape = {rows, cols};
  return push(std::move(n));
}

NodeId Graph::softmax_rows(NodeId x) {
  check_2d(x, "softmax_rows");
  Node n;
  n.op = Op::SoftmaxRows;
  n.in = {x};
  n.shape = nodes_[x].shape;
  return push(std::move(n));
}

NodeId Graph::masked_softmax_rows(NodeId x, NodeId mask) {
  check_2d(x, "masked_softmax_rows");
  if (nodes_[x].shape != nodes_[mask].shape)
    shape_fail("masked_softmax_rows", nodes_[x].shape, nodes_[mask].shape);
  Node n;
  n.op = Op::MaskedSoftmaxRows;
  n.in = {x, mask};
  n.shape = nodes_[x].shape;
  return push(std::move(n));
}

NodeId Graph::sigmoid(NodeId x) {
  Node n;
  n.op = Op::Sigmoid;
  n.in = {x};
  n.shape = nodes_[x].shape;
  return push(std::move(n));
}

NodeId Graph::tanh_(NodeId x) {
  Node n;
  n.op = Op::Tanh;
  n.in = {x};
  n.shape = nodes_[x].shape;
  return push(std::move(n));
}

NodeId Graph::relu(NodeId x) {
  Node n;
  n.op = Op::Relu;
  n.in = {x};
  n.shape = nodes_[x].shape;
  return push(std::move(n));
}

NodeId Graph::elu(NodeId x) {
  Node n;
  n.op = Op::Elu;
  n.in = {x};
  n.shape = nodes_[x].shape;
  return push(std::move(n));
}

NodeId Graph::leaky_relu(NodeId x, double slope) {
  Node n;
  n.op = Op::LeakyRelu;
  n.in = {x};
  n.shape = nodes_[x].shape;
  n.scalar = slope;
  return push(std::move(n));
}

NodeId Graph::gather_rows(NodeId table, std::vector<int> ids) {
  check_2d(table, "gather_rows");
  int rows = nodes_[table].shape[0];
  for (int id : ids)
    if (id < 0 || id >= rows)
      throw ValidationError("gather_rows: id " + std::to_string(id) + " out of range for table " +
                            shape_str(nodes_[table].shape));
  Node n;
  n.op = Op::GatherRows;
  n.in = {table};
  n.shape = {static_cast<int>(ids.size()), nodes_[table].shape[1]};
  n.ints = std::move(ids);
  return push(std::move(n));
}

NodeId Graph::slice_cols(NodeId x, int start, int len) {
  check_2d(x, "slice_cols");
  if (start < 0 || len < 1 || start + len > nodes_[x].shape[1])
    throw ValidationError("slice_cols: range [" + std::to_string(start) + "," +
                          std::to_string(start + len) + ") out of " + shape_str(nodes_[x].shape));
  Node n;
  n.op = Op::SliceCols;
  n.in = {x};
  n.shape = {nodes_[x].shape[0], len};
  n.ints = {start, len};
  return push(std::move(n));
}

NodeId Graph::reshape(NodeId x, std::vector<int> shape) {
  if (numel_of(shape) != numel_of(nodes_[x].shape)) shape_fail("reshape", nodes_[x].shape, shape);
  Node n;
  n.op = Op::Reshape;
  n.in = {x};
  n.shape = std::move(shape);
  return push(std::move(n));
}

NodeId Graph::sum_all(NodeId x) {
  Node n;
  n.op = Op::SumAll;
  n.in = {x};
  n.shape = {1};
  return push(std::move(n));
}

NodeId Graph::mean_all(NodeId x) {
  Node n;
  n.op = Op::MeanAll;
  n.in = {x};
  n.shape = {1};
  return push(std::move(n));
}

NodeId Graph::masked_fill(NodeId x, NodeId mask, double value) {
  if (nodes_[x].shape != nodes_[mask].shape) shape_fail("masked_fill", nodes_[x].shape, nodes_[mask].shape);
  Node n;
  n.op = Op::MaskedFill;
  n.in = {x, mask};
  n.shape = nodes_[x].shape;
  n.scalar = value;
  return push(std::move(n));
}

NodeId Graph::cross_entropy_logits(NodeId logits, std::vector<int> gold) {
  check_2d(logits, "cross_entropy_logits");
  const auto& s = nodes_[logits].shape;
  if (static_cast<int>(gold.size()) != s[0])
    throw ValidationError("cross_entropy_logits: " + std::to_string(gold.size()) + " gold ids for " +
                          shape_str(s) + " logits");
  for (int g : gold)
    if (g < 0 || g >= s[1]) throw ValidationError("cross_entropy_logits: gold id out of range");
  Node n;
  n.op = Op::CrossEntropyLogits;
  n.in = {logits};
  n.shape = {1};
  n.ints = std::move(gold);
  return push(std::move(n));
}

const std::vector<double>& Graph::value(NodeId id) const {
  const Node& n = nodes_[id];
  if (n.op == Op::Leaf) return n.leaf->data;
  if (!evaluated_) throw ValidationError("graph not evaluated; call forward() first");
  return n.val;
}

void Graph::eval_node(Node& n) {
  const auto in_val = [&](int i) -> const std::vector<double>& {
    const Node& m = nodes_[n.in[i]];
    return m.op == Op::Leaf ? m.leaf->data : m.val;
  };
  const auto in_shape = [&](int i) -> const std::vector<int>& { return nodes_[n.in[i]].shape; };

  switch (n.op) {
    case Op::Leaf:
      return;
    case Op::Matmul: {
      const auto& A = in_val(0);
      const auto& B = in_val(1);
      int m = in_shape(0)[0], k = in_shape(0)[1], p = in_shape(1)[1];
      n.val.assign(static_cast<size_t>(m) * p, 0.0);
      for (int i = 0; i < m; ++i) {
        double* out = n.val.data() + static_cast<size_t>(i) * p;
        const double* arow = A.data() + static_cast<size_t>(i) * k;
        for (int q = 0; q < k; ++q) {
          double a = arow[q];
          if (a == 0.0) continue;
          const double* brow = B.data() + static_cast<size_t>(q) * p;
          for (int j = 0; j < p; ++j) out[j] += a * brow[j];
        }
      }
      break;
    }
    case Op::Transpose: {
      const auto& X = in_val(0);
      int r = in_shape(0)[0], c = in_shape(0)[1];
      n.val.resize(X.size());
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j)
          n.val[static_cast<size_t>(j) * r + i] = X[static_cast<size_t>(i) * c + j];
      break;
    }
    case Op::Add: {
      const auto& A = in_val(0);
      const auto& B = in_val(1);
      n.val.resize(A.size());
      for (size_t i = 0; i < A.size(); ++i) n.val[i] = A[i] + B[i];
      break;
    }
    case Op::Mul: {
      const auto& A = in_val(0);
      const auto& B = in_val(1);
      n.val.resize(A.size());
      for (size_t i = 0; i < A.size(); ++i) n.val[i] = A[i] * B[i];
      break;
    }
    case Op::Scale: {
      const auto& X = in_val(0);
      n.val.resize(X.size());
      for (size_t i = 0; i < X.size(); ++i) n.val[i] = n.scalar * X[i];
      break;
    }
    case Op::Concat0: {
      n.val.clear();
      n.val.reserve(static_cast<size_t>(numel_of(n.shape)));
      for (size_t i = 0; i < n.in.size(); ++i) {
        const auto& X = in_val(static_cast<int>(i));
        n.val.insert(n.val.end(), X.begin(), X.end());
      }
      break;
    }
    case Op::Concat1: {
      int rows = n.shape[0], cols = n.shape[1];
      n.val.assign(static_cast<size_t>(rows) * cols, 0.0);
      int off = 0;
      for (size_t b = 0; b < n.in.size(); ++b) {
        const auto& X = in_val(static_cast<int>(b));
        int c = in_shape(static_cast<int>(b))[1];
        for (int i = 0; i < rows; ++i)
          std::memcpy(n.val.data() + static_cast<size_t>(i) * cols + off,
                      X.data() + static_cast<size_t>(i) * c, sizeof(double) * c);
        off += c;
      }
      break;
    }
    case Op::SoftmaxRows: {
      const auto& X = in_val(0);
      int r = n.shape[0], c = n.shape[1];
      n.val.resize(X.size());
      for (int i = 0; i < r; ++i) {
        const double* xr = X.data() + static_cast<size_t>(i) * c;
        double* yr = n.val.data() + static_cast<size_t>(i) * c;
        double mx = xr[0];
        for (int j = 1; j < c; ++j) mx = std::max(mx, xr[j]);
        double sum = 0.0;
        for (int j = 0; j < c; ++j) {
          yr[j] = std::exp(xr[j] - mx);
          sum += yr[j];
        }
        for (int j = 0; j < c; ++j) yr[j] /= sum;
      }
      break;
    }
    case Op::MaskedSoftmaxRows: {
      const auto& X = in_val(0);
      const auto& M = in_val(1);
      int r = n.shape[0], c = n.shape[1];
      n.val.assign(X.size(), 0.0);
      for (int i = 0; i < r; ++i) {
        const double* xr = X.data() + static_cast<size_t>(i) * c;
        const double* mr = M.data() + static_cast<size_t>(i) * c;
        double* yr = n.val.data() + static_cast<size_t>(i) * c;
        double mx = 0.0;
        bool any = false;
        for (int j = 0; j < c; ++j)
          if (mr[j] != 0.0) {
            mx = any ? std::max(mx, xr[j]) : xr[j];
            any = true;
          }
        if (!any) continue;  // no neighbors: all-zero row
        double sum = 0.0;
        for (int j = 0; j < c; ++j)
          if (mr[j] != 0.0) {
            yr[j] = std::exp(xr[j] - mx);
            sum += yr[j];
          }
        for (int j = 0; j < c; ++j)
          if (mr[j] != 0.0) yr[j] /= sum;
      }
      break;
    }
    case Op::Sigmoid: {
      const auto& X = in_val(0);
      n.val.resize(X.size());
      for (size_t i = 0; i < X.size(); ++i) n.val[i] = 1.0 / (1.0 + std::exp(-X[i]));
      break;
    }
    case Op::Tanh: {
      const auto& X = in_val(0);
      n.val.resize(X.size());
      for (size_t i = 0; i < X.size(); ++i) n.val[i] = std::tanh(X[i]);
      break;
    }
    case Op::Relu: {
      const auto& X = in_val(0);
      n.val.resize(X.size());
      for (size_t i = 0; i < X.size(); ++i) n.val[i] = X[i] > 0.0 ? X[i] : 0.0;
      break;
    }
    case Op::Elu: {
      const auto& X = in_val(0);
      n.val.resize(X.size());
      for (size_t i = 0; i < X.size(); ++i) n.val[i] = X[i] > 0.0 ? X[i] : std::expm1(X[i]);
      break;
    }
    case Op::LeakyRelu: {
      const auto& X = in_val(0);
      n.val.resize(X.size());
      for (size_t i = 0; i < X.size(); ++i) n.val[i] = X[i] > 0.0 ? X[i] : n.scalar * X[i];
      break;
    }
    case Op::GatherRows: {
      const auto& T = in_val(0);
      int c = in_shape(0)[1];
      n.val.resize(n.ints.size() * static_cast<size_t>(c));
      for (size_t r = 0; r < n.ints.size(); ++r)
        std::memcpy(n.val.data() + r * c, T.data() + static_cast<size_t>(n.ints[r]) * c,
                    sizeof(double) * c);
      break;
    }
    case Op::SliceCols: {
      const auto& X = in_val(0);
      int rows = n.shape[0], len = n.ints[1], start = n.ints[0];
      int c = in_shape(0)[1];
      n.val.resize(static_cast<size_t>(rows) * len);
      for (int i = 0; i < rows; ++i)
        std::memcpy(n.val.data() + static_cast<size_t>(i) * len,
                    X.data() + static_cast<size_t>(i) * c + start, sizeof(double) * len);
      break;
    }
    case Op::Reshape: {
      n.val = in_val(0);
      break;
    }
    case Op::SumAll: {
      const auto& X = in_val(0);
      double s = 0.0;
      for (double v : X) s += v;
      n.val = {s};
      break;
    }
    case Op::MeanAll: {
      const auto& X = in_val(0);
      double s = 0.0;
      for (double v : X) s += v;
      n.val = {s / static_cast<double>(X.size())};
      break;
    }
    case Op::MaskedFill: {
      const auto& X = in_val(0);
      const auto& M = in_val(1);
      n.val.resize(X.size());
      for (size_t i = 0; i < X.size(); ++i) n.val[i] = M[i] != 0.0 ? n.scalar : X[i];
      break;
    }
    case Op::CrossEntropyLogits: {
      const auto& X = in_val(0);
      int r = in_shape(0)[0], c = in_shape(0)[1];
      double total = 0.0;
      for (int i = 0; i < r; ++i) {
        const double* xr = X.data() + static_cast<size_t>(i) * c;
        double mx = xr[0];
        for (int j = 1; j < c; ++j) mx = std::max(mx, xr[j]);
        double sum = 0.0;
        for (int j = 0; j < c; ++j) sum += std::exp(xr[j] - mx);
        total += std::log(sum) + mx - xr[n.ints[i]];
      }
      n.val = {total / static_cast<double>(r)};
      break;
    }
  }
}

void Graph::forward() {
  for (size_t i = 0; i < nodes_.size(); ++i) {
    Node& n = nodes_[i];
    eval_node(n);
    const std::vector<double>& out = n.op == Op::Leaf ? n.leaf->data : n.val;
    for (double v : out)
      if (!std::isfinite(v))
        throw NumericError("non-finite value in node " + std::to_string(i) + " (" + op_name(n.op) + ")");
  }
  evaluated_ = true;
}

void Graph::backward(NodeId loss) {
  if (!evaluated_) throw ValidationError("backward: graph not evaluated");
  if (numel_of(nodes_[loss].shape) != 1)
    throw ValidationError("backward: loss node must be scalar, got " + shape_str(nodes_[loss].shape));

  for (Node& n : nodes_) n.grad.assign(static_cast<size_t>(numel_of(n.shape)), 0.0);
  nodes_[loss].grad[0] = 1.0;

  for (NodeId id = static_cast<NodeId>(nodes_.size()) - 1; id >= 0; --id) {
    Node& n = nodes_[id];
    const auto in_val = [&](int i) -> const std::vector<double>& {
      const Node& m = nodes_[n.in[i]];
      return m.op == Op::Leaf ? m.leaf->data : m.val;
    };
    const auto in_shape = [&](int i) -> const std::vector<int>& { return nodes_[n.in[i]].shape; };
    const auto in_grad = [&](int i) -> std::vector<double>& { return nodes_[n.in[i]].grad; };
    const std::vector<double>& g = n.grad;

    switch (n.op) {
      case Op::Leaf:
        break;
      case Op::Matmul: {
        const auto& A = in_val(0);
        const auto& B = in_val(1);
        auto& dA = in_grad(0);
        auto& dB = in_grad(1);
        int m = in_shape(0)[0], k = in_shape(0)[1], p = in_shape(1)[1];
        // dA = g . B^T ; dB = A^T . g
        for (int i = 0; i < m; ++i) {
          const double* grow = g.data() + static_cast<size_t>(i) * p;
          double* darow = dA.data() + static_cast<size_t>(i) * k;
          for (int q = 0; q < k; ++q) {
            const double* brow = B.data() + static_cast<size_t>(q) * p;
            double acc = 0.0;
            for (int j = 0; j < p; ++j) acc += grow[j] * brow[j];
            darow[q] += acc;
          }
        }
        for (int q = 0; q < k; ++q) {
          double* dbrow = dB.data() + static_cast<size_t>(q) * p;
          for (int i = 0; i < m; ++i) {
            double a = A[static_cast<size_t>(i) * k + q];
            if (a == 0.0) continue;
            const double* grow = g.data() + static_cast<size_t>(i) * p;
            for (int j = 0; j < p; ++j) dbrow[j] += a * grow[j];
          }
        }
        break;
      }
      case Op::Transpose: {
        auto& dX = in_grad(0);
        int r = in_shape(0)[0], c = in_shape(0)[1];
        for (int i = 0; i < r; ++i)
          for (int j = 0; j < c; ++j)
            dX[static_cast<size_t>(i) * c + j] += g[static_cast<size_t>(j) * r + i];
        break;
      }
      case Op::Add: {
        auto& dA = in_grad(0);
        auto& dB = in_grad(1);
        for (size_t i = 0; i < g.size(); ++i) {
          dA[i] += g[i];
          dB[i] += g[i];
        }
        break;
      }
      case Op::Mul: {
        const auto& A = in_val(0);
        const auto& B = in_val(1);
        auto& dA = in_grad(0);
        auto& dB = in_grad(1);
        for (size_t i = 0; i < g.size(); ++i) {
          dA[i] += g[i] * B[i];
          dB[i] += g[i] * A[i];
        }
        break;
      }
      case Op::Scale: {
        auto& dX = in_grad(0);
        for (size_t i = 0; i < g.size(); ++i) dX[i] += n.scalar * g[i];
        break;
      }
      case Op::Concat0: {
        size_t off = 0;
        for (size_t b = 0; b < n.in.size(); ++b) {
          auto& dX = in_grad(static_cast<int>(b));
          for (size_t i = 0; i < dX.size(); ++i) dX[i] += g[off + i];
          off += dX.size();
        }
        break;
      }
      case Op::Concat1: {
        int rows = n.shape[0], cols = n.shape[1];
        int off = 0;
        for (size_t b = 0; b < n.in.size(); ++b) {
          auto& dX = in_grad(static_cast<int>(b));
          int c = in_shape(static_cast<int>(b))[1];
          for (int i = 0; i < rows; ++i)
            for (int j = 0; j < c; ++j)
              dX[static_cast<size_t>(i) * c + j] += g[static_cast<size_t>(i) * cols + off + j];
          off += c;
        }
        break;
      }
      case Op::SoftmaxRows: {
        auto& dX = in_grad(0);
        int r = n.shape[0], c = n.shape[1];
        for (int i = 0; i < r; ++i) {
          const double* y = n.val.data() + static_cast<size_t>(i) * c;
          const double* gr = g.data() + static_cast<size_t>(i) * c;
          double dot = 0.0;
          for (int j = 0; j < c; ++j) dot += gr[j] * y[j];
          double* dx = dX.data() + static_cast<size_t>(i) * c;
          for (int j = 0; j < c; ++j) dx[j] += y[j] * (gr[j] - dot);
        }
        break;
      }
      case Op::MaskedSoftmaxRows: {
        const auto& M = in_val(1);
        auto& dX = in_grad(0);
        int r = n.shape[0], c = n.shape[1];
        for (int i = 0; i < r; ++i) {
          const double* y = n.val.data() + static_cast<size_t>(i) * c;
          const double* gr = g.data() + static_cast<size_t>(i) * c;
          const double* mr = M.data() + static_cast<size_t>(i) * c;
          double dot = 0.0;
          for (int j = 0; j < c; ++j)
            if (mr[j] != 0.0) dot += gr[j] * y[j];
          double* dx = dX.data() + static_cast<size_t>(i) * c;
          for (int j = 0; j < c; ++j)
            if (mr[j] != 0.0) dx[j] += y[j] * (gr[j] - dot);
        }
        break;
      }
      case Op::Sigmoid: {
        auto& dX = in_grad(0);
        for (size_t i = 0; i < g.size(); ++i) dX[i] += g[i] * n.val[i] * (1.0 - n.val[i]);
        break;
      }
      case Op::Tanh: {
        auto& dX = in_grad(0);
        for (size_t i = 0; i < g.size(); ++i) dX[i] += g[i] * (1.0 - n.val[i] * n.val[i]);
        break;
      }
      case Op::Relu: {
        const auto& X = in_val(0);
        auto& dX = in_grad(0);
        for (size_t i = 0; i < g.size(); ++i)
          if (X[i] > 0.0) dX[i] += g[i];
        break;
      }
      case Op::Elu: {
        const auto& X = in_val(0);
        auto& dX = in_grad(0);
        for (size_t i = 0; i < g.size(); ++i) dX[i] += g[i] * (X[i] > 0.0 ? 1.0 : n.val[i] + 1.0);
        break;
      }
      case Op::LeakyRelu: {
        const auto& X = in_val(0);
        auto& dX = in_grad(0);
        for (size_t i = 0; i < g.size(); ++i) dX[i] += g[i] * (X[i] > 0.0 ? 1.0 : n.scalar);
        break;
      }
      case Op::GatherRows: {
        auto& dT = in_grad(0);
        int c = in_shape(0)[1];
        for (size_t r = 0; r < n.ints.size(); ++r) {
          double* drow = dT.data() + static_cast<size_t>(n.ints[r]) * c;
          const double* grow = g.data() + r * c;
          for (int j = 0; j < c; ++j) drow[j] += grow[j];
        }
        break;
      }
      case Op::SliceCols: {
        auto& dX = in_grad(0);
        int rows = n.shape[0], len = n.ints[1], start = n.ints[0];
        int c = in_shape(0)[1];
        for (int i = 0; i < rows; ++i)
          for (int j = 0; j < len; ++j)
            dX[static_cast<size_t>(i) * c + start + j] += g[static_cast<size_t>(i) * len + j];
        break;
      }
      case Op::Reshape: {
        auto& dX = in_grad(0);
        for (size_t i = 0; i < g.size(); ++i) dX[i] += g[i];
        break;
      }
      case Op::SumAll: {
        auto& dX = in_grad(0);
        for (size_t i = 0; i < dX.size(); ++i) dX[i] += g[0];
        break;
      }
      case Op::MeanAll: {
        auto& dX = in_grad(0);
        double s = g[0] / static_cast<double>(dX.size());
        for (size_t i = 0; i < dX.size(); ++i) dX[i] += s;
        break;
      }
      case Op::MaskedFill: {
        const auto& M = in_val(1);
        auto& dX = in_grad(0);
        for (size_t i = 0; i < g.size(); ++i)
          if (M[i] == 0.0) dX[i] += g[i];
        break;
      }
      case Op::CrossEntropyLogits: {
        const auto& X = in_val(0);
        auto& dX = in_grad(0);
        int r = in_shape(0)[0], c = in_shape(0)[1];
        double scale = g[0] / static_cast<double>(r);
        for (int i = 0; i < r; ++i) {
          const double* xr = X.data() + static_cast<size_t>(i) * c;
          double* dx = dX.data() + static_cast<size_t>(i) * c;
          double mx = xr[0];
          for (int j = 1; j < c; ++j) mx = std::max(mx, xr[j]);
          double sum = 0.0;
          for (int j = 0; j < c; ++j) sum += std::exp(xr[j] - mx);
          for (int j = 0; j < c; ++j) {
            double p = std::exp(xr[j] - mx) / sum;
            dx[j] += scale * (p - (j == n.ints[i] ? 1.0 : 0.0));
          }
        }
        break;
      }
    }
  }

  // push leaf gradients out to their tensors
  for (Node& n : nodes_) {
    if (n.op != Op::Leaf || !n.leaf->requires_grad) continue;
    auto& dst = n.leaf->grad;
    for (size_t i = 0; i < dst.size(); ++i) dst[i] += n.grad[i];
  }
}

}  // namespace dgt
