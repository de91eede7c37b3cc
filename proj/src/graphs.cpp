#include "dgt/graphs.hpp"

namespace dgt {

LabeledAdjacencySet build_labeled_adjacency(const EncodedSentence& sentence, int L) {
  int n = sentence.n();
  LabeledAdjacencySet set;
  set.n = n;
  set.L = L;
  set.fwd.assign(static_cast<size_t>(L), Tensor::zeros({n, n}));
  set.rev.assign(static_cast<size_t>(L), Tensor::zeros({n, n}));
  set.loop = Tensor::identity(n);
  for (const auto& e : sentence.edges) {
    if (e.label < 0 || e.label >= L)
      throw ValidationError("build_labeled_adjacency: label id " + std::to_string(e.label) +
                            " outside [0," + std::to_string(L) + ")");
    set.fwd[static_cast<size_t>(e.label)].at(e.head, e.dep) = 1.0;
    set.rev[static_cast<size_t>(e.label)].at(e.dep, e.head) = 1.0;
  }
  return set;
}

HomogeneousTriple collapse_homogeneous(const LabeledAdjacencySet& set) {
  HomogeneousTriple triple;
  triple.fwd = Tensor::zeros({set.n, set.n});
  for (const auto& a : set.fwd)
    for (size_t i = 0; i < a.data.size(); ++i)
      if (a.data[i] != 0.0) triple.fwd.data[i] = 1.0;
  triple.rev = Tensor::zeros({set.n, set.n});
  for (int i = 0; i < set.n; ++i)
    for (int j = 0; j < set.n; ++j) triple.rev.at(j, i) = triple.fwd.at(i, j);
  triple.loop = Tensor::identity(set.n);
  return triple;
}

Tensor matrix_power(const Tensor& a, int t) {
  if (a.ndim() != 2 || a.shape[0] != a.shape[1])
    throw ValidationError("matrix_power: matrix must be square, got " + shape_str(a.shape));
  if (t < 1) throw ValidationError("matrix_power: t must be >= 1");
  int n = a.shape[0];
  Tensor out = a;
  for (int k = 1; k < t; ++k) {
    Tensor next = Tensor::zeros({n, n});
    for (int i = 0; i < n; ++i)
      for (int q = 0; q < n; ++q) {
        double v = out.at(i, q);
        if (v == 0.0) continue;
        for (int j = 0; j < n; ++j) next.at(i, j) += v * a.at(q, j);
      }
    out = std::move(next);
  }
  return out;
}

namespace {

int64_t count_paths(const std::vector<Tensor>& stack, const std::vector<int>& labels, size_t depth,
                    int at, int v) {
  const Tensor& a = stack[static_cast<size_t>(labels[depth])];
  int n = a.shape[0];
  if (depth + 1 == labels.size()) return a.at(at, v) != 0.0 ? 1 : 0;
  int64_t total = 0;
  for (int mid = 0; mid < n; ++mid)
    if (a.at(at, mid) != 0.0) total += count_paths(stack, labels, depth + 1, mid, v);
  return total;
}

}  // namespace

int64_t path_count_oracle(const LabeledAdjacencySet& set, Direction direction,
                          const std::vector<int>& labels, int u, int v) {
  if (labels.empty()) throw ValidationError("path_count_oracle: need at least one label");
  for (int l : labels)
    if (l < 0 || l >= set.L) throw ValidationError("path_count_oracle: label id out of range");
  return count_paths(set.stack(direction), labels, 0, u, v);
}

}  // namespace dgt
