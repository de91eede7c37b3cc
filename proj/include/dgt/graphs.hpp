#pragma once

#include <vector>

#include "dgt/corpus.hpp"
#include "dgt/tensor.hpp"

namespace dgt {

enum class Direction { Fwd, Rev };

// Per-label binary adjacency stacks for one sentence. rev[l] is always the
// transpose of fwd[l]; loop is the identity.
struct LabeledAdjacencySet {
  int n = 0;
  int L = 0;
  std::vector<Tensor> fwd;
  std::vector<Tensor> rev;
  Tensor loop;

  const std::vector<Tensor>& stack(Direction d) const { return d == Direction::Fwd ? fwd : rev; }
};

// Label-blind collapse used by the baseline models.
struct HomogeneousTriple {
  Tensor fwd, rev, loop;
};

LabeledAdjacencySet build_labeled_adjacency(const EncodedSentence& sentence, int L);

HomogeneousTriple collapse_homogeneous(const LabeledAdjacencySet& set);

// Exact repeated product, t >= 1. Order-0 handling is a model-level decision
// and deliberately not provided here.
Tensor matrix_power(const Tensor& a, int t);

// Number of directed paths u -> ... -> v whose i-th edge carries labels[i].
// Exhaustive; meant for verification at small n.
int64_t path_count_oracle(const LabeledAdjacencySet& set, Direction direction,
                          const std::vector<int>& labels, int u, int v);

}  // namespace dgt
