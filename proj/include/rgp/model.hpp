#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "rgp/features.hpp"
#include "rgp/nnet.hpp"
#include "rgp/segment.hpp"

namespace rgp {

struct ModelDims {
  int feature_dim = kDefaultFeatureDim;  // F
  int semantic_dim = 32;                 // D
};

/// Learnable weights of the four network modules: semantic mapper (w_s, b_s),
/// feature combiner (w_c, b_c), merging scorer (w_m, bias-free) and the
/// two-layer objectness head (w_o0, b_o0, w_o1).
struct ModelParams {
  ModelDims dims;
  Matrix w_s;   // D x F
  Vector b_s;   // D
  Matrix w_c;   // D x 2D
  Vector b_c;   // D
  Vector w_m;   // D
  Matrix w_o0;  // D x D
  Vector b_o0;  // D
  Matrix w_o1;  // 2 x D
};

// Xavier-uniform weights (sqrt(6/(fan_in+fan_out)) bound per tensor), zero
// biases, deterministic per seed.
ModelParams init_params(ModelDims dims, uint64_t seed);

Vector semantic_map(const ModelParams& params, const FeatureVector& features);
Vector combine(const ModelParams& params, const Vector& x_first, const Vector& x_second);
double merge_score(const ModelParams& params, const Vector& x_combined);
// Returns {p_background, p_object}; p_object is the ranking score.
std::array<double, 2> objectness(const ModelParams& params, const Vector& x);

/// Gradient buffers shape-matched to ModelParams, plus an accumulation
/// counter. Zeroed between optimizer steps.
struct GradStore {
  Matrix w_s;
  Vector b_s;
  Matrix w_c;
  Vector b_c;
  Vector w_m;
  Matrix w_o0;
  Vector b_o0;
  Matrix w_o1;
  long count = 0;

  static GradStore zeros_like(const ModelParams& params);
  void add(const GradStore& other);
  // Name of the first tensor containing a non-finite entry, or nullptr.
  const char* first_non_finite() const;
};

// ---------------------------------------------------------------------------
// Merge trees.

struct MergeNode {
  int id = 0;
  int left = -1, right = -1;  // child ids, left < right; -1 marks a leaf
  Vector semantic;            // post-ReLU semantic vector
  long pixel_count = 0;
  Box box;
  double merge_score = 0.0;  // internal nodes only
  double objectness = 0.0;   // p_object, filled on demand

  bool is_leaf() const { return left < 0; }
};

/// Binary merge tree over the initial regions: nodes 0..N-1 are the leaves
/// (ids equal region ids), internal nodes follow in merge order, so every
/// parent has a larger id than its children and the last node is the root.
struct MergeTree {
  int leaf_count = 0;
  std::vector<MergeNode> nodes;

  int root() const { return static_cast<int>(nodes.size()) - 1; }
  int internal_count() const { return static_cast<int>(nodes.size()) - leaf_count; }
};

// Sum of merging scores over internal nodes.
double tree_score(const MergeTree& tree);

/// Incremental forest-merging state shared by the greedy and randomized
/// builders. Tracks the live adjacent pairs with their combined semantics and
/// merging scores; after every merge only pairs touching the new node are
/// rescored. Children are combined lower-id-first.
class MergeEngine {
 public:
  struct Candidate {
    int a = 0, b = 0;  // live root ids, a < b
    double score = 0.0;
    Vector combined;  // semantic vector of the would-be parent
  };

  MergeEngine(const RegionGraph& graph, const std::vector<FeatureVector>& features,
              const ModelParams& params);

  bool done() const { return live_count_ <= 1; }
  const std::vector<Candidate>& candidates() const { return candidates_; }
  const MergeTree& tree() const { return tree_; }
  // Merges the live pair (a, b); returns the new node id.
  int merge(int a, int b);
  MergeTree take_tree() { return std::move(tree_); }

 private:
  const ModelParams& params_;
  MergeTree tree_;
  std::vector<std::vector<int>> adjacency_;  // per node id, sorted live neighbours
  std::vector<Candidate> candidates_;        // sorted by (a, b)
  int live_count_ = 0;

  Candidate make_candidate(int a, int b) const;
};

// ---------------------------------------------------------------------------
// Serialization: 8-byte little-endian header length, JSON header
// {"format":1,"F":...,"D":...}, then the tensors as little-endian 64-bit
// floats in the order w_s, b_s, w_c, b_c, w_m, w_o0, b_o0, w_o1.

void save_model(const ModelParams& params, const std::filesystem::path& path);
ModelParams load_model(const std::filesystem::path& path);

}  // namespace rgp
