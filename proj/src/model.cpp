#include "rgp/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "rgp/errors.hpp"
#include "rgp/rng.hpp"
#include <json.hpp>

namespace rgp {

namespace {

void fill_xavier(Matrix& w, int fan_in, int fan_out, Rng& rng) {
  const double bound = std::sqrt(6.0 / (fan_in + fan_out));
  for (double& v : w.data) v = (2.0 * rng_unit(rng) - 1.0) * bound;
}

void fill_xavier(Vector& w, int fan_in, int fan_out, Rng& rng) {
  const double bound = std::sqrt(6.0 / (fan_in + fan_out));
  for (double& v : w) v = (2.0 * rng_unit(rng) - 1.0) * bound;
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

ModelParams init_params(ModelDims dims, uint64_t seed) {
  require(dims.feature_dim >= 1 && dims.semantic_dim >= 1, "init_params: dims must be >= 1");
  const int f = dims.feature_dim, d = dims.semantic_dim;
  ModelParams p;
  p.dims = dims;
  p.w_s = Matrix(d, f);
  p.b_s = Vector(d, 0.0);
  p.w_c = Matrix(d, 2 * d);
  p.b_c = Vector(d, 0.0);
  p.w_m = Vector(d, 0.0);
  p.w_o0 = Matrix(d, d);
  p.b_o0 = Vector(d, 0.0);
  p.w_o1 = Matrix(2, d);

  Rng rng(splitmix64(seed));
  fill_xavier(p.w_s, f, d, rng);
  fill_xavier(p.w_c, 2 * d, d, rng);
  fill_xavier(p.w_m, d, 1, rng);
  fill_xavier(p.w_o0, d, d, rng);
  fill_xavier(p.w_o1, d, 2, rng);
  return p;
}

Vector semantic_map(const ModelParams& params, const FeatureVector& features) {
  return relu(affine(params.w_s, features, params.b_s));
}

Vector combine(const ModelParams& params, const Vector& x_first, const Vector& x_second) {
  const int d = params.dims.semantic_dim;
  require(static_cast<int>(x_first.size()) == d && static_cast<int>(x_second.size()) == d,
          "combine: semantic dim mismatch");
  Vector cat(x_first);
  cat.insert(cat.end(), x_second.begin(), x_second.end());
  return relu(affine(params.w_c, cat, params.b_c));
}

double merge_score(const ModelParams& params, const Vector& x_combined) {
  return dot(params.w_m, x_combined);
}

std::array<double, 2> objectness(const ModelParams& params, const Vector& x) {
  const Vector hidden = relu(affine(params.w_o0, x, params.b_o0));
  const Vector logits = affine(params.w_o1, hidden, Vector(2, 0.0));
  const Vector p = softmax2(logits);
  return {p[0], p[1]};
}

GradStore GradStore::zeros_like(const ModelParams& params) {
  GradStore g;
  g.w_s = Matrix(params.w_s.rows, params.w_s.cols);
  g.b_s = Vector(params.b_s.size(), 0.0);
  g.w_c = Matrix(params.w_c.rows, params.w_c.cols);
  g.b_c = Vector(params.b_c.size(), 0.0);
  g.w_m = Vector(params.w_m.size(), 0.0);
  g.w_o0 = Matrix(params.w_o0.rows, params.w_o0.cols);
  g.b_o0 = Vector(params.b_o0.size(), 0.0);
  g.w_o1 = Matrix(params.w_o1.rows, params.w_o1.cols);
  return g;
}

void GradStore::add(const GradStore& other) {
  auto add_vec = [](Vector& dst, const Vector& src) {
    for (size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  };
  add_vec(w_s.data, other.w_s.data);
  add_vec(b_s, other.b_s);
  add_vec(w_c.data, other.w_c.data);
  add_vec(b_c, other.b_c);
  add_vec(w_m, other.w_m);
  add_vec(w_o0.data, other.w_o0.data);
  add_vec(b_o0, other.b_o0);
  add_vec(w_o1.data, other.w_o1.data);
  count += other.count;
}

const char* GradStore::first_non_finite() const {
  if (!all_finite(w_s.data)) return "w_s";
  if (!all_finite(b_s)) return "b_s";
  if (!all_finite(w_c.data)) return "w_c";
  if (!all_finite(b_c)) return "b_c";
  if (!all_finite(w_m)) return "w_m";
  if (!all_finite(w_o0.data)) return "w_o0";
  if (!all_finite(b_o0)) return "b_o0";
  if (!all_finite(w_o1.data)) return "w_o1";
  return nullptr;
}

double tree_score(const MergeTree& tree) {
  double acc = 0.0;
  for (const MergeNode& n : tree.nodes)
    if (!n.is_leaf()) acc += n.merge_score;
  return acc;
}

MergeEngine::MergeEngine(const RegionGraph& graph, const std::vector<FeatureVector>& features,
                         const ModelParams& params)
    : params_(params) {
  const int n = graph.region_count();
  require(n >= 1, "MergeEngine: graph has no regions");
  require(static_cast<int>(features.size()) == n, "MergeEngine: feature count mismatch");

  tree_.leaf_count = n;
  tree_.nodes.reserve(static_cast<size_t>(2) * n - 1);
  for (int i = 0; i < n; ++i) {
    MergeNode leaf;
    leaf.id = i;
    leaf.semantic = semantic_map(params_, features[i]);
    leaf.pixel_count = graph.nodes[i].pixel_count;
    leaf.box = graph.nodes[i].box;
    tree_.nodes.push_back(std::move(leaf));
  }
  live_count_ = n;

  adjacency_.resize(static_cast<size_t>(2) * n - 1);
  for (int i = 0; i < n; ++i) adjacency_[i] = graph.neighbors[i];
  for (const auto& [a, b] : graph.edges) candidates_.push_back(make_candidate(a, b));
}

MergeEngine::Candidate MergeEngine::make_candidate(int a, int b) const {
  Candidate c;
  c.a = a;
  c.b = b;
  c.combined = combine(params_, tree_.nodes[a].semantic, tree_.nodes[b].semantic);
  c.score = merge_score(params_, c.combined);
  return c;
}

int MergeEngine::merge(int a, int b) {
  if (a > b) std::swap(a, b);
  auto it = std::find_if(candidates_.begin(), candidates_.end(),
                         [&](const Candidate& c) { return c.a == a && c.b == b; });
  require(it != candidates_.end(), "MergeEngine::merge: pair is not a live candidate");

  const int id = static_cast<int>(tree_.nodes.size());
  MergeNode node;
  node.id = id;
  node.left = a;
  node.right = b;
  node.semantic = std::move(it->combined);
  node.merge_score = it->score;
  node.pixel_count = tree_.nodes[a].pixel_count + tree_.nodes[b].pixel_count;
  node.box = box_union(tree_.nodes[a].box, tree_.nodes[b].box);
  tree_.nodes.push_back(std::move(node));

  // New neighbour set = union of the children's, minus the children.
  std::vector<int> merged_adj;
  std::set_union(adjacency_[a].begin(), adjacency_[a].end(), adjacency_[b].begin(),
                 adjacency_[b].end(), std::back_inserter(merged_adj));
  std::erase_if(merged_adj, [&](int v) { return v == a || v == b; });
  adjacency_[id] = merged_adj;
  for (int v : merged_adj) {
    std::erase_if(adjacency_[v], [&](int u) { return u == a || u == b; });
    adjacency_[v].insert(std::lower_bound(adjacency_[v].begin(), adjacency_[v].end(), id), id);
  }
  adjacency_[a].clear();
  adjacency_[b].clear();

  std::erase_if(candidates_,
                [&](const Candidate& c) { return c.a == a || c.b == b || c.a == b || c.b == a; });
  for (int v : merged_adj) candidates_.push_back(make_candidate(v, id));
  std::sort(candidates_.begin(), candidates_.end(),
            [](const Candidate& x, const Candidate& y) {
              return x.a != y.a ? x.a < y.a : x.b < y.b;
            });
  --live_count_;
  return id;
}

// ---------------------------------------------------------------------------
// Serialization.

namespace {

void write_le_bytes(std::ofstream& out, const void* src, size_t size) {
  if constexpr (std::endian::native == std::endian::little) {
    out.write(static_cast<const char*>(src), static_cast<std::streamsize>(size));
  } else {
    const auto* bytes = static_cast<const uint8_t*>(src);
    for (size_t i = 0; i < size; i += 8)
      for (size_t j = 0; j < 8; ++j) out.put(static_cast<char>(bytes[i + 7 - j]));
  }
}

void write_doubles(std::ofstream& out, const std::vector<double>& v) {
  write_le_bytes(out, v.data(), v.size() * sizeof(double));
}

void read_doubles(std::ifstream& in, std::vector<double>& v, const std::filesystem::path& path) {
  in.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(v.size() * sizeof(double)));
  if (!in) throw IoError("truncated model file " + path.string());
  if constexpr (std::endian::native == std::endian::big) {
    for (double& x : v) {
      uint64_t bits;
      std::memcpy(&bits, &x, 8);
      bits = std::byteswap(bits);
      std::memcpy(&x, &bits, 8);
    }
  }
}

}  // namespace

void save_model(const ModelParams& params, const std::filesystem::path& path) {
  nlohmann::ordered_json header{
      {"format", 1}, {"F", params.dims.feature_dim}, {"D", params.dims.semantic_dim}};
  const std::string header_str = header.dump();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  uint64_t len = header_str.size();
  if constexpr (std::endian::native == std::endian::big) len = std::byteswap(len);
  out.write(reinterpret_cast<const char*>(&len), 8);
  out.write(header_str.data(), static_cast<std::streamsize>(header_str.size()));
  write_doubles(out, params.w_s.data);
  write_doubles(out, params.b_s);
  write_doubles(out, params.w_c.data);
  write_doubles(out, params.b_c);
  write_doubles(out, params.w_m);
  write_doubles(out, params.w_o0.data);
  write_doubles(out, params.b_o0);
  write_doubles(out, params.w_o1.data);
  if (!out) throw IoError("short write to " + path.string());
}

ModelParams load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model " + path.string());
  uint64_t len = 0;
  in.read(reinterpret_cast<char*>(&len), 8);
  if (!in) throw IoError("truncated model file " + path.string());
  if constexpr (std::endian::native == std::endian::big) len = std::byteswap(len);
  if (len > 1 << 20) throw IoError("implausible header length in " + path.string());
  std::string header_str(len, '\0');
  in.read(header_str.data(), static_cast<std::streamsize>(len));
  if (!in) throw IoError("truncated model file " + path.string());

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(header_str);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(path.string() + ": bad model header: " + e.what());
  }
  if (header.value("format", 0) != 1)
    throw IoError(path.string() + ": unsupported model format");

  ModelDims dims{header.at("F").get<int>(), header.at("D").get<int>()};
  if (dims.feature_dim < 1 || dims.semantic_dim < 1)
    throw IoError(path.string() + ": invalid dims in model header");
  ModelParams p = init_params(dims, 0);
  read_doubles(in, p.w_s.data, path);
  read_doubles(in, p.b_s, path);
  read_doubles(in, p.w_c.data, path);
  read_doubles(in, p.b_c, path);
  read_doubles(in, p.w_m, path);
  read_doubles(in, p.w_o0.data, path);
  read_doubles(in, p.b_o0, path);
  read_doubles(in, p.w_o1.data, path);
  char extra;
  if (in.read(&extra, 1)) throw IoError("trailing bytes in model file " + path.string());
  return p;
}

}  // namespace rgp
