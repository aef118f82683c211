#include "rgp/segment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rgp/errors.hpp"

namespace rgp {

namespace {

struct PixelEdge {
  int a = 0, b = 0;
  double w = 0.0;
};

// Disjoint-set forest with path compression and union by size.
class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    int root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) x = std::exchange(parent_[x], root);
    return root;
  }

  int join(int a, int b) {
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return a;
  }

  long size(int root) const { return size_[root]; }

 private:
  std::vector<int> parent_;
  std::vector<long> size_;
};

std::vector<double> gaussian_kernel(double sigma) {
  const int half = static_cast<int>(std::ceil(sigma * 4.0));
  std::vector<double> kernel(half + 1);
  for (int i = 0; i <= half; ++i) kernel[i] = std::exp(-0.5 * (i / sigma) * (i / sigma));
  double sum = kernel[0];
  for (int i = 1; i <= half; ++i) sum += 2.0 * kernel[i];
  for (double& v : kernel) v /= sum;
  return kernel;
}

// Symmetric 1D convolution with clamped borders, horizontal direction.
void convolve_rows(const std::vector<double>& src, int width, int height,
                   const std::vector<double>& kernel, Exec exec, std::vector<double>& dst) {
  const int half = static_cast<int>(kernel.size()) - 1;
  par_for(exec, height, [&](int y) {
    const double* row = &src[static_cast<size_t>(y) * width];
    double* out = &dst[static_cast<size_t>(y) * width];
    for (int x = 0; x < width; ++x) {
      double acc = kernel[0] * row[x];
      for (int i = 1; i <= half; ++i)
        acc += kernel[i] * (row[std::max(x - i, 0)] + row[std::min(x + i, width - 1)]);
      out[x] = acc;
    }
  });
}

void transpose(const std::vector<double>& src, int width, int height, std::vector<double>& dst) {
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      dst[static_cast<size_t>(x) * height + y] = src[static_cast<size_t>(y) * width + x];
}

}  // namespace

std::vector<std::vector<double>> smooth_channels(const Image& image, double sigma, Exec exec) {
  const int w = image.width, h = image.height;
  std::vector<std::vector<double>> channels(3, std::vector<double>(static_cast<size_t>(w) * h));
  for (int c = 0; c < 3; ++c)
    for (size_t i = 0; i < channels[c].size(); ++i) channels[c][i] = image.data[i * 3 + c];
  if (sigma <= 0.0) return channels;

  const std::vector<double> kernel = gaussian_kernel(sigma);
  std::vector<double> tmp(static_cast<size_t>(w) * h), tmp2(static_cast<size_t>(w) * h);
  for (int c = 0; c < 3; ++c) {
    convolve_rows(channels[c], w, h, kernel, exec, tmp);
    transpose(tmp, w, h, tmp2);
    convolve_rows(tmp2, h, w, kernel, exec, tmp);
    transpose(tmp, h, w, channels[c]);
  }
  return channels;
}

Segmentation fh_segment(const Image& image, double k, int min_size, double sigma, Exec exec) {
  require(k > 0.0, "fh_segment: k must be positive");
  require(min_size >= 1, "fh_segment: min_size must be >= 1");
  require(sigma >= 0.0, "fh_segment: sigma must be non-negative");
  const int w = image.width, h = image.height;
  const int n = w * h;

  const std::vector<std::vector<double>> ch = smooth_channels(image, sigma, exec);
  auto weight = [&](int p, int q) {
    double acc = 0.0;
    for (int c = 0; c < 3; ++c) {
      const double d = ch[c][p] - ch[c][q];
      acc += d * d;
    }
    return std::sqrt(acc);
  };

  // 8-connectivity: east, south, south-east, north-east per scan pixel.
  std::vector<PixelEdge> edges;
  edges.reserve(static_cast<size_t>(n) * 4);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int p = y * w + x;
      if (x < w - 1) edges.push_back({p, p + 1, weight(p, p + 1)});
      if (y < h - 1) edges.push_back({p, p + w, weight(p, p + w)});
      if (x < w - 1 && y < h - 1) edges.push_back({p, p + w + 1, weight(p, p + w + 1)});
      if (x < w - 1 && y > 0) edges.push_back({p, p - w + 1, weight(p, p - w + 1)});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const PixelEdge& a, const PixelEdge& b) {
    if (a.w != b.w) return a.w < b.w;
    if (a.a != b.a) return a.a < b.a;
    return a.b < b.b;
  });

  UnionFind uf(n);
  std::vector<double> threshold(n, k);  // internal(singleton) + k/1
  for (const PixelEdge& e : edges) {
    const int a = uf.find(e.a);
    const int b = uf.find(e.b);
    if (a == b) continue;
    if (e.w <= threshold[a] && e.w <= threshold[b]) {
      const int root = uf.join(a, b);
      threshold[root] = e.w + k / static_cast<double>(uf.size(root));
    }
  }

  // Absorb undersized components. Ascending weight order means a small
  // component merges across its cheapest boundary edge first.
  for (const PixelEdge& e : edges) {
    const int a = uf.find(e.a);
    const int b = uf.find(e.b);
    if (a != b && (uf.size(a) < min_size || uf.size(b) < min_size)) uf.join(a, b);
  }

  Segmentation seg;
  seg.width = w;
  seg.height = h;
  seg.region_of.assign(n, -1);
  std::vector<int32_t> id_of_root(n, -1);
  int next = 0;
  for (int p = 0; p < n; ++p) {
    const int root = uf.find(p);
    if (id_of_root[root] < 0) id_of_root[root] = next++;
    seg.region_of[p] = id_of_root[root];
  }
  seg.region_count = next;
  return seg;
}

RegionGraph build_region_graph(const Segmentation& seg) {
  const int w = seg.width, h = seg.height;
  RegionGraph graph;
  graph.nodes.resize(seg.region_count);
  for (RegionNode& node : graph.nodes) node.box = {w, h, 0, 0};

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int p = y * w + x;
      RegionNode& node = graph.nodes[seg.region_of[p]];
      ++node.pixel_count;
      node.pixels.push_back(p);
      node.box.x0 = std::min(node.box.x0, x);
      node.box.y0 = std::min(node.box.y0, y);
      node.box.x1 = std::max(node.box.x1, x + 1);
      node.box.y1 = std::max(node.box.y1, y + 1);
    }
  }

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int a = seg.region_of[y * w + x];
      if (x < w - 1) {
        const int b = seg.region_of[y * w + x + 1];
        if (a != b) graph.edges.emplace_back(std::min(a, b), std::max(a, b));
      }
      if (y < h - 1) {
        const int b = seg.region_of[(y + 1) * w + x];
        if (a != b) graph.edges.emplace_back(std::min(a, b), std::max(a, b));
      }
    }
  }
  std::sort(graph.edges.begin(), graph.edges.end());
  graph.edges.erase(std::unique(graph.edges.begin(), graph.edges.end()), graph.edges.end());

  graph.neighbors.resize(graph.nodes.size());
  for (const auto& [a, b] : graph.edges) {
    graph.neighbors[a].push_back(b);
    graph.neighbors[b].push_back(a);
  }
  return graph;
}

LabelMask segmentation_to_mask(const Segmentation& seg) {
  LabelMask mask(seg.width, seg.height);
  for (size_t i = 0; i < mask.labels.size(); ++i)
    mask.labels[i] = static_cast<uint32_t>(seg.region_of[i]) & 0xff;
  return mask;
}

}  // namespace rgp
