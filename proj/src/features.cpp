#include "rgp/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rgp/errors.hpp"

namespace rgp {

namespace {

struct GrayPlane {
  int width = 0, height = 0;
  std::vector<double> v;
};

GrayPlane to_gray(const Image& image) {
  GrayPlane g{image.width, image.height,
              std::vector<double>(static_cast<size_t>(image.width) * image.height)};
  for (size_t i = 0; i < g.v.size(); ++i)
    g.v[i] = (image.data[i * 3] + image.data[i * 3 + 1] + image.data[i * 3 + 2]) / 3.0;
  return g;
}

// Border handling: indices reflect across the image edge (-1 -> 0, -2 -> 1).
inline int reflect(int i, int n) {
  if (i < 0) return -i - 1;
  if (i >= n) return 2 * n - i - 1;
  return i;
}

inline void sobel_at(const GrayPlane& g, int x, int y, double* gx, double* gy) {
  auto at = [&](int xx, int yy) {
    return g.v[static_cast<size_t>(reflect(yy, g.height)) * g.width + reflect(xx, g.width)];
  };
  const double tl = at(x - 1, y - 1), tc = at(x, y - 1), tr = at(x + 1, y - 1);
  const double ml = at(x - 1, y), mr = at(x + 1, y);
  const double bl = at(x - 1, y + 1), bc = at(x, y + 1), br = at(x + 1, y + 1);
  *gx = (tr + 2.0 * mr + br) - (tl + 2.0 * ml + bl);
  *gy = (bl + 2.0 * bc + br) - (tl + 2.0 * tc + tr);
}

// Membership test abstracted so the single-region and whole-segmentation
// paths run the exact same accumulation.
template <typename Inside>
FeatureVector extract_impl(const Image& image, const GrayPlane& gray,
                           std::span<const int> pixels, const Box& box, int feature_dim,
                           Inside inside) {
  require(!pixels.empty(), "extract_features: empty region");
  require(feature_dim >= kBaseFeatureCount, "extract_features: feature_dim too small");
  const int w = image.width, h = image.height;
  const double canvas = static_cast<double>(w) * h;
  FeatureVector f(static_cast<size_t>(feature_dim), 0.0);

  // Colour histograms and channel means.
  double mean[3] = {0, 0, 0};
  for (int p : pixels) {
    for (int c = 0; c < 3; ++c) {
      const uint8_t v = image.data[static_cast<size_t>(p) * 3 + c];
      f[static_cast<size_t>(c) * 8 + (v >> 5)] += 1.0;
      mean[c] += v;
    }
  }
  const double inv_count = 1.0 / static_cast<double>(pixels.size());
  for (int c = 0; c < 3; ++c) {
    for (int b = 0; b < 8; ++b) f[static_cast<size_t>(c) * 8 + b] *= inv_count;
    f[24 + c] = mean[c] * inv_count / 255.0;
  }

  // Gradient-orientation histogram.
  constexpr double kPi = std::numbers::pi;
  double grad_total = 0.0;
  for (int p : pixels) {
    double gx = 0.0, gy = 0.0;
    sobel_at(gray, p % w, p / w, &gx, &gy);
    const double mag = std::sqrt(gx * gx + gy * gy);
    if (mag <= 0.0) continue;
    const int bin = std::min(7, static_cast<int>((std::atan2(gy, gx) + kPi) / (kPi / 4.0)));
    f[27 + bin] += mag;
    grad_total += mag;
  }
  if (grad_total > 0.0) {
    for (int b = 0; b < 8; ++b) f[27 + b] /= grad_total;
  } else {
    for (int b = 0; b < 8; ++b) f[27 + b] = 0.125;
  }

  // Geometry.
  const double area = static_cast<double>(pixels.size());
  const double bw = box.x1 - box.x0, bh = box.y1 - box.y0;
  f[35] = std::log1p(area) / std::log1p(canvas);
  f[36] = area / canvas;
  f[37] = bw / w;
  f[38] = bh / h;
  f[39] = std::clamp(bw / bh, 0.1, 10.0) / 10.0;
  f[40] = (box.x0 + box.x1) / (2.0 * w);
  f[41] = (box.y0 + box.y1) / (2.0 * h);

  // Boundary contrast against adjacent exterior pixels (4-neighbourhood).
  double contrast[3] = {0, 0, 0};
  long pairs = 0;
  constexpr int dx[4] = {-1, 1, 0, 0};
  constexpr int dy[4] = {0, 0, -1, 1};
  for (int p : pixels) {
    const int x = p % w, y = p / w;
    for (int d = 0; d < 4; ++d) {
      const int nx = x + dx[d], ny = y + dy[d];
      if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
      const int q = ny * w + nx;
      if (inside(q)) continue;
      ++pairs;
      for (int c = 0; c < 3; ++c)
        contrast[c] += std::abs(static_cast<double>(image.data[static_cast<size_t>(p) * 3 + c]) -
                                static_cast<double>(image.data[static_cast<size_t>(q) * 3 + c]));
    }
  }
  if (pairs > 0)
    for (int c = 0; c < 3; ++c) f[42 + c] = contrast[c] / static_cast<double>(pairs) / 255.0;

  return f;
}

}  // namespace

FeatureVector extract_features(const Image& image, std::span<const int> region_pixels,
                               const Box& region_box, int feature_dim) {
  const GrayPlane gray = to_gray(image);
  std::vector<uint8_t> member(static_cast<size_t>(image.width) * image.height, 0);
  for (int p : region_pixels) member[p] = 1;
  return extract_impl(image, gray, region_pixels, region_box, feature_dim,
                      [&](int q) { return member[q] != 0; });
}

std::vector<FeatureVector> extract_all_features(const Image& image, const Segmentation& seg,
                                                const RegionGraph& graph, int feature_dim,
                                                Exec exec) {
  const GrayPlane gray = to_gray(image);
  std::vector<FeatureVector> feats(graph.nodes.size());
  par_for(exec, graph.region_count(), [&](int r) {
    feats[r] = extract_impl(image, gray, graph.nodes[r].pixels, graph.nodes[r].box, feature_dim,
                            [&](int q) { return seg.region_of[q] == r; });
  });
  return feats;
}

}  // namespace rgp
