#include "rgp/scene.hpp"

#include <algorithm>
#include <cmath>

#include "rgp/errors.hpp"
#include "rgp/rng.hpp"

namespace rgp {

namespace {

constexpr int kMaxAttempts = 100;
constexpr double kMinVisibleFraction = 0.005;

int clamp_u8(int v) { return std::clamp(v, 0, 255); }

struct Placement {
  Shape shape;
  Box box;
  int corner = 0;  // removed quadrant for l_shape
};

bool shape_contains(const Placement& p, int x, int y) {
  const Box& b = p.box;
  switch (p.shape) {
    case Shape::rectangle:
      return true;
    case Shape::ellipse: {
      const double rx = (b.x1 - b.x0) / 2.0;
      const double ry = (b.y1 - b.y0) / 2.0;
      const double dx = (x - b.x0 - (b.x1 - b.x0 - 1) / 2.0) / rx;
      const double dy = (y - b.y0 - (b.y1 - b.y0 - 1) / 2.0) / ry;
      return dx * dx + dy * dy <= 1.0;
    }
    case Shape::l_shape: {
      const int hw = (b.x1 - b.x0 + 1) / 2;
      const int hh = (b.y1 - b.y0 + 1) / 2;
      const bool right = (p.corner & 1) != 0;
      const bool bottom = (p.corner & 2) != 0;
      const bool in_x = right ? x >= b.x1 - hw : x < b.x0 + hw;
      const bool in_y = bottom ? y >= b.y1 - hh : y < b.y0 + hh;
      return !(in_x && in_y);
    }
  }
  return false;
}

std::vector<int> shape_pixels(const Placement& p, int width) {
  std::vector<int> pixels;
  for (int y = p.box.y0; y < p.box.y1; ++y)
    for (int x = p.box.x0; x < p.box.x1; ++x)
      if (shape_contains(p, x, y)) pixels.push_back(y * width + x);
  return pixels;
}

bool boxes_overlap(const Box& a, const Box& b) {
  return a.x0 < b.x1 && b.x0 < a.x1 && a.y0 < b.y1 && b.y0 < a.y1;
}

int color_distance(const std::array<int, 3>& a, const std::array<int, 3>& b) {
  int d = 0;
  for (int c = 0; c < 3; ++c) d = std::max(d, std::abs(a[c] - b[c]));
  return d;
}

std::array<int, 3> draw_fill_color(Rng& rng, const SceneConfig& cfg,
                                   const std::vector<std::array<int, 3>>& used) {
  std::array<int, 3> color{};
  for (int attempt = 0; attempt < 64; ++attempt) {
    for (int c = 0; c < 3; ++c) color[c] = rng_range(rng, 0, 255);
    if (color_distance(color, cfg.background.color_a) < 60) continue;
    if (cfg.background.checker && color_distance(color, cfg.background.color_b) < 60) continue;
    bool clash = false;
    for (const auto& u : used)
      if (color_distance(color, u) < 50) clash = true;
    if (!clash) break;
  }
  return color;
}

void paint_background(Rng& rng, const SceneConfig& cfg, Image& img) {
  const BackgroundConfig& bg = cfg.background;
  for (int y = 0; y < cfg.height; ++y) {
    for (int x = 0; x < cfg.width; ++x) {
      const std::array<int, 3>& base =
          bg.checker && ((x / bg.cell + y / bg.cell) % 2 == 1) ? bg.color_b : bg.color_a;
      uint8_t* px = img.pixel(x, y);
      for (int c = 0; c < 3; ++c) {
        const int noise = bg.noise > 0 ? rng_range(rng, -bg.noise, bg.noise) : 0;
        px[c] = static_cast<uint8_t>(clamp_u8(base[c] + noise));
      }
    }
  }
}

}  // namespace

std::pair<Image, GroundTruth> generate_scene(const SceneConfig& config) {
  require(config.width >= 8 && config.height >= 8, "generate_scene: canvas too small");
  require(config.min_objects >= 1 && config.min_objects <= config.max_objects,
          "generate_scene: empty object count range");
  require(!config.shapes.empty(), "generate_scene: empty shape palette");

  Rng rng(splitmix64(config.seed));
  Image img(config.width, config.height);
  LabelMask mask(config.width, config.height);
  paint_background(rng, config, img);

  const long canvas = static_cast<long>(config.width) * config.height;
  const long min_visible = std::max<long>(1, static_cast<long>(canvas * kMinVisibleFraction));
  const int min_dim = std::min(config.width, config.height);
  const int size_lo = std::max(8, min_dim * 15 / 100);
  const int size_hi = std::max(size_lo, min_dim * 45 / 100);

  const int wanted = rng_range(rng, config.min_objects, config.max_objects);
  std::vector<Box> kept_boxes;
  std::vector<std::array<int, 3>> kept_colors;
  std::vector<long> visible;  // per kept instance

  for (int obj = 0; obj < wanted; ++obj) {
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
      Placement p;
      p.shape = config.shapes[rng_below(rng, config.shapes.size())];
      const int w = rng_range(rng, size_lo, size_hi);
      const int h = rng_range(rng, size_lo, size_hi);
      p.box.x0 = rng_range(rng, 0, config.width - w);
      p.box.y0 = rng_range(rng, 0, config.height - h);
      p.box.x1 = p.box.x0 + w;
      p.box.y1 = p.box.y0 + h;
      if (p.shape == Shape::l_shape) p.corner = static_cast<int>(rng_below(rng, 4));

      bool overlaps = false;
      for (const Box& b : kept_boxes) overlaps = overlaps || boxes_overlap(p.box, b);
      if (overlaps && !(config.occlusion_prob > 0.0 && rng_unit(rng) < config.occlusion_prob))
        continue;

      const std::vector<int> pixels = shape_pixels(p, config.width);
      if (static_cast<long>(pixels.size()) < min_visible) continue;

      // The new object is front-most; make sure nothing it hides drops below
      // the visibility floor.
      std::vector<long> hidden(kept_boxes.size(), 0);
      for (int px : pixels) {
        const uint32_t old = mask.labels[px];
        if (old != 0) ++hidden[old - 1];
      }
      bool starves = false;
      for (size_t i = 0; i < hidden.size(); ++i)
        if (visible[i] - hidden[i] < min_visible) starves = true;
      if (starves) continue;

      const std::array<int, 3> color = draw_fill_color(rng, config, kept_colors);
      const uint32_t id = static_cast<uint32_t>(kept_boxes.size() + 1);
      for (int px : pixels) {
        const uint32_t old = mask.labels[px];
        if (old != 0) --visible[old - 1];
        mask.labels[px] = id;
        for (int c = 0; c < 3; ++c) {
          const int noise =
              config.object_noise > 0 ? rng_range(rng, -config.object_noise, config.object_noise)
                                      : 0;
          img.data[static_cast<size_t>(px) * 3 + c] =
              static_cast<uint8_t>(clamp_u8(color[c] + noise));
        }
      }
      kept_boxes.push_back(p.box);
      kept_colors.push_back(color);
      visible.push_back(static_cast<long>(pixels.size()));
      break;
    }
    // After kMaxAttempts the object is dropped and the count shrinks.
  }

  GroundTruth gt;
  gt.mask = std::move(mask);
  for (uint32_t id = 1; id <= kept_boxes.size(); ++id) {
    Box tight{config.width, config.height, 0, 0};
    long count = 0;
    for (int y = 0; y < config.height; ++y) {
      for (int x = 0; x < config.width; ++x) {
        if (gt.mask.at(x, y) != id) continue;
        ++count;
        tight.x0 = std::min(tight.x0, x);
        tight.y0 = std::min(tight.y0, y);
        tight.x1 = std::max(tight.x1, x + 1);
        tight.y1 = std::max(tight.y1, y + 1);
      }
    }
    require(count >= min_visible, "generate_scene: instance lost visibility");
    gt.boxes.push_back({id, tight});
  }
  return {std::move(img), std::move(gt)};
}

}  // namespace rgp
