#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "rgp/image.hpp"

namespace rgp {

enum class Shape { rectangle, ellipse, l_shape };

struct BackgroundConfig {
  bool checker = true;  // false: flat color_a + noise
  std::array<int, 3> color_a{62, 88, 118};
  std::array<int, 3> color_b{96, 126, 150};
  int cell = 12;  // checker cell edge in pixels
  int noise = 6;  // additive amplitude per channel
};

/// Knobs of the synthetic scene generator. The seed drives all randomness;
/// two calls with equal configs produce bit-identical scenes.
struct SceneConfig {
  int width = 96;
  int height = 96;
  int min_objects = 2;
  int max_objects = 4;
  std::vector<Shape> shapes{Shape::rectangle, Shape::ellipse, Shape::l_shape};
  int object_noise = 8;  // additive fill noise amplitude
  BackgroundConfig background;
  double occlusion_prob = 0.25;
  uint64_t seed = 0;
};

// Draws objects back-to-front; occluded pixels carry the front instance's id.
// Every kept instance stays visible on >= 0.5% of the canvas; placement is
// retried up to 100 times, after which the object is dropped. Instance ids in
// the mask are contiguous 1..L, background is 0, and every box is the tight
// bound of its instance's visible pixels.
std::pair<Image, GroundTruth> generate_scene(const SceneConfig& config);

}  // namespace rgp
