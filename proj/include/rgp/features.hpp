#pragma once

#include <span>
#include <vector>

#include "rgp/image.hpp"
#include "rgp/parallel.hpp"
#include "rgp/segment.hpp"

namespace rgp {

/// Fixed-length per-region descriptor. Layout (default F = 64):
///   [0,24)   RGB colour histogram, 8 bins per channel, each channel L1-normalised
///   [24,27)  mean RGB scaled to [0,1]
///   [27,35)  gradient-orientation histogram, 8 bins over the Sobel angle of the
///            grayscale image, magnitude-weighted, L1-normalised (uniform when
///            the region has zero gradient energy)
///   [35,42)  geometry: log1p(area)/log1p(canvas), area/canvas, box w/W, box h/H,
///            aspect clamped to [0.1,10]/10, centre x/W, centre y/H
///   [42,45)  boundary contrast: mean |RGB| step across the region border, /255
///   [45,F)   zero padding
/// Every entry lies in [0,1].
using FeatureVector = std::vector<double>;

inline constexpr int kBaseFeatureCount = 45;
inline constexpr int kDefaultFeatureDim = 64;

FeatureVector extract_features(const Image& image, std::span<const int> region_pixels,
                               const Box& region_box, int feature_dim = kDefaultFeatureDim);

// Same arithmetic as extract_features for every region of a segmentation,
// sharing the grayscale plane and using region ids for membership tests.
std::vector<FeatureVector> extract_all_features(const Image& image, const Segmentation& seg,
                                                const RegionGraph& graph,
                                                int feature_dim = kDefaultFeatureDim,
                                                Exec exec = Exec::parallel);

}  // namespace rgp
