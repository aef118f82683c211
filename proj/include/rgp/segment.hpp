#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rgp/image.hpp"
#include "rgp/parallel.hpp"

namespace rgp {

/// Partition of an image into 4-connected regions with contiguous ids.
struct Segmentation {
  int width = 0;
  int height = 0;
  std::vector<int32_t> region_of;  // row-major region id per pixel
  int region_count = 0;
};

struct RegionNode {
  long pixel_count = 0;
  Box box;                  // tight pixel bound
  std::vector<int> pixels;  // row-major pixel indices
};

/// Region adjacency graph under 4-connectivity. Edges are unordered pairs
/// stored with first < second; `neighbors` mirrors them as sorted lists.
struct RegionGraph {
  std::vector<RegionNode> nodes;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> neighbors;

  int region_count() const { return static_cast<int>(nodes.size()); }
};

// Graph-based segmentation: Gaussian-smooth each channel (skipped for
// sigma <= 0), build the 8-connected pixel graph with Euclidean RGB weights,
// process edges in ascending (weight, pixel a, pixel b) order joining
// components when the weight clears both adaptive thresholds
// internal + k/|C|, then absorb every component smaller than min_size into
// its lowest-weight neighbour. Region ids are assigned in pixel scan order.
Segmentation fh_segment(const Image& image, double k, int min_size, double sigma,
                        Exec exec = Exec::parallel);

RegionGraph build_region_graph(const Segmentation& seg);

// Debug dump: region ids mod 256 as P5. Not a stable interchange format.
LabelMask segmentation_to_mask(const Segmentation& seg);

// Per-channel separable Gaussian blur used by fh_segment; exposed for the
// serial/parallel equivalence tests and the benchmark.
std::vector<std::vector<double>> smooth_channels(const Image& image, double sigma, Exec exec);

}  // namespace rgp
