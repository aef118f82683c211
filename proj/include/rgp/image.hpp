#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace rgp {

/// 8-bit RGB raster, interleaved samples in row-major order.
/// data[(y * width + x) * 3 + c] is channel c of pixel (x, y).
struct Image {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> data;

  Image() = default;
  Image(int w, int h) : width(w), height(h), data(static_cast<size_t>(w) * h * 3, 0) {}

  int pixel_count() const { return width * height; }
  uint8_t* pixel(int x, int y) { return &data[(static_cast<size_t>(y) * width + x) * 3]; }
  const uint8_t* pixel(int x, int y) const {
    return &data[(static_cast<size_t>(y) * width + x) * 3];
  }
};

/// Per-pixel instance ids, 0 = background. Row-major, same extent as the
/// paired Image.
struct LabelMask {
  int width = 0;
  int height = 0;
  std::vector<uint32_t> labels;

  LabelMask() = default;
  LabelMask(int w, int h) : width(w), height(h), labels(static_cast<size_t>(w) * h, 0) {}

  uint32_t at(int x, int y) const { return labels[static_cast<size_t>(y) * width + x]; }
  void set(int x, int y, uint32_t v) { labels[static_cast<size_t>(y) * width + x] = v; }
};

/// Axis-aligned pixel box, inclusive-exclusive: covers x in [x0, x1),
/// y in [y0, y1).
struct Box {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  long long area() const {
    return static_cast<long long>(x1 - x0) * static_cast<long long>(y1 - y0);
  }
  bool operator==(const Box&) const = default;
};

Box box_union(const Box& a, const Box& b);

struct InstanceBox {
  uint32_t id = 0;  // instance id, matches mask labels
  Box box;          // tight bound of the instance's mask pixels
};

struct GroundTruth {
  std::vector<InstanceBox> boxes;
  LabelMask mask;
};

// ---------------------------------------------------------------------------
// PPM (P6) / PGM (P5) codec. Binary variants only, max sample value 255,
// canonical header "P6\n<w> <h>\n255\n". Decode errors report the byte
// offset of the offending input.

Image read_image(const std::filesystem::path& path);
void write_image(const Image& image, const std::filesystem::path& path);

LabelMask read_mask(const std::filesystem::path& path);
// Labels are written mod 256; intended for masks with < 256 instances and
// for visual debugging dumps.
void write_mask(const LabelMask& mask, const std::filesystem::path& path);

// GroundTruth persists as a JSON index ({"boxes":[...],"mask":"..."}) plus a
// P5 mask file referenced relative to the JSON's directory.
void write_ground_truth(const GroundTruth& gt, const std::filesystem::path& json_path,
                        const std::string& mask_filename);
GroundTruth read_ground_truth(const std::filesystem::path& json_path);

}  // namespace rgp
