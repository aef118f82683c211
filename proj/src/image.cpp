#include "rgp/image.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rgp/errors.hpp"
#include <json.hpp>

namespace rgp {

Box box_union(const Box& a, const Box& b) {
  return {std::min(a.x0, b.x0), std::min(a.y0, b.y0), std::max(a.x1, b.x1),
          std::max(a.y1, b.y1)};
}

namespace {

std::vector<uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  return bytes;
}

[[noreturn]] void decode_fail(const std::filesystem::path& path, const std::string& what,
                              size_t offset) {
  throw IoError(path.string() + ": " + what + " at byte " + std::to_string(offset));
}

// Netpbm header scanner: whitespace-separated tokens, '#' comments run to
// end of line.
struct HeaderScanner {
  const std::vector<uint8_t>& bytes;
  const std::filesystem::path& path;
  size_t pos = 0;

  void skip_space() {
    while (pos < bytes.size()) {
      const uint8_t c = bytes[pos];
      if (c == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        ++pos;
      } else {
        break;
      }
    }
  }

  int next_int(const char* what) {
    skip_space();
    const size_t start = pos;
    long value = 0;
    while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
      value = value * 10 + (bytes[pos] - '0');
      if (value > 1 << 28) decode_fail(path, std::string(what) + " out of range", start);
      ++pos;
    }
    if (pos == start) decode_fail(path, std::string("malformed ") + what, start);
    return static_cast<int>(value);
  }
};

// Shared P5/P6 decode; channels is 1 or 3.
std::vector<uint8_t> read_pnm(const std::filesystem::path& path, char magic, int channels,
                              int* out_w, int* out_h) {
  const std::vector<uint8_t> bytes = slurp(path);
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != magic)
    decode_fail(path, std::string("expected P") + magic + " magic", 0);

  HeaderScanner sc{bytes, path, 2};
  const int w = sc.next_int("width");
  const int h = sc.next_int("height");
  const int maxval = sc.next_int("maxval");
  if (w < 1 || h < 1) decode_fail(path, "non-positive dimensions", 2);
  if (maxval != 255) decode_fail(path, "unsupported max value " + std::to_string(maxval), sc.pos);
  // Exactly one whitespace byte separates the header from the payload.
  if (sc.pos >= bytes.size() || !(bytes[sc.pos] == '\n' || bytes[sc.pos] == ' ' ||
                                  bytes[sc.pos] == '\t' || bytes[sc.pos] == '\r'))
    decode_fail(path, "missing header terminator", sc.pos);
  ++sc.pos;

  const size_t need = static_cast<size_t>(w) * h * channels;
  if (bytes.size() - sc.pos < need)
    decode_fail(path, "truncated pixel data (" + std::to_string(bytes.size() - sc.pos) +
                          " of " + std::to_string(need) + " bytes)",
                bytes.size());
  if (bytes.size() - sc.pos > need)
    decode_fail(path, "trailing bytes after pixel data", sc.pos + need);

  *out_w = w;
  *out_h = h;
  return {bytes.begin() + static_cast<long>(sc.pos), bytes.end()};
}

void write_pnm(const std::filesystem::path& path, char magic, int w, int h,
               const uint8_t* data, size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  char header[64];
  const int n = std::snprintf(header, sizeof(header), "P%c\n%d %d\n255\n", magic, w, h);
  out.write(header, n);
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!out) throw IoError("short write to " + path.string());
}

}  // namespace

Image read_image(const std::filesystem::path& path) {
  Image img;
  img.data = read_pnm(path, '6', 3, &img.width, &img.height);
  return img;
}

void write_image(const Image& image, const std::filesystem::path& path) {
  require(image.width >= 1 && image.height >= 1 &&
              image.data.size() == static_cast<size_t>(image.width) * image.height * 3,
          "write_image: inconsistent Image");
  write_pnm(path, '6', image.width, image.height, image.data.data(), image.data.size());
}

LabelMask read_mask(const std::filesystem::path& path) {
  int w = 0, h = 0;
  const std::vector<uint8_t> raw = read_pnm(path, '5', 1, &w, &h);
  LabelMask mask(w, h);
  std::copy(raw.begin(), raw.end(), mask.labels.begin());
  return mask;
}

void write_mask(const LabelMask& mask, const std::filesystem::path& path) {
  require(mask.width >= 1 && mask.height >= 1 &&
              mask.labels.size() == static_cast<size_t>(mask.width) * mask.height,
          "write_mask: inconsistent LabelMask");
  std::vector<uint8_t> raw(mask.labels.size());
  for (size_t i = 0; i < raw.size(); ++i) raw[i] = static_cast<uint8_t>(mask.labels[i] & 0xff);
  write_pnm(path, '5', mask.width, mask.height, raw.data(), raw.size());
}

void write_ground_truth(const GroundTruth& gt, const std::filesystem::path& json_path,
                        const std::string& mask_filename) {
  write_mask(gt.mask, json_path.parent_path() / mask_filename);
  nlohmann::ordered_json doc;
  doc["boxes"] = nlohmann::ordered_json::array();
  for (const InstanceBox& b : gt.boxes) {
    doc["boxes"].push_back({{"id", b.id},
                            {"x0", b.box.x0},
                            {"y0", b.box.y0},
                            {"x1", b.box.x1},
                            {"y1", b.box.y1}});
  }
  doc["mask"] = mask_filename;
  std::ofstream out(json_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + json_path.string());
  out << doc.dump(2) << "\n";
}

GroundTruth read_ground_truth(const std::filesystem::path& json_path) {
  std::ifstream in(json_path);
  if (!in) throw IoError("cannot open " + json_path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(json_path.string() + ": " + e.what());
  }
  GroundTruth gt;
  for (const auto& b : doc.at("boxes")) {
    InstanceBox ib;
    ib.id = b.at("id").get<uint32_t>();
    ib.box = {b.at("x0").get<int>(), b.at("y0").get<int>(), b.at("x1").get<int>(),
              b.at("y1").get<int>()};
    gt.boxes.push_back(ib);
  }
  gt.mask = read_mask(json_path.parent_path() / doc.at("mask").get<std::string>());
  return gt;
}

}  // namespace rgp
