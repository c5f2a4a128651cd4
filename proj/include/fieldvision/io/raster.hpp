#pragma once

// Dependency-free raster formats: binary PPM/PGM and NumPy .npy.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <string>
#include <vector>

#include "fieldvision/image.hpp"

namespace fieldvision::io {

/// 8-bit grayscale raster, row-major.
struct Gray8 {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

/// 16-bit grayscale raster, row-major.
struct Gray16 {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> pixels;
};

/// Scales [0,1] values by 255 with round-to-nearest.
inline Gray8 to_gray8(const FeatureMap& map) {
  Gray8 g{map.width(), map.height(), std::vector<std::uint8_t>(map.size())};
  const auto v = map.values();
  for (std::size_t i = 0; i < v.size(); ++i)
    g.pixels[i] = static_cast<std::uint8_t>(std::lround(v[i] * 255.0));
  return g;
}

/// Display normalization: divides by the map's maximum first. An all-zero
/// map stays black.
inline Gray8 to_gray8_normalized(const FeatureMap& map) {
  const auto v = map.values();
  const double peak = v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
  Gray8 g{map.width(), map.height(), std::vector<std::uint8_t>(map.size(), 0)};
  if (peak <= 0.0) return g;
  for (std::size_t i = 0; i < v.size(); ++i)
    g.pixels[i] = static_cast<std::uint8_t>(std::lround(std::min(v[i] / peak, 1.0) * 255.0));
  return g;
}

namespace detail {

inline void skip_ws_and_comments(std::istream& in) {
  while (true) {
    const int c = in.peek();
    if (c == '#') {
      std::string discard;
      std::getline(in, discard);
    } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      in.get();
    } else {
      return;
    }
  }
}

inline int read_header_int(std::istream& in) {
  skip_ws_and_comments(in);
  int v = -1;
  if (!(in >> v) || v < 0) throw FormatError("malformed PPM header");
  return v;
}

}  // namespace detail

inline Image read_ppm(std::istream& in) {
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || magic[1] != '6') throw FormatError("not a binary PPM (P6) file");
  const int w = detail::read_header_int(in);
  const int h = detail::read_header_int(in);
  const int maxval = detail::read_header_int(in);
  if (maxval != 255) throw FormatError("only 8-bit PPM (maxval 255) is supported");
  in.get();  // single whitespace before the raster
  std::vector<std::uint8_t> px(3u * static_cast<std::size_t>(w) * h);
  in.read(reinterpret_cast<char*>(px.data()), static_cast<std::streamsize>(px.size()));
  if (!in) throw FormatError("PPM raster is truncated");
  return Image(w, h, std::move(px));
}

inline Image load_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_ppm(in);
}

inline void save_ppm(const std::string& path, const Image& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "P6\n" << img.width() << ' ' << img.height() << "\n255\n";
  const auto px = img.pixels();
  out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
  if (!out) throw IoError("failed writing '" + path + "'");
}

inline void save_pgm(const std::string& path, const Gray8& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "P5\n" << g.width << ' ' << g.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(g.pixels.data()),
            static_cast<std::streamsize>(g.pixels.size()));
  if (!out) throw IoError("failed writing '" + path + "'");
}

/// Writes the raw map as a little-endian float64 .npy array of shape (H, W).
inline void save_npy(const std::string& path, const FeatureMap& map) {
  static_assert(std::endian::native == std::endian::little, "npy writer assumes little-endian");
  std::string header = "{'descr': '<f8', 'fortran_order': False, 'shape': (" +
                       std::to_string(map.height()) + ", " + std::to_string(map.width()) + "), }";
  // magic(6) + version(2) + header_len(2) + header, padded to 64 with '\n'.
  const std::size_t unpadded = 10 + header.size() + 1;
  header.append((64 - unpadded % 64) % 64, ' ');
  header.push_back('\n');

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  const char magic[8] = {'\x93', 'N', 'U', 'M', 'P', 'Y', 1, 0};
  out.write(magic, 8);
  const auto len = static_cast<std::uint16_t>(header.size());
  const char len_bytes[2] = {static_cast<char>(len & 0xff), static_cast<char>(len >> 8)};
  out.write(len_bytes, 2);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  const auto v = map.values();
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace fieldvision::io
