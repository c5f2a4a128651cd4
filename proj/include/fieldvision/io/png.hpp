#pragma once

// PNG reading and writing on top of libpng. Consumers must link PNG::PNG.

#include <png.h>

#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "fieldvision/io/raster.hpp"
#include "fieldvision/segmentation.hpp"

namespace fieldvision::io {

namespace detail {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

inline FilePtr open_file(const std::string& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw IoError("cannot open '" + path + "'");
  return f;
}

// color_type: PNG_COLOR_TYPE_GRAY or PNG_COLOR_TYPE_RGB. Rows are packed
// samples of bit_depth bits in host order; 16-bit samples are swapped to
// network order here.
inline void write_png_rows(const std::string& path, int width, int height, int color_type,
                           int bit_depth, const std::uint8_t* data, std::size_t row_bytes) {
  FilePtr f = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng: cannot create write struct");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng: cannot create info struct");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng: failed writing '" + path + "'");
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
               bit_depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (bit_depth == 16) png_set_swap(png);
  for (int y = 0; y < height; ++y)
    png_write_row(png, const_cast<png_bytep>(data + row_bytes * static_cast<std::size_t>(y)));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

struct DecodedPng {
  int width = 0;
  int height = 0;
  int channels = 0;  // 1 or 3
  int bit_depth = 0;  // 8 or 16
  std::vector<std::uint8_t> data;
};

// Strips alpha, expands palettes and low bit depths. Keeps 16-bit samples
// (host order) only when keep16 is set; otherwise reduces to 8 bits.
inline DecodedPng read_png_raw(const std::string& path, bool keep16) {
  FilePtr f = open_file(path, "rb");
  png_byte sig[8];
  if (std::fread(sig, 1, 8, f.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
    throw FormatError("'" + path + "' is not a PNG file");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng: cannot create read struct");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("libpng: cannot create info struct");
  }
  DecodedPng out;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("libpng: corrupt PNG '" + path + "'");
  }
  png_init_io(png, f.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const int color = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color & PNG_COLOR_MASK_ALPHA || png_get_valid(png, info, PNG_INFO_tRNS))
    png_set_strip_alpha(png);
  if (depth == 16) {
    if (keep16)
      png_set_swap(png);
    else
      png_set_strip_16(png);
  }
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.channels = png_get_channels(png, info);
  out.bit_depth = png_get_bit_depth(png, info);
  const std::size_t row_bytes = png_get_rowbytes(png, info);
  out.data.resize(row_bytes * static_cast<std::size_t>(out.height));
  std::vector<png_bytep> rows(static_cast<std::size_t>(out.height));
  for (int y = 0; y < out.height; ++y) rows[y] = out.data.data() + row_bytes * y;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

}  // namespace detail

/// Decodes any 8/16-bit gray or color PNG into an 8-bit RGB image.
inline Image load_png(const std::string& path) {
  detail::DecodedPng d = detail::read_png_raw(path, false);
  const std::size_t n = static_cast<std::size_t>(d.width) * d.height;
  if (d.channels == 3) return Image(d.width, d.height, std::move(d.data));
  if (d.channels != 1) throw FormatError("unsupported PNG channel layout in '" + path + "'");
  std::vector<std::uint8_t> rgb(3 * n);
  for (std::size_t i = 0; i < n; ++i) rgb[3 * i] = rgb[3 * i + 1] = rgb[3 * i + 2] = d.data[i];
  return Image(d.width, d.height, std::move(rgb));
}

inline void save_png(const std::string& path, const Image& img) {
  const auto px = img.pixels();
  detail::write_png_rows(path, img.width(), img.height(), PNG_COLOR_TYPE_RGB, 8, px.data(),
                         3u * static_cast<std::size_t>(img.width()));
}

inline void save_png(const std::string& path, const Gray8& g) {
  detail::write_png_rows(path, g.width, g.height, PNG_COLOR_TYPE_GRAY, 8, g.pixels.data(),
                         static_cast<std::size_t>(g.width));
}

inline void save_png(const std::string& path, const Gray16& g) {
  detail::write_png_rows(path, g.width, g.height, PNG_COLOR_TYPE_GRAY, 16,
                         reinterpret_cast<const std::uint8_t*>(g.pixels.data()),
                         2u * static_cast<std::size_t>(g.width));
}

inline Gray8 load_png_gray8(const std::string& path) {
  detail::DecodedPng d = detail::read_png_raw(path, false);
  if (d.channels != 1) throw FormatError("'" + path + "' is not a grayscale PNG");
  return {d.width, d.height, std::move(d.data)};
}

inline Gray16 load_png_gray16(const std::string& path) {
  detail::DecodedPng d = detail::read_png_raw(path, true);
  if (d.channels != 1 || d.bit_depth != 16)
    throw FormatError("'" + path + "' is not a 16-bit grayscale PNG");
  Gray16 g{d.width, d.height, std::vector<std::uint16_t>(d.data.size() / 2)};
  std::memcpy(g.pixels.data(), d.data.data(), d.data.size());
  return g;
}

/// Region labels as a 16-bit raster; fails when there are more than 65536
/// regions.
inline Gray16 labels_to_gray16(const SegmentationMap& seg) {
  if (seg.regions.size() > 65536)
    throw InputError("segmentation has too many regions for a 16-bit label raster");
  Gray16 g{seg.width, seg.height, std::vector<std::uint16_t>(seg.labels.size())};
  for (std::size_t i = 0; i < seg.labels.size(); ++i)
    g.pixels[i] = static_cast<std::uint16_t>(seg.labels[i]);
  return g;
}

/// PNG or binary PPM, chosen by file signature.
inline Image load_image(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw IoError("cannot open '" + path + "'");
  char head[2] = {0, 0};
  probe.read(head, 2);
  if (head[0] == 'P' && head[1] == '6') {
    probe.seekg(0);
    return read_ppm(probe);
  }
  if (static_cast<unsigned char>(head[0]) == 0x89 && head[1] == 'P') return load_png(path);
  throw FormatError("'" + path + "' is neither PNG nor binary PPM");
}

}  // namespace fieldvision::io
