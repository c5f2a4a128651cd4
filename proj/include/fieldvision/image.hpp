#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fieldvision/error.hpp"

namespace fieldvision {

/// 8-bit RGB raster, row-major, interleaved (r,g,b).
class Image {
 public:
  static constexpr int kMinSide = 3;

  Image() = default;

  Image(int width, int height, std::vector<std::uint8_t> pixels)
      : width_(width), height_(height), pixels_(std::move(pixels)) {
    detail::require(width >= kMinSide && height >= kMinSide,
                    "image must be at least 3x3, got " + std::to_string(width) + "x" +
                        std::to_string(height));
    detail::require(pixels_.size() == 3u * static_cast<std::size_t>(width) * height,
                    "pixel buffer length does not match 3*width*height");
  }

  /// Solid-color image.
  static Image filled(int width, int height, std::array<std::uint8_t, 3> rgb) {
    detail::require(width >= kMinSide && height >= kMinSide, "image must be at least 3x3");
    std::vector<std::uint8_t> px(3u * static_cast<std::size_t>(width) * height);
    for (std::size_t i = 0; i < px.size(); i += 3) {
      px[i] = rgb[0];
      px[i + 1] = rgb[1];
      px[i + 2] = rgb[2];
    }
    return Image(width, height, std::move(px));
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept { return static_cast<std::size_t>(width_) * height_; }
  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }

  std::array<std::uint8_t, 3> at(int x, int y) const {
    const std::size_t i = 3u * (static_cast<std::size_t>(y) * width_ + x);
    return {pixels_[i], pixels_[i + 1], pixels_[i + 2]};
  }

  void set(int x, int y, std::array<std::uint8_t, 3> rgb) {
    const std::size_t i = 3u * (static_cast<std::size_t>(y) * width_ + x);
    pixels_[i] = rgb[0];
    pixels_[i + 1] = rgb[1];
    pixels_[i + 2] = rgb[2];
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

enum class FeatureKind {
  Hue,
  Saturation,
  Intensity,
  Edge0,
  Edge45,
  Edge90,
  Edge135,
  UncommonH,
  UncommonS,
  UncommonI,
  Interest,
};

/// Canonical fusion order: H, S, I, four edge directions, three uncommon maps.
inline constexpr std::array<FeatureKind, 10> kCanonicalFeatures = {
    FeatureKind::Hue,       FeatureKind::Saturation, FeatureKind::Intensity,
    FeatureKind::Edge0,     FeatureKind::Edge45,     FeatureKind::Edge90,
    FeatureKind::Edge135,   FeatureKind::UncommonH,  FeatureKind::UncommonS,
    FeatureKind::UncommonI,
};

/// File-stem used when a map is written to disk.
constexpr std::string_view feature_name(FeatureKind kind) noexcept {
  switch (kind) {
    case FeatureKind::Hue: return "hue";
    case FeatureKind::Saturation: return "saturation";
    case FeatureKind::Intensity: return "intensity";
    case FeatureKind::Edge0: return "edge0";
    case FeatureKind::Edge45: return "edge45";
    case FeatureKind::Edge90: return "edge90";
    case FeatureKind::Edge135: return "edge135";
    case FeatureKind::UncommonH: return "uncommon_hue";
    case FeatureKind::UncommonS: return "uncommon_saturation";
    case FeatureKind::UncommonI: return "uncommon_intensity";
    case FeatureKind::Interest: return "interest";
  }
  return "unknown";
}

/// Single-channel map with every value in [0,1], tagged by what it measures.
///
/// Values are stored as doubles so that brute-force oracles in the tests can
/// be compared at 1e-12.
class FeatureMap {
 public:
  FeatureMap() = default;

  FeatureMap(int width, int height, FeatureKind kind, std::vector<double> values)
      : width_(width), height_(height), kind_(kind), values_(std::move(values)) {
    detail::require(width > 0 && height > 0, "feature map dimensions must be positive");
    detail::require(values_.size() == static_cast<std::size_t>(width) * height,
                    "feature map value count does not match width*height");
    for (double v : values_) {
      detail::require(std::isfinite(v) && v >= 0.0 && v <= 1.0,
                      "feature map values must be finite and within [0,1]");
    }
  }

  static FeatureMap zeros(int width, int height, FeatureKind kind) {
    return FeatureMap(width, height, kind,
                      std::vector<double>(static_cast<std::size_t>(width) * height, 0.0));
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return values_.size(); }
  FeatureKind kind() const noexcept { return kind_; }
  std::span<const double> values() const& noexcept { return values_; }
  /// On a temporary, hand the storage over so range-for stays valid.
  std::vector<double> values() && noexcept { return std::move(values_); }

  double at(int x, int y) const { return values_[static_cast<std::size_t>(y) * width_ + x]; }

  /// Same values, different tag.
  FeatureMap retagged(FeatureKind kind) const {
    FeatureMap out = *this;
    out.kind_ = kind;
    return out;
  }

  bool same_shape(const FeatureMap& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const FeatureMap&, const FeatureMap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  FeatureKind kind_ = FeatureKind::Intensity;
  std::vector<double> values_;
};

}  // namespace fieldvision
