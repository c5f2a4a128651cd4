#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "fieldvision/image.hpp"

namespace fieldvision {

struct HsiMaps {
  FeatureMap hue;
  FeatureMap saturation;
  FeatureMap intensity;
};

struct Hsi {
  double h = 0.0;
  double s = 0.0;
  double i = 0.0;
};

/// HSI of one 8-bit pixel using the arccos hue formulation.
///
/// Hue is normalized by 2*pi into [0,1]. Achromatic pixels (r == g == b)
/// get hue 0. The hue denominator is evaluated on the integer channel
/// differences so that the achromatic test is exact.
inline Hsi pixel_to_hsi(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) noexcept {
  const int r = r8, g = g8, b = b8;
  const int sum = r + g + b;

  Hsi out;
  out.i = sum / (3.0 * 255.0);
  if (sum > 0) out.s = 1.0 - 3.0 * std::min({r, g, b}) / static_cast<double>(sum);

  const long long den_sq =
      static_cast<long long>(r - g) * (r - g) + static_cast<long long>(r - b) * (g - b);
  if (den_sq > 0) {
    const double num = 0.5 * ((r - g) + (r - b));
    const double c = std::clamp(num / std::sqrt(static_cast<double>(den_sq)), -1.0, 1.0);
    const double theta = std::acos(c);
    const double h = b <= g ? theta : 2.0 * std::numbers::pi - theta;
    out.h = std::clamp(h / (2.0 * std::numbers::pi), 0.0, 1.0);
  }
  out.s = std::clamp(out.s, 0.0, 1.0);
  return out;
}

inline HsiMaps rgb_to_hsi(const Image& image) {
  detail::require(image.width() >= Image::kMinSide && image.height() >= Image::kMinSide,
                  "rgb_to_hsi: image must be at least 3x3");
  const std::size_t n = image.pixel_count();
  std::vector<double> h(n), s(n), i(n);
  const auto px = image.pixels();
  for (std::size_t k = 0; k < n; ++k) {
    const Hsi v = pixel_to_hsi(px[3 * k], px[3 * k + 1], px[3 * k + 2]);
    h[k] = v.h;
    s[k] = v.s;
    i[k] = v.i;
  }
  const int w = image.width(), ht = image.height();
  return {FeatureMap(w, ht, FeatureKind::Hue, std::move(h)),
          FeatureMap(w, ht, FeatureKind::Saturation, std::move(s)),
          FeatureMap(w, ht, FeatureKind::Intensity, std::move(i))};
}

}  // namespace fieldvision
