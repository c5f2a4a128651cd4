#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>

#include "fieldvision/image.hpp"

namespace fixtures {

/// Outdoor-ish test frame: sky gradient over a reddish ground, a few
/// coloured "rocks" and mild sensor noise.
inline fieldvision::Image synthetic_scene(int w, int h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> noise(-6, 6);
  std::uniform_int_distribution<int> px(0, w - 1), py(h / 2, h - 1), pr(4, std::max(5, h / 10));
  std::uniform_int_distribution<int> col(0, 255);

  struct Rock {
    int x, y, r;
    std::array<int, 3> c;
  };
  std::vector<Rock> rocks;
  for (int i = 0; i < 6; ++i) rocks.push_back({px(rng), py(rng), pr(rng), {col(rng), col(rng), col(rng)}});

  std::vector<std::uint8_t> data(3u * static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::array<int, 3> c;
      if (y < h / 3) {
        c = {120 + 60 * y / h, 150 + 60 * y / h, 210};
      } else {
        c = {170, 110, 70};
      }
      for (const Rock& r : rocks) {
        const int dx = x - r.x, dy = y - r.y;
        if (dx * dx + dy * dy <= r.r * r.r) c = r.c;
      }
      const std::size_t i = 3u * (static_cast<std::size_t>(y) * w + x);
      for (int k = 0; k < 3; ++k)
        data[i + k] = static_cast<std::uint8_t>(std::clamp(c[k] + noise(rng), 0, 255));
    }
  }
  return fieldvision::Image(w, h, std::move(data));
}

/// Uniform gray mosaic with one saturated green square of side `side`
/// centred at (cx, cy).
inline fieldvision::Image mosaic_with_patch(int w, int h, int cx, int cy, int side) {
  fieldvision::Image m = fieldvision::Image::filled(w, h, {128, 128, 128});
  for (int y = cy - side / 2; y < cy - side / 2 + side; ++y)
    for (int x = cx - side / 2; x < cx - side / 2 + side; ++x) m.set(x, y, {20, 200, 40});
  return m;
}

}  // namespace fixtures
