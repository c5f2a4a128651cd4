#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "fieldvision/image.hpp"

namespace fieldvision {

enum class EdgeDirection { D0, D45, D90, D135 };

inline constexpr std::array<EdgeDirection, 4> kEdgeDirections = {
    EdgeDirection::D0, EdgeDirection::D45, EdgeDirection::D90, EdgeDirection::D135};

using Kernel3 = std::array<std::array<int, 3>, 3>;

/// Sobel kernel indexed [row][col]. D0 responds to vertical edges.
constexpr Kernel3 sobel_kernel(EdgeDirection d) noexcept {
  switch (d) {
    case EdgeDirection::D0: return {{{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}}};
    case EdgeDirection::D45: return {{{0, 1, 2}, {-1, 0, 1}, {-2, -1, 0}}};
    case EdgeDirection::D90: return {{{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}}};
    case EdgeDirection::D135: return {{{-2, -1, 0}, {-1, 0, 1}, {0, 1, 2}}};
  }
  return {};
}

constexpr FeatureKind edge_kind(EdgeDirection d) noexcept {
  switch (d) {
    case EdgeDirection::D0: return FeatureKind::Edge0;
    case EdgeDirection::D45: return FeatureKind::Edge45;
    case EdgeDirection::D90: return FeatureKind::Edge90;
    case EdgeDirection::D135: return FeatureKind::Edge135;
  }
  return FeatureKind::Edge0;
}

/// |K_d * I| / 4 with replicated borders. Each kernel's positive taps sum
/// to 4, so the result stays in [0,1] for inputs in [0,1].
inline FeatureMap sobel_edges(const FeatureMap& intensity, EdgeDirection direction) {
  detail::require(intensity.kind() == FeatureKind::Intensity,
                  "sobel_edges: input must be an Intensity map");
  const int w = intensity.width(), h = intensity.height();
  detail::require(w >= 3 && h >= 3, "sobel_edges: map must be at least 3x3");

  const Kernel3 k = sobel_kernel(direction);
  const auto src = intensity.values();
  std::vector<double> out(src.size());

  for (int y = 0; y < h; ++y) {
    const int rows[3] = {std::max(y - 1, 0), y, std::min(y + 1, h - 1)};
    for (int x = 0; x < w; ++x) {
      const int cols[3] = {std::max(x - 1, 0), x, std::min(x + 1, w - 1)};
      // Every kernel is point-antisymmetric, k[r][c] == -k[2-r][2-c], so each
      // positive tap is paired with its mirror; flat patches give exactly 0.
      double acc = 0.0;
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
          if (k[r][c] <= 0) continue;
          const double a = src[static_cast<std::size_t>(rows[r]) * w + cols[c]];
          const double b = src[static_cast<std::size_t>(rows[2 - r]) * w + cols[2 - c]];
          acc += k[r][c] * (a - b);
        }
      }
      out[static_cast<std::size_t>(y) * w + x] = std::min(std::abs(acc) / 4.0, 1.0);
    }
  }
  return FeatureMap(w, h, edge_kind(direction), std::move(out));
}

inline std::array<FeatureMap, 4> sobel_edges_all(const FeatureMap& intensity) {
  return {sobel_edges(intensity, EdgeDirection::D0), sobel_edges(intensity, EdgeDirection::D45),
          sobel_edges(intensity, EdgeDirection::D90), sobel_edges(intensity, EdgeDirection::D135)};
}

}  // namespace fieldvision
