#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "fieldvision/image.hpp"
#include "fieldvision/segmentation.hpp"

namespace fieldvision {

constexpr FeatureKind uncommon_kind(FeatureKind source) {
  switch (source) {
    case FeatureKind::Hue: return FeatureKind::UncommonH;
    case FeatureKind::Saturation: return FeatureKind::UncommonS;
    case FeatureKind::Intensity: return FeatureKind::UncommonI;
    default: throw InputError("uncommon map source must be Hue, Saturation or Intensity");
  }
}

/// Rarity map: pixels in the smallest region score 1, the largest 0, with
/// log-area interpolation in between. A segmentation whose regions all have
/// the same area yields an all-zero map.
inline FeatureMap uncommon_map(const SegmentationMap& seg) {
  seg.validate();
  const FeatureKind kind = uncommon_kind(seg.source);

  const auto [min_it, max_it] = std::minmax_element(
      seg.regions.begin(), seg.regions.end(),
      [](const Region& a, const Region& b) { return a.area < b.area; });
  const std::size_t a_min = min_it->area, a_max = max_it->area;
  if (a_min == a_max) return FeatureMap::zeros(seg.width, seg.height, kind);

  const double log_max = std::log(static_cast<double>(a_max));
  const double span = log_max - std::log(static_cast<double>(a_min));
  std::vector<double> per_region(seg.regions.size());
  for (std::size_t r = 0; r < seg.regions.size(); ++r) {
    const double v = (log_max - std::log(static_cast<double>(seg.regions[r].area))) / span;
    per_region[r] = std::clamp(v, 0.0, 1.0);
  }
  std::vector<double> out(seg.labels.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = per_region[seg.labels[i]];
  return FeatureMap(seg.width, seg.height, kind, std::move(out));
}

/// Fusion coefficients plus the activation history that drives them.
struct FusionState {
  std::size_t n_features = kCanonicalFeatures.size();
  std::vector<double> weights;
  std::vector<double> mean_activation_ema;
  double eta = 0.1;
  double epsilon = 0.01;
  std::size_t frames_processed = 0;

  /// Uniform weights, zero history.
  static FusionState fresh(std::size_t n = kCanonicalFeatures.size(), double eta = 0.1,
                           double epsilon = 0.01) {
    detail::require(n >= 1, "fusion state needs at least one feature");
    detail::require(eta > 0.0 && eta <= 1.0, "fusion eta must be in (0,1]");
    detail::require(epsilon > 0.0, "fusion epsilon must be positive");
    FusionState s;
    s.n_features = n;
    s.weights.assign(n, 1.0 / static_cast<double>(n));
    s.mean_activation_ema.assign(n, 0.0);
    s.eta = eta;
    s.epsilon = epsilon;
    return s;
  }

  void validate() const {
    detail::require(n_features >= 1 && weights.size() == n_features &&
                        mean_activation_ema.size() == n_features,
                    "fusion state vectors must have n_features entries");
    detail::require(eta > 0.0 && eta <= 1.0, "fusion eta must be in (0,1]");
    detail::require(epsilon > 0.0, "fusion epsilon must be positive");
    double sum = 0.0;
    for (double w : weights) {
      detail::require(std::isfinite(w) && w > 0.0, "fusion weights must be positive");
      sum += w;
    }
    detail::require(std::abs(sum - 1.0) <= 1e-9, "fusion weights must sum to 1");
    for (double m : mean_activation_ema)
      detail::require(m >= 0.0 && m <= 1.0, "fusion activation history must lie in [0,1]");
  }

  friend bool operator==(const FusionState&, const FusionState&) = default;
};

/// Interest = sum_i w_i * F_i. A convex combination of [0,1] maps, so no
/// renormalization is applied; the clamp only absorbs rounding.
inline FeatureMap fuse(std::span<const FeatureMap> maps, const FusionState& state) {
  detail::require(!maps.empty(), "fuse: no maps given");
  detail::require(maps.size() == state.n_features && state.weights.size() == state.n_features,
                  "fuse: map count does not match the fusion state");
  for (const FeatureMap& m : maps)
    detail::require(m.same_shape(maps.front()), "fuse: maps are not co-registered");

  std::vector<double> out(maps.front().size(), 0.0);
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const double w = state.weights[i];
    const auto v = maps[i].values();
    for (std::size_t p = 0; p < out.size(); ++p) out[p] += w * v[p];
  }
  for (double& v : out) v = std::clamp(v, 0.0, 1.0);
  return FeatureMap(maps.front().width(), maps.front().height(), FeatureKind::Interest,
                    std::move(out));
}

/// Habituation: m_i <- (1-eta) m_i + eta mean(F_i), w_i proportional to
/// 1 / (epsilon + m_i). Chronically active maps lose weight.
inline FusionState adapt_weights(const FusionState& state, std::span<const FeatureMap> maps) {
  detail::require(maps.size() == state.n_features && state.weights.size() == state.n_features &&
                      state.mean_activation_ema.size() == state.n_features,
                  "adapt_weights: map count does not match the fusion state");
  FusionState next = state;
  std::vector<double> inv(state.n_features);
  for (std::size_t i = 0; i < state.n_features; ++i) {
    const auto v = maps[i].values();
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    const double m =
        (1.0 - state.eta) * state.mean_activation_ema[i] + state.eta * std::clamp(mean, 0.0, 1.0);
    next.mean_activation_ema[i] = std::clamp(m, 0.0, 1.0);
    inv[i] = 1.0 / (state.epsilon + next.mean_activation_ema[i]);
  }
  const double total = std::accumulate(inv.begin(), inv.end(), 0.0);
  for (std::size_t i = 0; i < state.n_features; ++i) next.weights[i] = inv[i] / total;
  ++next.frames_processed;
  return next;
}

struct InterestPoint {
  int x = 0;
  int y = 0;
  double score = 0.0;
  int rank = 0;
  friend bool operator==(const InterestPoint&, const InterestPoint&) = default;
};

struct ExtractionParams {
  int k = 10;
  int radius = 16;
  double min_score = 0.1;
};

/// Greedy peak picking with disc suppression.
///
/// Equivalent to repeatedly taking the global maximum (ties: smaller y, then
/// smaller x) and suppressing everything within Euclidean distance radius;
/// implemented as one sorted sweep.
inline std::vector<InterestPoint> extract_interest_points(const FeatureMap& interest, int k,
                                                          int radius, double min_score) {
  detail::require(k >= 1, "extract_interest_points: k must be >= 1");
  detail::require(radius >= 0, "extract_interest_points: radius must be >= 0");

  const int w = interest.width(), h = interest.height();
  const auto v = interest.values();
  std::vector<std::size_t> order;
  order.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] >= min_score) order.push_back(i);
  // Raster index order equals (y, x) order, so it serves as the tie-break.
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (v[a] != v[b]) return v[a] > v[b];
    return a < b;
  });

  std::vector<bool> suppressed(v.size(), false);
  std::vector<InterestPoint> points;
  const long long r2 = static_cast<long long>(radius) * radius;
  for (std::size_t idx : order) {
    if (suppressed[idx]) continue;
    const int px = static_cast<int>(idx % w), py = static_cast<int>(idx / w);
    points.push_back({px, py, v[idx], static_cast<int>(points.size())});
    if (static_cast<int>(points.size()) == k) break;
    for (int y = std::max(0, py - radius); y <= std::min(h - 1, py + radius); ++y) {
      const long long dy = y - py;
      for (int x = std::max(0, px - radius); x <= std::min(w - 1, px + radius); ++x) {
        const long long dx = x - px;
        if (dx * dx + dy * dy <= r2) suppressed[static_cast<std::size_t>(y) * w + x] = true;
      }
    }
  }
  return points;
}

inline std::vector<InterestPoint> extract_interest_points(const FeatureMap& interest,
                                                          const ExtractionParams& p) {
  return extract_interest_points(interest, p.k, p.radius, p.min_score);
}

}  // namespace fieldvision
