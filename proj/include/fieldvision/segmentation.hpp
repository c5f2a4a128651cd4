#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <queue>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fieldvision/image.hpp"

namespace fieldvision {

/// Pixel displacement used when pairing pixels for co-occurrence counting.
struct Offset {
  int dx = 0;
  int dy = 0;
  friend bool operator==(const Offset&, const Offset&) = default;
};

/// Half-open interval [lo, hi) of quantization levels assigned to one class.
struct ClassInterval {
  int lo = 0;
  int hi = 0;
  bool contains(int level) const noexcept { return level >= lo && level < hi; }
  friend bool operator==(const ClassInterval&, const ClassInterval&) = default;
};

struct SegmentationParams {
  int q_levels = 64;
  std::vector<Offset> offsets{{1, 0}, {0, 1}};
  double peak_frac = 0.05;
  int min_separation = 4;
  int min_region_area = 16;
};

/// Level of v in [0,1] on a Q-level scale: floor(v*(Q-1) + 0.5).
inline int quantize(double v, int q_levels) noexcept {
  const int q = static_cast<int>(std::floor(v * (q_levels - 1) + 0.5));
  return std::clamp(q, 0, q_levels - 1);
}

/// Symmetric Q x Q pair-count matrix.
class CooccurrenceMatrix {
 public:
  CooccurrenceMatrix(int q_levels, std::vector<std::uint64_t> counts, std::vector<Offset> offsets)
      : q_(q_levels), counts_(std::move(counts)), offsets_(std::move(offsets)) {
    detail::require(q_ >= 2, "co-occurrence matrix needs at least 2 levels");
    detail::require(counts_.size() == static_cast<std::size_t>(q_) * q_,
                    "co-occurrence counts must have Q*Q entries");
    for (int i = 0; i < q_; ++i)
      for (int j = i + 1; j < q_; ++j)
        detail::require(count(i, j) == count(j, i), "co-occurrence counts must be symmetric");
    total_ = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
  }

  int q_levels() const noexcept { return q_; }
  std::uint64_t count(int i, int j) const { return counts_[static_cast<std::size_t>(i) * q_ + j]; }
  std::uint64_t total() const noexcept { return total_; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  const std::vector<Offset>& offsets() const noexcept { return offsets_; }

  friend bool operator==(const CooccurrenceMatrix&, const CooccurrenceMatrix&) = default;

 private:
  int q_;
  std::vector<std::uint64_t> counts_;
  std::vector<Offset> offsets_;
  std::uint64_t total_ = 0;
};

inline CooccurrenceMatrix cooccurrence(const FeatureMap& channel, int q_levels,
                                       const std::vector<Offset>& offsets) {
  detail::require(q_levels >= 2, "cooccurrence: q_levels must be >= 2");
  detail::require(!offsets.empty(), "cooccurrence: offsets must be nonempty");
  for (const Offset& d : offsets)
    detail::require(d.dx != 0 || d.dy != 0, "cooccurrence: offsets must be nonzero");

  const int w = channel.width(), h = channel.height();
  std::vector<int> level(channel.size());
  const auto v = channel.values();
  for (std::size_t i = 0; i < v.size(); ++i) level[i] = quantize(v[i], q_levels);

  const auto q = static_cast<std::size_t>(q_levels);
  std::vector<std::uint64_t> counts(q * q, 0);
  for (const Offset& d : offsets) {
    const int y0 = std::max(0, -d.dy), y1 = std::min(h, h - d.dy);
    const int x0 = std::max(0, -d.dx), x1 = std::min(w, w - d.dx);
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) {
        const auto a = static_cast<std::size_t>(level[static_cast<std::size_t>(y) * w + x]);
        const auto b = static_cast<std::size_t>(
            level[static_cast<std::size_t>(y + d.dy) * w + (x + d.dx)]);
        ++counts[a * q + b];
        ++counts[b * q + a];
      }
    }
  }
  return CooccurrenceMatrix(q_levels, std::move(counts), offsets);
}

/// Splits the level axis into classes from peaks of the co-occurrence
/// diagonal.
///
/// The diagonal is smoothed by a 3-bin moving average (averaging only the
/// bins that exist at the ends). Peaks are plateau-aware local maxima of the
/// smoothed profile that reach peak_frac of its maximum; a flat-topped peak
/// sits at the middle of its plateau. Peaks closer than min_separation are
/// resolved in favour of the larger one, then the smaller index. Each
/// boundary sits at the middle of the first minimal run between two
/// neighbouring peaks and belongs to the upper class.
inline std::vector<ClassInterval> class_boundaries(const CooccurrenceMatrix& matrix,
                                                   double peak_frac, int min_separation) {
  detail::require(peak_frac > 0.0 && peak_frac < 1.0,
                  "class_boundaries: peak_frac must be in (0,1)");
  detail::require(min_separation >= 1, "class_boundaries: min_separation must be >= 1");

  const int q = matrix.q_levels();
  std::vector<double> diag(q);
  for (int k = 0; k < q; ++k) diag[k] = static_cast<double>(matrix.count(k, k));
  if (*std::max_element(diag.begin(), diag.end()) <= 0.0)
    throw DegenerateInputError("class_boundaries: co-occurrence diagonal is all zero");

  std::vector<double> s(q);
  for (int k = 0; k < q; ++k) {
    const int lo = std::max(k - 1, 0), hi = std::min(k + 1, q - 1);
    double acc = 0.0;
    for (int j = lo; j <= hi; ++j) acc += diag[j];
    s[k] = acc / (hi - lo + 1);
  }
  const double threshold = peak_frac * *std::max_element(s.begin(), s.end());

  std::vector<int> candidates;
  for (int k = 0; k < q;) {
    int end = k;
    while (end + 1 < q && s[end + 1] == s[k]) ++end;
    const bool left_ok = k == 0 || s[k - 1] < s[k];
    const bool right_ok = end == q - 1 || s[end + 1] < s[k];
    if (left_ok && right_ok && s[k] > 0.0 && s[k] >= threshold) candidates.push_back((k + end) / 2);
    k = end + 1;
  }

  std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
    if (s[a] != s[b]) return s[a] > s[b];
    return a < b;
  });
  std::vector<int> peaks;
  for (int c : candidates) {
    const bool far = std::all_of(peaks.begin(), peaks.end(),
                                 [&](int p) { return std::abs(p - c) >= min_separation; });
    if (far) peaks.push_back(c);
  }
  std::sort(peaks.begin(), peaks.end());

  std::vector<ClassInterval> bounds;
  int start = 0;
  for (std::size_t i = 0; i + 1 < peaks.size(); ++i) {
    const int p = peaks[i], r = peaks[i + 1];
    int boundary = r;
    if (r - p > 1) {
      const double lowest = *std::min_element(s.begin() + p + 1, s.begin() + r);
      int run_lo = p + 1;
      while (s[run_lo] != lowest) ++run_lo;
      int run_hi = run_lo;
      while (run_hi + 1 < r && s[run_hi + 1] == lowest) ++run_hi;
      boundary = (run_lo + run_hi + 1) / 2;
    }
    bounds.push_back({start, boundary});
    start = boundary;
  }
  bounds.push_back({start, q});
  return bounds;
}

struct Region {
  int class_id = 0;
  std::size_t area = 0;
  friend bool operator==(const Region&, const Region&) = default;
};

/// Dense region labelling of one channel plus the class table it came from.
struct SegmentationMap {
  int width = 0;
  int height = 0;
  FeatureKind source = FeatureKind::Intensity;
  int q_levels = 64;
  std::vector<std::uint32_t> labels;
  std::vector<Region> regions;
  std::vector<ClassInterval> class_bounds;

  std::size_t region_count() const noexcept { return regions.size(); }
  std::uint32_t label_at(int x, int y) const {
    return labels[static_cast<std::size_t>(y) * width + x];
  }

  /// Checks the structural invariants: label range, area bookkeeping and
  /// a disjoint cover of [0, q_levels) by the class intervals.
  void validate() const {
    detail::require(width > 0 && height > 0, "segmentation: dimensions must be positive");
    detail::require(labels.size() == static_cast<std::size_t>(width) * height,
                    "segmentation: label count does not match width*height");
    detail::require(!regions.empty(), "segmentation: region table is empty");
    detail::require(!class_bounds.empty() && class_bounds.front().lo == 0 &&
                        class_bounds.back().hi == q_levels,
                    "segmentation: class bounds must cover [0,Q)");
    for (std::size_t i = 0; i < class_bounds.size(); ++i) {
      detail::require(class_bounds[i].lo < class_bounds[i].hi,
                      "segmentation: empty class interval");
      if (i > 0)
        detail::require(class_bounds[i].lo == class_bounds[i - 1].hi,
                        "segmentation: class intervals must be contiguous and disjoint");
    }
    std::vector<std::size_t> area(regions.size(), 0);
    for (std::uint32_t l : labels) {
      detail::require(l < regions.size(), "segmentation: label missing from region table");
      ++area[l];
    }
    for (std::size_t r = 0; r < regions.size(); ++r) {
      detail::require(area[r] == regions[r].area, "segmentation: region area mismatch");
      detail::require(regions[r].class_id >= 0 &&
                          static_cast<std::size_t>(regions[r].class_id) < class_bounds.size(),
                      "segmentation: region class out of range");
    }
  }

  friend bool operator==(const SegmentationMap&, const SegmentationMap&) = default;
};

namespace detail {

// 4-connected components of equal class, ids in raster order of first pixel.
inline std::vector<std::uint32_t> label_components(const std::vector<int>& cls, int w, int h,
                                                   std::uint32_t& count) {
  constexpr auto kUnset = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> label(cls.size(), kUnset);
  std::vector<std::size_t> stack;
  count = 0;
  for (std::size_t seed = 0; seed < cls.size(); ++seed) {
    if (label[seed] != kUnset) continue;
    const std::uint32_t id = count++;
    label[seed] = id;
    stack.push_back(seed);
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      const int x = static_cast<int>(p % w), y = static_cast<int>(p / w);
      auto visit = [&](std::size_t n) {
        if (label[n] == kUnset && cls[n] == cls[p]) {
          label[n] = id;
          stack.push_back(n);
        }
      };
      if (x > 0) visit(p - 1);
      if (x + 1 < w) visit(p + 1);
      if (y > 0) visit(p - w);
      if (y + 1 < h) visit(p + w);
    }
  }
  return label;
}

}  // namespace detail

/// Co-occurrence segmentation of a Hue, Saturation or Intensity map.
///
/// Components smaller than min_region_area are absorbed, smallest first
/// (ties: smaller id), into the neighbour sharing the longest boundary
/// (ties: smaller id). The absorbed pixels take the neighbour's class.
inline SegmentationMap segment(const FeatureMap& channel, const SegmentationParams& params = {}) {
  detail::require(channel.kind() == FeatureKind::Hue || channel.kind() == FeatureKind::Saturation ||
                      channel.kind() == FeatureKind::Intensity,
                  "segment: channel must be Hue, Saturation or Intensity");
  detail::require(params.min_region_area >= 1, "segment: min_region_area must be >= 1");

  const CooccurrenceMatrix matrix = cooccurrence(channel, params.q_levels, params.offsets);
  std::vector<ClassInterval> bounds =
      class_boundaries(matrix, params.peak_frac, params.min_separation);

  std::vector<int> class_of_level(params.q_levels);
  for (std::size_t c = 0; c < bounds.size(); ++c)
    for (int l = bounds[c].lo; l < bounds[c].hi; ++l) class_of_level[l] = static_cast<int>(c);

  const int w = channel.width(), h = channel.height();
  const auto values = channel.values();
  std::vector<int> cls(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    cls[i] = class_of_level[quantize(values[i], params.q_levels)];

  std::uint32_t n_comp = 0;
  std::vector<std::uint32_t> comp = detail::label_components(cls, w, h, n_comp);

  std::vector<std::size_t> area(n_comp, 0);
  std::vector<int> comp_class(n_comp, 0);
  for (std::size_t i = 0; i < comp.size(); ++i) {
    ++area[comp[i]];
    comp_class[comp[i]] = cls[i];
  }

  std::vector<std::uint32_t> parent(n_comp);
  std::iota(parent.begin(), parent.end(), 0u);
  const auto min_area = static_cast<std::size_t>(params.min_region_area);

  bool any_small = std::any_of(area.begin(), area.end(), [&](std::size_t a) { return a < min_area; });
  if (any_small && n_comp > 1) {
    std::vector<std::unordered_map<std::uint32_t, std::size_t>> adj(n_comp);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t p = static_cast<std::size_t>(y) * w + x;
        const std::uint32_t a = comp[p];
        if (x + 1 < w && comp[p + 1] != a) {
          ++adj[a][comp[p + 1]];
          ++adj[comp[p + 1]][a];
        }
        if (y + 1 < h && comp[p + w] != a) {
          ++adj[a][comp[p + w]];
          ++adj[comp[p + w]][a];
        }
      }
    }

    using Entry = std::pair<std::size_t, std::uint32_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    for (std::uint32_t c = 0; c < n_comp; ++c)
      if (area[c] < min_area) queue.push({area[c], c});

    std::vector<bool> alive(n_comp, true);
    std::uint32_t n_alive = n_comp;
    while (!queue.empty() && n_alive > 1) {
      const auto [a_area, a] = queue.top();
      queue.pop();
      if (!alive[a] || a_area != area[a]) continue;

      std::uint32_t target = 0;
      std::size_t best = 0;
      for (const auto& [n, shared] : adj[a]) {
        if (shared > best || (shared == best && n < target)) {
          best = shared;
          target = n;
        }
      }

      for (const auto& [n, shared] : adj[a]) {
        adj[n].erase(a);
        if (n == target) continue;
        adj[target][n] += shared;
        adj[n][target] += shared;
      }
      adj[a].clear();
      alive[a] = false;
      parent[a] = target;
      area[target] += area[a];
      --n_alive;
      if (area[target] < min_area) queue.push({area[target], target});
    }
  }

  auto root = [&](std::uint32_t c) {
    while (parent[c] != c) c = parent[c];
    return c;
  };

  SegmentationMap seg;
  seg.width = w;
  seg.height = h;
  seg.source = channel.kind();
  seg.q_levels = params.q_levels;
  seg.class_bounds = std::move(bounds);
  seg.labels.resize(comp.size());

  constexpr auto kUnset = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> dense(n_comp, kUnset);
  for (std::size_t i = 0; i < comp.size(); ++i) {
    const std::uint32_t r = root(comp[i]);
    if (dense[r] == kUnset) {
      dense[r] = static_cast<std::uint32_t>(seg.regions.size());
      seg.regions.push_back({comp_class[r], 0});
    }
    seg.labels[i] = dense[r];
    ++seg.regions[dense[r]].area;
  }
  return seg;
}

}  // namespace fieldvision
