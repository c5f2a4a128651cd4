#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "fieldvision/pipeline.hpp"

namespace fieldvision {

struct StageTiming {
  std::string name;
  double median_seconds = 0.0;
};

struct BenchReport {
  int width = 0;
  int height = 0;
  int repetitions = 0;
  std::vector<StageTiming> stages;
  double total_median_seconds = 0.0;
  double frames_per_second = 0.0;
};

/// Historical throughput of the original wearable system, for the footer.
inline constexpr double kHistoricalSecondsPerFrame = 8.0;

namespace detail {

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

/// Times the single-threaded pipeline stage by stage. Each repetition's
/// total spans all six stages, so the median total is never below a stage
/// median.
inline BenchReport run_bench(const Image& image, int repetitions,
                             const PipelineParams& params = {}) {
  detail::require(repetitions >= 1, "bench: repetitions must be >= 1");
  using Clock = std::chrono::steady_clock;
  auto secs = [](Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
  };

  static constexpr std::array<const char*, 6> kStages = {"hsi",     "edges",  "segmentation",
                                                         "uncommon", "fusion", "extraction"};
  std::array<std::vector<double>, 6> samples;
  std::vector<double> totals;
  FusionState state = FusionState::fresh();
  std::size_t sink = 0;

  for (int rep = 0; rep < repetitions; ++rep) {
    const auto t0 = Clock::now();
    HsiMaps hsi = rgb_to_hsi(image);
    const auto t1 = Clock::now();
    std::array<FeatureMap, 4> edges = sobel_edges_all(hsi.intensity);
    const auto t2 = Clock::now();
    std::array<SegmentationMap, 3> segs = {segment(hsi.hue, params.segmentation),
                                           segment(hsi.saturation, params.segmentation),
                                           segment(hsi.intensity, params.segmentation)};
    const auto t3 = Clock::now();
    std::vector<FeatureMap> maps = {hsi.hue, hsi.saturation, hsi.intensity};
    for (auto& e : edges) maps.push_back(std::move(e));
    for (const auto& s : segs) maps.push_back(uncommon_map(s));
    const auto t4 = Clock::now();
    FeatureMap interest = fuse(maps, state);
    state = adapt_weights(state, maps);
    const auto t5 = Clock::now();
    sink += extract_interest_points(interest, params.extraction).size();
    const auto t6 = Clock::now();

    const std::array<double, 6> d = {secs(t0, t1), secs(t1, t2), secs(t2, t3),
                                     secs(t3, t4), secs(t4, t5), secs(t5, t6)};
    for (std::size_t i = 0; i < d.size(); ++i) samples[i].push_back(d[i]);
    totals.push_back(secs(t0, t6));
  }
  (void)sink;

  BenchReport r;
  r.width = image.width();
  r.height = image.height();
  r.repetitions = repetitions;
  for (std::size_t i = 0; i < kStages.size(); ++i)
    r.stages.push_back({kStages[i], detail::median(samples[i])});
  r.total_median_seconds = detail::median(totals);
  r.frames_per_second = r.total_median_seconds > 0.0 ? 1.0 / r.total_median_seconds : 0.0;
  return r;
}

inline std::string format_report(const BenchReport& r) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "bench %dx%d, %d repetition(s), median wall time\n", r.width,
                r.height, r.repetitions);
  out += line;
  for (const StageTiming& s : r.stages) {
    std::snprintf(line, sizeof line, "stage %-13s %10.3f ms\n", s.name.c_str(),
                  s.median_seconds * 1e3);
    out += line;
  }
  std::snprintf(line, sizeof line, "total %-13s %10.3f ms\n", "", r.total_median_seconds * 1e3);
  out += line;
  std::snprintf(line, sizeof line, "throughput %.2f frames/s\n", r.frames_per_second);
  out += line;
  std::snprintf(line, sizeof line,
                "reference: historical figure of about %.0f s per frame on a 667 MHz CPU\n",
                kHistoricalSecondsPerFrame);
  out += line;
  return out;
}

}  // namespace fieldvision
