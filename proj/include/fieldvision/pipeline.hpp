#pragma once

#include <array>
#include <future>
#include <vector>

#include "fieldvision/colorspace.hpp"
#include "fieldvision/edges.hpp"
#include "fieldvision/saliency.hpp"
#include "fieldvision/segmentation.hpp"

namespace fieldvision {

struct PipelineParams {
  SegmentationParams segmentation;
  ExtractionParams extraction;
  /// Run the independent feature stages on worker threads. Results are
  /// identical either way.
  bool parallel = false;
};

struct PipelineResult {
  /// Ten maps in canonical order (see kCanonicalFeatures).
  std::vector<FeatureMap> features;
  /// Segmentations of H, S and I, in that order.
  std::vector<SegmentationMap> segmentations;
  FeatureMap interest;
  std::vector<InterestPoint> points;
  FusionState state;
};

/// One frame: decompose, fuse with the incoming weights, then adapt.
inline PipelineResult pipeline(const Image& image, const FusionState& state,
                               const PipelineParams& params = {}) {
  detail::require(state.n_features == kCanonicalFeatures.size(),
                  "pipeline: fusion state must track exactly 10 features");

  HsiMaps hsi = rgb_to_hsi(image);
  std::array<FeatureMap, 4> edges;
  std::array<SegmentationMap, 3> segs;
  std::array<FeatureMap, 3> uncommon;
  const std::array<const FeatureMap*, 3> channels = {&hsi.hue, &hsi.saturation, &hsi.intensity};

  auto segment_channel = [&](int c) {
    segs[c] = segment(*channels[c], params.segmentation);
    uncommon[c] = uncommon_map(segs[c]);
  };

  if (params.parallel) {
    std::vector<std::future<void>> jobs;
    jobs.push_back(std::async(std::launch::async, [&] { edges = sobel_edges_all(hsi.intensity); }));
    for (int c = 0; c < 3; ++c)
      jobs.push_back(std::async(std::launch::async, segment_channel, c));
    for (auto& j : jobs) j.get();
  } else {
    edges = sobel_edges_all(hsi.intensity);
    for (int c = 0; c < 3; ++c) segment_channel(c);
  }

  PipelineResult result;
  result.features.reserve(kCanonicalFeatures.size());
  result.features.push_back(std::move(hsi.hue));
  result.features.push_back(std::move(hsi.saturation));
  result.features.push_back(std::move(hsi.intensity));
  for (auto& e : edges) result.features.push_back(std::move(e));
  for (auto& u : uncommon) result.features.push_back(std::move(u));
  result.segmentations.assign(std::make_move_iterator(segs.begin()),
                              std::make_move_iterator(segs.end()));

  result.interest = fuse(result.features, state);
  result.state = adapt_weights(state, result.features);
  result.points = extract_interest_points(result.interest, params.extraction);
  return result;
}

}  // namespace fieldvision
