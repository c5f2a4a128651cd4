#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "fieldvision/pipeline.hpp"

namespace fieldvision {

struct PanTiltLimits {
  double pan_min = 0.0;
  double pan_max = 0.0;
  double tilt_min = 0.0;
  double tilt_max = 0.0;
};

struct PanTiltPose {
  double pan = 0.0;
  double tilt = 0.0;

  PanTiltPose clamped(const PanTiltLimits& l) const {
    return {std::clamp(pan, l.pan_min, l.pan_max), std::clamp(tilt, l.tilt_min, l.tilt_max)};
  }
  friend bool operator==(const PanTiltPose&, const PanTiltPose&) = default;
};

struct Fixation {
  int x = 0;  // mosaic coordinates
  int y = 0;
  int step = 0;
  double score = 0.0;
  friend bool operator==(const Fixation&, const Fixation&) = default;
};

struct SessionConfig {
  int window_width = 640;
  int window_height = 480;
  double px_per_degree = 10.0;
  double inhibition_radius = 50.0;
  int max_steps = 20;
  PipelineParams pipeline;
};

/// A virtual pan-tilt camera looking at a large mosaic. Pan moves the aim
/// point right, tilt moves it down, both at px_per_degree pixels/degree
/// around the mosaic center.
struct SessionState {
  Image mosaic;
  int window_width = 640;
  int window_height = 480;
  double px_per_degree = 10.0;
  PanTiltPose pose;
  PanTiltLimits limits;
  std::vector<Fixation> fixations;
  double inhibition_radius = 50.0;
  FusionState fusion;
  int max_steps = 20;
  int steps_taken = 0;
  PipelineParams pipeline;
};

/// Limits that keep the capture window fully inside the mosaic.
inline PanTiltLimits limits_for(int mosaic_w, int mosaic_h, int window_w, int window_h,
                                double px_per_degree) {
  const double pan = (mosaic_w - window_w) / (2.0 * px_per_degree);
  const double tilt = (mosaic_h - window_h) / (2.0 * px_per_degree);
  return {-pan, pan, -tilt, tilt};
}

inline SessionState make_session(Image mosaic, const SessionConfig& config,
                                 FusionState fusion = FusionState::fresh()) {
  if (config.window_width < Image::kMinSide || config.window_height < Image::kMinSide)
    throw ConfigError("session window must be at least 3x3");
  if (mosaic.width() < config.window_width || mosaic.height() < config.window_height)
    throw ConfigError("mosaic is smaller than the capture window");
  if (!(config.px_per_degree > 0.0)) throw ConfigError("px_per_degree must be positive");
  if (config.inhibition_radius < 0.0) throw ConfigError("inhibition_radius must be >= 0");
  if (config.max_steps < 0) throw ConfigError("max_steps must be >= 0");

  SessionState s;
  s.limits = limits_for(mosaic.width(), mosaic.height(), config.window_width,
                        config.window_height, config.px_per_degree);
  s.mosaic = std::move(mosaic);
  s.window_width = config.window_width;
  s.window_height = config.window_height;
  s.px_per_degree = config.px_per_degree;
  s.inhibition_radius = config.inhibition_radius;
  s.max_steps = config.max_steps;
  s.pipeline = config.pipeline;
  s.fusion = std::move(fusion);
  return s;
}

struct CropOrigin {
  int x = 0;
  int y = 0;
  friend bool operator==(const CropOrigin&, const CropOrigin&) = default;
};

inline CropOrigin crop_origin(const SessionState& s) {
  if (s.mosaic.width() < s.window_width || s.mosaic.height() < s.window_height)
    throw ConfigError("mosaic is smaller than the capture window");
  const double ax = s.mosaic.width() / 2.0 + s.pose.pan * s.px_per_degree;
  const double ay = s.mosaic.height() / 2.0 + s.pose.tilt * s.px_per_degree;
  const int x0 = static_cast<int>(std::lround(ax - s.window_width / 2.0));
  const int y0 = static_cast<int>(std::lround(ay - s.window_height / 2.0));
  return {std::clamp(x0, 0, s.mosaic.width() - s.window_width),
          std::clamp(y0, 0, s.mosaic.height() - s.window_height)};
}

/// The window the camera currently sees.
inline Image capture(const SessionState& s) {
  const CropOrigin o = crop_origin(s);
  const auto src = s.mosaic.pixels();
  const auto row_bytes = 3u * static_cast<std::size_t>(s.window_width);
  std::vector<std::uint8_t> px(row_bytes * s.window_height);
  for (int y = 0; y < s.window_height; ++y) {
    const std::size_t from = 3u * (static_cast<std::size_t>(o.y + y) * s.mosaic.width() + o.x);
    std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(from), row_bytes,
                px.begin() + static_cast<std::ptrdiff_t>(row_bytes * y));
  }
  return Image(s.window_width, s.window_height, std::move(px));
}

struct StepRecord {
  int step = 0;
  PanTiltPose pose;  // aim at capture time
  CropOrigin origin;
  std::optional<Fixation> fixation;
  std::vector<InterestPoint> points;
  FeatureMap interest;
  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

namespace detail {

inline PanTiltPose raster_advance(const PanTiltPose& p, const SessionState& s) {
  const double pan_step = s.window_width / s.px_per_degree;
  const double tilt_step = s.window_height / s.px_per_degree;
  PanTiltPose next = p;
  if (p.pan >= s.limits.pan_max) {
    next.pan = s.limits.pan_min;
    next.tilt = p.tilt >= s.limits.tilt_max ? s.limits.tilt_min
                                            : std::min(p.tilt + tilt_step, s.limits.tilt_max);
  } else {
    next.pan = std::min(p.pan + pan_step, s.limits.pan_max);
  }
  return next.clamped(s.limits);
}

}  // namespace detail

/// Pose that centres window pixel (wx, wy) of the current view, clamped to
/// the limits.
inline PanTiltPose slew_toward(const SessionState& s, int wx, int wy) {
  const double dpan = (wx - s.window_width / 2.0) / s.px_per_degree;
  const double dtilt = (wy - s.window_height / 2.0) / s.px_per_degree;
  return PanTiltPose{s.pose.pan + dpan, s.pose.tilt + dtilt}.clamped(s.limits);
}

/// Capture, run the pipeline, and slew toward the best point not yet
/// inhibited by an earlier fixation. Falls back to a raster scan step when
/// every candidate is inhibited.
inline StepRecord session_step(SessionState& s) {
  if (s.steps_taken >= s.max_steps) throw InputError("session_step: max_steps already reached");

  StepRecord rec;
  rec.step = s.steps_taken;
  rec.pose = s.pose;
  rec.origin = crop_origin(s);

  PipelineResult r = pipeline(capture(s), s.fusion, s.pipeline);
  s.fusion = std::move(r.state);

  const double r2 = s.inhibition_radius * s.inhibition_radius;
  for (const InterestPoint& p : r.points) {
    const int mx = rec.origin.x + p.x, my = rec.origin.y + p.y;
    const bool free = std::all_of(s.fixations.begin(), s.fixations.end(), [&](const Fixation& f) {
      const double dx = mx - f.x, dy = my - f.y;
      return dx * dx + dy * dy > r2;
    });
    if (free) {
      rec.fixation = Fixation{mx, my, rec.step, p.score};
      s.pose = slew_toward(s, p.x, p.y);
      s.fixations.push_back(*rec.fixation);
      break;
    }
  }
  if (!rec.fixation) s.pose = detail::raster_advance(s.pose, s);

  rec.points = std::move(r.points);
  rec.interest = std::move(r.interest);
  ++s.steps_taken;
  return rec;
}

struct Trajectory {
  std::vector<StepRecord> steps;
  PanTiltPose final_pose;
  std::vector<Fixation> fixations;
  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Steps until max_steps. Drop the per-step maps with keep_maps=false to
/// save memory on long runs.
inline Trajectory run_session(SessionState s, bool keep_maps = true) {
  Trajectory t;
  while (s.steps_taken < s.max_steps) {
    StepRecord rec = session_step(s);
    if (!keep_maps) rec.interest = FeatureMap();
    t.steps.push_back(std::move(rec));
  }
  t.final_pose = s.pose;
  t.fixations = s.fixations;
  return t;
}

}  // namespace fieldvision
