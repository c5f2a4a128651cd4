#pragma once

// Subcommand bodies, kept apart from argument parsing so tests can call
// them in-process.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fieldvision/fieldvision.hpp"
#include "fieldvision/io/png.hpp"
#include "fieldvision/io/raster.hpp"
#include "fieldvision/io/text_formats.hpp"

namespace fieldvision::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kConfigError = 3,
  kIoError = 4,
  kFormatError = 5,
};

namespace fs = std::filesystem;

inline fs::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir + "'");
  return fs::path(dir);
}

inline std::string map_path(const fs::path& dir, FeatureKind kind, const char* ext = ".png") {
  return (dir / (std::string(feature_name(kind)) + ext)).string();
}

/// H, S, I and the four edge maps, each scaled by 255 without normalization.
inline std::vector<std::string> cmd_decompose(const std::string& input, const std::string& out_dir) {
  const Image img = io::load_image(input);
  const fs::path dir = prepare_dir(out_dir);
  HsiMaps hsi = rgb_to_hsi(img);
  std::vector<FeatureMap> maps = {hsi.hue, hsi.saturation, hsi.intensity};
  for (auto& e : sobel_edges_all(hsi.intensity)) maps.push_back(std::move(e));

  std::vector<std::string> written;
  for (const FeatureMap& m : maps) {
    written.push_back(map_path(dir, m.kind()));
    io::save_png(written.back(), io::to_gray8(m));
  }
  return written;
}

/// Label rasters (16-bit PNG) and region tables for the H, S, I channels.
inline std::vector<std::string> cmd_segment(const std::string& input, const std::string& out_dir,
                                            const RunConfig& cfg) {
  const Image img = io::load_image(input);
  const fs::path dir = prepare_dir(out_dir);
  const HsiMaps hsi = rgb_to_hsi(img);
  const SegmentationParams params = cfg.pipeline_params().segmentation;

  std::vector<std::string> written;
  for (const FeatureMap* ch : {&hsi.hue, &hsi.saturation, &hsi.intensity}) {
    const SegmentationMap seg = segment(*ch, params);
    const std::string stem = "segment_" + std::string(feature_name(ch->kind()));
    written.push_back((dir / (stem + ".png")).string());
    io::save_png(written.back(), io::labels_to_gray16(seg));
    written.push_back((dir / (stem + ".regions.txt")).string());
    auto out = io::detail::open_out(written.back());
    io::write_regions(out, seg);
  }
  return written;
}

inline std::vector<std::string> cmd_uncommon(const std::string& input, const std::string& out_dir,
                                             const RunConfig& cfg) {
  const Image img = io::load_image(input);
  const fs::path dir = prepare_dir(out_dir);
  const HsiMaps hsi = rgb_to_hsi(img);
  const SegmentationParams params = cfg.pipeline_params().segmentation;

  std::vector<std::string> written;
  for (const FeatureMap* ch : {&hsi.hue, &hsi.saturation, &hsi.intensity}) {
    const FeatureMap u = uncommon_map(segment(*ch, params));
    written.push_back(map_path(dir, u.kind()));
    io::save_png(written.back(), io::to_gray8(u));
  }
  return written;
}

struct InterestOutputs {
  std::string interest_png;
  std::string interest_npy;
  std::string points;
  std::string state;
};

/// One frame through the full pipeline. The fusion state is read from
/// state_in when given and the updated state is written to
/// <out_dir>/fusion_state.txt.
inline InterestOutputs cmd_interest(const std::string& input,
                                    const std::optional<std::string>& state_in,
                                    const std::string& out_dir, const RunConfig& cfg) {
  const Image img = io::load_image(input);
  const FusionState state = state_in ? io::load_fusion_state(*state_in) : cfg.fresh_fusion_state();
  if (state.n_features != kCanonicalFeatures.size())
    throw FormatError("fusion state must track 10 features");
  const fs::path dir = prepare_dir(out_dir);

  const PipelineResult r = pipeline(img, state, cfg.pipeline_params());

  InterestOutputs o;
  o.interest_png = (dir / "interest.png").string();
  o.interest_npy = (dir / "interest.npy").string();
  o.points = (dir / "points.txt").string();
  o.state = (dir / "fusion_state.txt").string();
  io::save_png(o.interest_png, io::to_gray8_normalized(r.interest));
  io::save_npy(o.interest_npy, r.interest);
  {
    auto out = io::detail::open_out(o.points);
    io::write_points(out, r.points);
  }
  io::save_fusion_state(o.state, r.state);
  return o;
}

/// Runs the pan-tilt simulation over a mosaic and writes trajectory.txt,
/// fusion_state.txt and, when save_maps is set, step_NNN_interest.png.
inline Trajectory cmd_session(const std::string& mosaic_path, const RunConfig& cfg,
                              const std::string& out_dir, bool save_maps) {
  Image mosaic = io::load_image(mosaic_path);
  const fs::path dir = prepare_dir(out_dir);
  SessionState state = make_session(std::move(mosaic), cfg.session_config(),
                                    cfg.fresh_fusion_state());
  Trajectory t;
  while (state.steps_taken < state.max_steps) {
    StepRecord rec = session_step(state);
    if (save_maps) {
      char name[64];
      std::snprintf(name, sizeof name, "step_%03d_interest.png", rec.step);
      io::save_png((dir / name).string(), io::to_gray8_normalized(rec.interest));
    }
    rec.interest = FeatureMap();
    t.steps.push_back(std::move(rec));
  }
  t.final_pose = state.pose;
  t.fixations = state.fixations;

  auto out = io::detail::open_out((dir / "trajectory.txt").string());
  io::write_trajectory(out, t);
  io::save_fusion_state((dir / "fusion_state.txt").string(), state.fusion);
  return t;
}

inline BenchReport cmd_bench(const std::string& input, int repetitions, const RunConfig& cfg,
                             std::ostream& report) {
  const Image img = io::load_image(input);
  BenchReport r = run_bench(img, repetitions, cfg.pipeline_params());
  report << format_report(r);
  return r;
}

}  // namespace fieldvision::cli
