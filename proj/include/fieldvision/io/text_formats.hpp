#pragma once

// Line-oriented text documents: persisted fusion state, interest points,
// region tables and session trajectories. Each starts with a one-line
// header naming the format and its version.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fieldvision/saliency.hpp"
#include "fieldvision/segmentation.hpp"
#include "fieldvision/session.hpp"

namespace fieldvision::io {

inline constexpr int kFusionStateVersion = 1;
inline constexpr int kPointsVersion = 1;
inline constexpr int kRegionsVersion = 1;
inline constexpr int kTrajectoryVersion = 1;

namespace detail {

inline std::string exact(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

inline void expect_header(std::istream& in, const std::string& magic, int version) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError(magic + ": empty document");
  std::istringstream hs(line);
  std::string got_magic, vtag;
  hs >> got_magic >> vtag;
  if (got_magic != magic) throw FormatError("expected '" + magic + "' header, got '" + line + "'");
  if (vtag != "v" + std::to_string(version))
    throw FormatError(magic + ": unsupported version '" + vtag + "'");
}

template <typename T>
T read_field(std::istream& in, const std::string& key) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string k;
    T value{};
    ls >> k;
    if (k != key) throw FormatError("expected field '" + key + "', got '" + k + "'");
    if (!(ls >> value)) throw FormatError("field '" + key + "' has no valid value");
    return value;
  }
  throw FormatError("missing field '" + key + "'");
}

inline std::vector<double> read_vector(std::istream& in, const std::string& key, std::size_t n) {
  std::string line;
  while (std::getline(in, line) && line.empty()) {
  }
  std::istringstream ls(line);
  std::string k;
  ls >> k;
  if (k != key) throw FormatError("expected field '" + key + "', got '" + k + "'");
  std::vector<double> out(n);
  for (double& v : out)
    if (!(ls >> v)) throw FormatError("field '" + key + "' has fewer than n_features values");
  double extra;
  if (ls >> extra) throw FormatError("field '" + key + "' has more than n_features values");
  return out;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Fusion state

inline void write_fusion_state(std::ostream& out, const FusionState& s) {
  out << "fieldvision-fusion-state v" << kFusionStateVersion << '\n';
  out << "n_features " << s.n_features << '\n';
  out << "eta " << detail::exact(s.eta) << '\n';
  out << "epsilon " << detail::exact(s.epsilon) << '\n';
  out << "frames_processed " << s.frames_processed << '\n';
  out << "weights";
  for (double w : s.weights) out << ' ' << detail::exact(w);
  out << "\nema";
  for (double m : s.mean_activation_ema) out << ' ' << detail::exact(m);
  out << '\n';
}

inline FusionState read_fusion_state(std::istream& in) {
  detail::expect_header(in, "fieldvision-fusion-state", kFusionStateVersion);
  FusionState s;
  s.n_features = detail::read_field<std::size_t>(in, "n_features");
  if (s.n_features == 0 || s.n_features > 1024) throw FormatError("implausible n_features");
  s.eta = detail::read_field<double>(in, "eta");
  s.epsilon = detail::read_field<double>(in, "epsilon");
  s.frames_processed = detail::read_field<std::size_t>(in, "frames_processed");
  s.weights = detail::read_vector(in, "weights", s.n_features);
  s.mean_activation_ema = detail::read_vector(in, "ema", s.n_features);
  try {
    s.validate();
  } catch (const InputError& e) {
    throw FormatError(std::string("fusion state: ") + e.what());
  }
  return s;
}

inline void save_fusion_state(const std::string& path, const FusionState& s) {
  auto out = detail::open_out(path);
  write_fusion_state(out, s);
  if (!out) throw IoError("failed writing '" + path + "'");
}

inline FusionState load_fusion_state(const std::string& path) {
  auto in = detail::open_in(path);
  return read_fusion_state(in);
}

// ---------------------------------------------------------------------------
// Interest points

inline void write_points(std::ostream& out, const std::vector<InterestPoint>& points) {
  out << "fieldvision-points v" << kPointsVersion << " rank x y score\n";
  for (const InterestPoint& p : points)
    out << p.rank << ' ' << p.x << ' ' << p.y << ' ' << detail::exact(p.score) << '\n';
}

inline std::vector<InterestPoint> read_points(std::istream& in) {
  detail::expect_header(in, "fieldvision-points", kPointsVersion);
  std::vector<InterestPoint> points;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    InterestPoint p;
    if (!(ls >> p.rank >> p.x >> p.y >> p.score)) throw FormatError("bad points line: " + line);
    points.push_back(p);
  }
  return points;
}

// ---------------------------------------------------------------------------
// Region table (sidecar of a 16-bit label raster)

inline void write_regions(std::ostream& out, const SegmentationMap& seg) {
  out << "fieldvision-regions v" << kRegionsVersion << '\n';
  out << "source " << feature_name(seg.source) << '\n';
  out << "size " << seg.width << ' ' << seg.height << '\n';
  out << "q_levels " << seg.q_levels << '\n';
  out << "classes " << seg.class_bounds.size() << '\n';
  for (std::size_t c = 0; c < seg.class_bounds.size(); ++c)
    out << "class " << c << ' ' << seg.class_bounds[c].lo << ' ' << seg.class_bounds[c].hi << '\n';
  out << "regions " << seg.regions.size() << '\n';
  for (std::size_t r = 0; r < seg.regions.size(); ++r)
    out << "region " << r << ' ' << seg.regions[r].class_id << ' ' << seg.regions[r].area << '\n';
}

// ---------------------------------------------------------------------------
// Session trajectory

inline void write_trajectory(std::ostream& out, const Trajectory& t) {
  out << "fieldvision-trajectory v" << kTrajectoryVersion
      << " step pan tilt crop_x crop_y fixated x y score\n";
  for (const StepRecord& s : t.steps) {
    out << s.step << ' ' << detail::exact(s.pose.pan) << ' ' << detail::exact(s.pose.tilt) << ' '
        << s.origin.x << ' ' << s.origin.y << ' ';
    if (s.fixation)
      out << "1 " << s.fixation->x << ' ' << s.fixation->y << ' '
          << detail::exact(s.fixation->score) << '\n';
    else
      out << "0 - - -\n";
  }
}

}  // namespace fieldvision::io
