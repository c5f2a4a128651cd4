#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fieldvision/saliency.hpp"
#include "oracles.hpp"

using namespace fieldvision;

namespace {

SegmentationMap strip(const std::vector<std::size_t>& areas) {
  SegmentationMap seg;
  seg.source = FeatureKind::Intensity;
  seg.q_levels = 64;
  seg.class_bounds = {{0, 32}, {32, 64}};
  for (std::size_t r = 0; r < areas.size(); ++r) {
    seg.regions.push_back({static_cast<int>(r % 2), areas[r]});
    seg.labels.insert(seg.labels.end(), areas[r], static_cast<std::uint32_t>(r));
  }
  seg.width = static_cast<int>(seg.labels.size());
  seg.height = 1;
  return seg;
}

FeatureMap impulse(int w, int h, int x, int y, double v = 1.0,
                   FeatureKind kind = FeatureKind::Interest) {
  std::vector<double> values(static_cast<std::size_t>(w) * h, 0.0);
  values[static_cast<std::size_t>(y) * w + x] = v;
  return FeatureMap(w, h, kind, std::move(values));
}

FusionState with_weights(std::vector<double> w) {
  FusionState s = FusionState::fresh(w.size());
  s.weights = std::move(w);
  return s;
}

std::size_t argmax(const FeatureMap& m) {
  const auto v = m.values();
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

FeatureMap constant(int w, int h, double v) {
  return FeatureMap(w, h, FeatureKind::Intensity, std::vector<double>(std::size_t(w) * h, v));
}

}  // namespace

// ---------------------------------------------------------------------------
// uncommon_map

TEST(Uncommon, SingleRegionIsAllZero) {
  const FeatureMap u = uncommon_map(strip({40}));
  EXPECT_EQ(u.kind(), FeatureKind::UncommonI);
  for (double v : u.values()) EXPECT_EQ(v, 0.0);
}

TEST(Uncommon, EqualAreasAreAllZero) {
  for (double v : uncommon_map(strip({5, 5, 5})).values()) EXPECT_EQ(v, 0.0);
}

TEST(Uncommon, EndpointsOfTwoRegions) {
  const FeatureMap u = uncommon_map(strip({10, 90}));
  EXPECT_EQ(u.at(0, 0), 1.0);
  EXPECT_EQ(u.at(9, 0), 1.0);
  EXPECT_EQ(u.at(10, 0), 0.0);
  EXPECT_EQ(u.at(99, 0), 0.0);
}

TEST(Uncommon, LogInterpolationForMiddleRegion) {
  const FeatureMap u = uncommon_map(strip({10, 30, 60}));
  // (ln 60 - ln 30) / (ln 60 - ln 10) = ln 2 / ln 6.
  EXPECT_NEAR(u.at(15, 0), 0.38685280723454163, 1e-12);
  EXPECT_EQ(u.at(0, 0), 1.0);
  EXPECT_EQ(u.at(99, 0), 0.0);
}

TEST(Uncommon, KindFollowsSource) {
  SegmentationMap s = strip({3, 4});
  s.source = FeatureKind::Hue;
  EXPECT_EQ(uncommon_map(s).kind(), FeatureKind::UncommonH);
  s.source = FeatureKind::Saturation;
  EXPECT_EQ(uncommon_map(s).kind(), FeatureKind::UncommonS);
}

TEST(Uncommon, StrictlyDecreasingInArea) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const SegmentationMap seg = oracle::random_segmentation(rng, 2 + trial % 9, 40);
    const FeatureMap u = uncommon_map(seg);
    std::vector<double> value(seg.regions.size());
    for (std::size_t i = 0; i < seg.labels.size(); ++i) value[seg.labels[i]] = u.values()[i];
    for (std::size_t a = 0; a < value.size(); ++a) {
      EXPECT_GE(value[a], 0.0);
      EXPECT_LE(value[a], 1.0);
      for (std::size_t b = 0; b < value.size(); ++b)
        if (seg.regions[a].area < seg.regions[b].area) {
          EXPECT_GT(value[a], value[b]);
        }
    }
  }
}

TEST(Uncommon, RejectsInconsistentSegmentation) {
  SegmentationMap s = strip({3, 4});
  s.regions[0].area = 5;
  EXPECT_THROW(uncommon_map(s), InputError);
}

// ---------------------------------------------------------------------------
// fuse

TEST(Fuse, SingleMapIsIdentity) {
  std::mt19937_64 rng(1);
  const FeatureMap m = oracle::random_map(rng, 6, 5);
  const FeatureMap f = fuse(std::vector<FeatureMap>{m}, FusionState::fresh(1));
  EXPECT_EQ(f.kind(), FeatureKind::Interest);
  for (std::size_t i = 0; i < m.size(); ++i) EXPECT_EQ(f.values()[i], m.values()[i]);
}

TEST(Fuse, LinearInImpulses) {
  const std::vector<FeatureMap> maps = {impulse(5, 5, 1, 1), impulse(5, 5, 3, 4)};
  const FeatureMap f = fuse(maps, with_weights({0.5, 0.5}));
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 5; ++x) {
      const bool hit = (x == 1 && y == 1) || (x == 3 && y == 4);
      EXPECT_EQ(f.at(x, y), hit ? 0.5 : 0.0);
    }
}

TEST(Fuse, ConvexBoundsAndScaledArgmax) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<FeatureMap> maps;
    for (int i = 0; i < 10; ++i) maps.push_back(oracle::random_map(rng, 9, 7));
    std::vector<double> w(10);
    for (double& x : w) x = u(rng);
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= sum;
    const FusionState s = with_weights(w);
    const FeatureMap f = fuse(maps, s);
    for (std::size_t p = 0; p < f.size(); ++p) {
      double lo = 1.0, hi = 0.0;
      for (const auto& m : maps) {
        lo = std::min(lo, m.values()[p]);
        hi = std::max(hi, m.values()[p]);
      }
      EXPECT_GE(f.values()[p], lo - 1e-12);
      EXPECT_LE(f.values()[p], hi + 1e-12);
    }

    const double alpha = u(rng);
    std::vector<FeatureMap> scaled;
    for (const auto& m : maps) {
      std::vector<double> v(m.values().begin(), m.values().end());
      for (double& x : v) x *= alpha;
      scaled.emplace_back(m.width(), m.height(), m.kind(), std::move(v));
    }
    EXPECT_EQ(argmax(fuse(scaled, s)), argmax(f));
  }
}

TEST(Fuse, RejectsMismatches) {
  const std::vector<FeatureMap> two = {impulse(4, 4, 0, 0), impulse(4, 5, 0, 0)};
  EXPECT_THROW(fuse(two, FusionState::fresh(2)), InputError);
  const std::vector<FeatureMap> one = {impulse(4, 4, 0, 0)};
  EXPECT_THROW(fuse(one, FusionState::fresh(2)), InputError);
  EXPECT_THROW(fuse(std::vector<FeatureMap>{}, FusionState::fresh(1)), InputError);
}

// ---------------------------------------------------------------------------
// adapt_weights

TEST(Adapt, FreshStateIsUniform) {
  const FusionState s = FusionState::fresh();
  EXPECT_EQ(s.n_features, 10u);
  for (double w : s.weights) EXPECT_DOUBLE_EQ(w, 0.1);
  for (double m : s.mean_activation_ema) EXPECT_EQ(m, 0.0);
  EXPECT_EQ(s.frames_processed, 0u);
  s.validate();
}

TEST(Adapt, ActiveMapLosesWeight) {
  const FusionState s = FusionState::fresh(2);
  const std::vector<FeatureMap> maps = {constant(4, 4, 1.0), constant(4, 4, 0.0)};
  const FusionState next = adapt_weights(s, maps);
  EXPECT_GT(next.weights[1], next.weights[0]);
  EXPECT_EQ(next.frames_processed, 1u);
  // Input untouched.
  EXPECT_EQ(s, FusionState::fresh(2));
}

TEST(Adapt, EmaMatchesClosedForm) {
  const std::vector<double> mu = {0.0, 0.13, 0.5, 0.77, 1.0};
  std::vector<FeatureMap> maps;
  for (double m : mu) maps.push_back(constant(3, 3, m));
  FusionState s = FusionState::fresh(mu.size(), 0.1, 0.01);
  for (int t = 1; t <= 10; ++t) {
    s = adapt_weights(s, maps);
    for (std::size_t i = 0; i < mu.size(); ++i)
      EXPECT_NEAR(s.mean_activation_ema[i], mu[i] * (1.0 - std::pow(0.9, t)), 1e-12);
  }
}

TEST(Adapt, WeightsStayNormalizedOverLongRandomHistories) {
  std::mt19937_64 rng(77);
  FusionState s = FusionState::fresh(10, 0.3, 0.01);
  for (int t = 0; t < 1000; ++t) {
    std::vector<FeatureMap> maps;
    for (int i = 0; i < 10; ++i) maps.push_back(oracle::random_map(rng, 3, 3));
    s = adapt_weights(s, maps);
    const double sum = std::accumulate(s.weights.begin(), s.weights.end(), 0.0);
    ASSERT_NEAR(sum, 1.0, 1e-9);
    for (double w : s.weights) ASSERT_GT(w, 0.0);
  }
  EXPECT_EQ(s.frames_processed, 1000u);
}

TEST(Adapt, ChronicallyActiveMapEndsLighter) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 0.5);
  FusionState s = FusionState::fresh(2);
  for (int t = 0; t < 30; ++t) {
    const double b = u(rng);
    s = adapt_weights(s, std::vector<FeatureMap>{constant(3, 3, b + 0.4), constant(3, 3, b)});
  }
  EXPECT_GT(s.mean_activation_ema[0], s.mean_activation_ema[1]);
  EXPECT_LT(s.weights[0], s.weights[1]);
}

// ---------------------------------------------------------------------------
// extract_interest_points

TEST(Extract, SingleImpulse) {
  const auto pts = extract_interest_points(impulse(8, 6, 5, 2), 3, 2, 0.5);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0], (InterestPoint{5, 2, 1.0, 0}));
}

TEST(Extract, EqualImpulsesBreakTiesByRowThenColumn) {
  std::vector<double> v(10 * 6, 0.0);
  v[3 * 10 + 7] = 1.0;
  v[3 * 10 + 2] = 1.0;
  const FeatureMap m(10, 6, FeatureKind::Interest, v);
  const auto pts = extract_interest_points(m, 5, 2, 0.5);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0].x, 2);
  EXPECT_EQ(pts[1].x, 7);
  EXPECT_EQ(pts[1].rank, 1);
}

TEST(Extract, MatchesRescanningGreedyOracle) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const FeatureMap m = oracle::random_map(rng, 16, 16, FeatureKind::Interest);
    for (int radius : {0, 1, 3, 6}) {
      for (double min_score : {0.0, 0.6}) {
        const auto got = extract_interest_points(m, 5, radius, min_score);
        EXPECT_EQ(got, oracle::greedy_points(m, 5, radius, min_score));
      }
    }
  }
}

TEST(Extract, QuantizedMapsExerciseTies) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> lv(0, 3);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> v(16 * 16);
    for (double& x : v) x = lv(rng) / 3.0;
    const FeatureMap m(16, 16, FeatureKind::Interest, v);
    EXPECT_EQ(extract_interest_points(m, 8, 2, 0.0), oracle::greedy_points(m, 8, 2, 0.0));
  }
}

TEST(Extract, PointsAreSeparatedAndSorted) {
  std::mt19937_64 rng(19);
  const FeatureMap m = oracle::random_map(rng, 40, 30, FeatureKind::Interest);
  const auto pts = extract_interest_points(m, 25, 4, 0.0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_EQ(pts[i].rank, static_cast<int>(i));
    if (i > 0) {
      EXPECT_LE(pts[i].score, pts[i - 1].score);
    }
    for (std::size_t j = 0; j < i; ++j) {
      const double dx = pts[i].x - pts[j].x, dy = pts[i].y - pts[j].y;
      EXPECT_GT(std::sqrt(dx * dx + dy * dy), 4.0);
    }
  }
}

TEST(Extract, MayReturnFewerThanK) {
  EXPECT_TRUE(extract_interest_points(FeatureMap::zeros(5, 5, FeatureKind::Interest), 3, 1, 0.1)
                  .empty());
  EXPECT_THROW(extract_interest_points(impulse(4, 4, 0, 0), 0, 1, 0.0), InputError);
  EXPECT_THROW(extract_interest_points(impulse(4, 4, 0, 0), 1, -1, 0.0), InputError);
}
