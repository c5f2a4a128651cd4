#include <gtest/gtest.h>

#include <random>

#include "fieldvision/colorspace.hpp"
#include "oracles.hpp"

using namespace fieldvision;

namespace {

Image one_color(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return Image::filled(3, 3, {r, g, b});
}

}  // namespace

TEST(Colorspace, PureRed) {
  const HsiMaps m = rgb_to_hsi(one_color(255, 0, 0));
  EXPECT_NEAR(m.hue.at(1, 1), 0.0, 1e-12);
  EXPECT_NEAR(m.saturation.at(1, 1), 1.0, 1e-12);
  EXPECT_NEAR(m.intensity.at(1, 1), 1.0 / 3.0, 1e-12);
}

TEST(Colorspace, GrayIsAchromatic) {
  for (int g : {0, 1, 77, 128, 254, 255}) {
    const auto v = static_cast<std::uint8_t>(g);
    const HsiMaps m = rgb_to_hsi(one_color(v, v, v));
    EXPECT_EQ(m.hue.at(0, 0), 0.0);
    EXPECT_EQ(m.saturation.at(0, 0), 0.0);
    EXPECT_NEAR(m.intensity.at(0, 0), g / 255.0, 1e-12);
  }
}

TEST(Colorspace, WorkedExampleMatchesHandEvaluation) {
  // (0.2, 0.4, 0.6) * 255: hue 210 degrees, S = 1 - 3*0.2/1.2, I = 0.4.
  const HsiMaps m = rgb_to_hsi(one_color(51, 102, 153));
  EXPECT_NEAR(m.hue.at(2, 2), 210.0 / 360.0, 1e-6);
  EXPECT_NEAR(m.hue.at(2, 2), oracle::hue_atan2(0.2, 0.4, 0.6), 1e-9);
  EXPECT_NEAR(m.saturation.at(2, 2), 0.5, 1e-6);
  EXPECT_NEAR(m.intensity.at(2, 2), 0.4, 1e-6);
}

TEST(Colorspace, HueAgreesWithAtan2FormOnRandomPixels) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> c(0, 255);
  for (int i = 0; i < 5000; ++i) {
    const int r = c(rng), g = c(rng), b = c(rng);
    if (r == g && g == b) continue;
    const Hsi v = pixel_to_hsi(r, g, b);
    const double expect = oracle::hue_atan2(r / 255.0, g / 255.0, b / 255.0);
    // Both forms wrap at 0 == 1.
    const double d = std::abs(v.h - expect);
    EXPECT_LT(std::min(d, 1.0 - d), 1e-9) << r << ',' << g << ',' << b;
  }
}

TEST(Colorspace, SaturationAndIntensityIgnoreChannelOrder) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> c(0, 255);
  for (int i = 0; i < 2000; ++i) {
    std::array<std::uint8_t, 3> p = {static_cast<std::uint8_t>(c(rng)),
                                     static_cast<std::uint8_t>(c(rng)),
                                     static_cast<std::uint8_t>(c(rng))};
    const Hsi ref = pixel_to_hsi(p[0], p[1], p[2]);
    std::sort(p.begin(), p.end());
    do {
      const Hsi v = pixel_to_hsi(p[0], p[1], p[2]);
      EXPECT_EQ(v.s, ref.s);
      EXPECT_EQ(v.i, ref.i);
    } while (std::next_permutation(p.begin(), p.end()));
  }
}

TEST(Colorspace, OutputsShapedLikeInputAndBounded) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> c(0, 255);
  std::vector<std::uint8_t> px(3 * 17 * 9);
  for (auto& v : px) v = static_cast<std::uint8_t>(c(rng));
  const Image img(17, 9, px);
  const HsiMaps a = rgb_to_hsi(img);
  for (const FeatureMap* m : {&a.hue, &a.saturation, &a.intensity}) {
    EXPECT_EQ(m->width(), 17);
    EXPECT_EQ(m->height(), 9);
    for (double v : m->values()) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
  EXPECT_EQ(a.hue.kind(), FeatureKind::Hue);
  EXPECT_EQ(a.saturation.kind(), FeatureKind::Saturation);
  EXPECT_EQ(a.intensity.kind(), FeatureKind::Intensity);

  const HsiMaps b = rgb_to_hsi(img);
  EXPECT_EQ(a.hue, b.hue);
  EXPECT_EQ(a.saturation, b.saturation);
  EXPECT_EQ(a.intensity, b.intensity);
}

TEST(Colorspace, RejectsMalformedImages) {
  EXPECT_THROW(Image(2, 5, std::vector<std::uint8_t>(30)), InputError);
  EXPECT_THROW(Image(4, 4, std::vector<std::uint8_t>(47)), InputError);
}
