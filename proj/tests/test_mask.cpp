#include "samurai/error.hpp"
#include "samurai/mask.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <initializer_list>
#include <random>
#include <string>

using namespace samurai;

namespace {

BinaryMask from_rows(std::initializer_list<std::string> rows) {
  const auto h = static_cast<Eigen::Index>(rows.size());
  const auto w = static_cast<Eigen::Index>(rows.begin()->size());
  BinaryMask m(h, w);
  Eigen::Index y = 0;
  for (const auto& row : rows) {
    for (Eigen::Index x = 0; x < w; ++x) m(y, x) = row[static_cast<std::size_t>(x)] == '1';
    ++y;
  }
  return m;
}

std::vector<long> as_indices(const BinaryMask& m) {
  std::vector<long> out;
  for (long i = 0; i < m.size(); ++i) {
    if (m(i / m.cols(), i % m.cols())) out.push_back(i);
  }
  return out;
}

constexpr Rgb kKey{135, 206, 235};

}  // namespace

TEST(ExtractMask, AllKeyColored) {
  RgbImage img(3, 3, kKey);
  EXPECT_TRUE(extract_mask(img, kQueryMaskKey).all());
}

TEST(ExtractMask, CenterOnly) {
  RgbImage img(3, 3, {0, 0, 0});
  img.set(1, 1, kKey);
  const auto m = extract_mask(img, kQueryMaskKey);
  EXPECT_EQ(m.count(), 1);
  EXPECT_TRUE(m(1, 1));
}

TEST(ExtractMask, ToleranceIsMaxChannelDifference) {
  RgbImage img(1, 1, {136, 206, 235});
  EXPECT_FALSE(extract_mask(img, kQueryMaskKey)(0, 0));
  MaskKey loose = kQueryMaskKey;
  loose.tolerance = 1;
  EXPECT_TRUE(extract_mask(img, loose)(0, 0));

  img.set(0, 0, {134, 207, 233});
  EXPECT_FALSE(extract_mask(img, loose)(0, 0));
  loose.tolerance = 2;
  EXPECT_TRUE(extract_mask(img, loose)(0, 0));
}

TEST(ExtractMask, RejectsOutOfRangeTolerance) {
  RgbImage img(1, 1);
  MaskKey bad = kQueryMaskKey;
  bad.tolerance = 256;
  EXPECT_THROW(extract_mask(img, bad), Error);
}

TEST(ConnectedComponents, DiagonalJoinsUnderEight) {
  const auto m = from_rows({"110", "010", "001"});
  const auto c8 = connected_components(m, Connectivity::Eight);
  ASSERT_EQ(c8.size(), 1u);
  EXPECT_EQ(c8[0].size(), 4u);
  EXPECT_EQ(c8[0].label, 1);

  const auto c4 = connected_components(m, Connectivity::Four);
  ASSERT_EQ(c4.size(), 2u);
  EXPECT_EQ(c4[0].pixels, (std::vector<Eigen::Index>{0, 1, 4}));
  EXPECT_EQ(c4[1].pixels, (std::vector<Eigen::Index>{8}));
}

TEST(ConnectedComponents, EmptyMask) {
  EXPECT_TRUE(connected_components(BinaryMask::Constant(4, 5, false), Connectivity::Eight).empty());
}

TEST(ConnectedComponents, UShapeMergesLateInScan) {
  // The two arms get separate provisional labels until the bottom row.
  const auto m = from_rows({"10001", "10001", "11111"});
  const auto c = connected_components(m, Connectivity::Four);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].size(), 9u);
}

TEST(LargestComponent, KeepsBiggest) {
  const auto m = from_rows({"11100", "11000", "00011", "00001", "00001"});
  const auto out = largest_component(m, Connectivity::Four);
  EXPECT_EQ(as_indices(out), (std::vector<long>{0, 1, 2, 5, 6}));
}

TEST(LargestComponent, SingleComponentIsIdentity) {
  const auto m = from_rows({"0110", "0110"});
  EXPECT_TRUE((largest_component(m, Connectivity::Eight) == m).all());
}

TEST(LargestComponent, TieGoesToSmallestPixelIndex) {
  const auto m = from_rows({"1100", "0000", "0011"});
  const auto out = largest_component(m, Connectivity::Eight);
  EXPECT_EQ(as_indices(out), (std::vector<long>{0, 1}));
  EXPECT_EQ(oracle::flood_fill_components(m, 8).front(), (std::vector<long>{0, 1}));
}

TEST(LargestComponent, EmptyMaskThrows) {
  try {
    largest_component(BinaryMask::Constant(2, 2, false), Connectivity::Eight);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyMask);
  }
}

TEST(LargestComponent, MatchesFloodFillOnRandomMasks) {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 300; ++trial) {
    const auto m = oracle::random_mask(rng, 40, trial % 2 ? 0.35 : 0.6);
    for (int conn : {4, 8}) {
      const auto expected = oracle::flood_fill_components(m, conn);
      const auto got = connected_components(m, conn == 4 ? Connectivity::Four : Connectivity::Eight);
      ASSERT_EQ(got.size(), expected.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        ASSERT_EQ(std::vector<long>(got[i].pixels.begin(), got[i].pixels.end()), expected[i]);
      }
      if (expected.empty()) continue;
      const auto largest = largest_component(m, conn == 4 ? Connectivity::Four : Connectivity::Eight);
      ASSERT_EQ(as_indices(largest), expected.front());
      ASSERT_TRUE((largest <= m).all());  // subset
    }
  }
}

TEST(ConnectedComponents, FourComponentsNestInEightComponents) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = oracle::random_mask(rng, 24, 0.45);
    const auto c4 = connected_components(m, Connectivity::Four);
    const auto c8 = connected_components(m, Connectivity::Eight);
    std::vector<int> owner(static_cast<std::size_t>(m.size()), -1);
    for (const auto& c : c8) {
      for (auto p : c.pixels) owner[static_cast<std::size_t>(p)] = c.label;
    }
    for (const auto& c : c4) {
      const int o = owner[static_cast<std::size_t>(c.pixels.front())];
      for (auto p : c.pixels) ASSERT_EQ(owner[static_cast<std::size_t>(p)], o);
    }
    ASSERT_LE(c8.size(), c4.size());
  }
}

TEST(PaddedBBox, PaddingTenAroundBlock) {
  BinaryMask m = BinaryMask::Constant(100, 100, false);
  m.block(20, 20, 10, 10).setConstant(true);
  EXPECT_EQ(tight_bbox(m), (BBox{20, 20, 30, 30}));
  EXPECT_EQ(padded_bbox(m, 10), (BBox{10, 10, 40, 40}));
}

TEST(PaddedBBox, ClampsAtOrigin) {
  BinaryMask m = BinaryMask::Constant(100, 100, false);
  m(0, 0) = true;
  EXPECT_EQ(padded_bbox(m, 10), (BBox{0, 0, 11, 11}));
}

TEST(PaddedBBox, ClampsAtFarCorner) {
  BinaryMask m = BinaryMask::Constant(50, 80, false);
  m(49, 79) = true;
  EXPECT_EQ(padded_bbox(m, 10), (BBox{69, 39, 80, 50}));
}

TEST(PaddedBBox, FullFrame) {
  const BinaryMask m = BinaryMask::Constant(7, 9, true);
  EXPECT_EQ(padded_bbox(m, 10), (BBox{0, 0, 9, 7}));
}

TEST(PaddedBBox, EmptyMaskThrows) {
  EXPECT_THROW(padded_bbox(BinaryMask::Constant(3, 3, false), 10), Error);
}

TEST(PaddedBBox, ContainsTightBoxAndIsMonotoneInPadding) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    auto m = oracle::random_mask(rng, 30, 0.05);
    m(0, 0) = m(0, 0) || m.count() == 0;
    const BBox t = tight_bbox(m);
    BBox prev = padded_bbox(m, 0);
    EXPECT_EQ(prev, t);
    for (int pad = 1; pad <= 12; ++pad) {
      const BBox b = padded_bbox(m, pad);
      ASSERT_LE(b.x0, prev.x0);
      ASSERT_LE(b.y0, prev.y0);
      ASSERT_GE(b.x1, prev.x1);
      ASSERT_GE(b.y1, prev.y1);
      ASSERT_GE(b.x0, 0);
      ASSERT_LE(b.x1, m.cols());
      prev = b;
    }
  }
}

TEST(CropAndRefine, RecapturesFragmentsInsidePadding) {
  RgbImage img(60, 60, {10, 20, 30});
  img.fill_rect(20, 20, 10, 10, kKey);  // main body
  img.fill_rect(22, 33, 3, 2, kKey);    // detached part, 3 px right of the body
  img.set(55, 55, kKey);                // far-away speck

  const auto mask = extract_mask(img, kQueryMaskKey);
  const auto largest = largest_component(mask, Connectivity::Eight);
  const auto box = padded_bbox(largest, kDefaultPadding);
  const auto q = crop_and_refine(img, box, kQueryMaskKey, "s1");

  EXPECT_EQ(q.scene_id, "s1");
  EXPECT_EQ(q.crop_rgb.width(), box.width());
  EXPECT_EQ(q.crop_rgb.height(), box.height());
  EXPECT_EQ(q.refined_mask.rows(), box.height());
  EXPECT_EQ(q.refined_mask.count(), 106);
  EXPECT_GE(q.refined_mask.count(), largest.count());
}

TEST(CropAndRefine, FullFrameAllKey) {
  RgbImage img(4, 5, kKey);
  const auto q = crop_and_refine(img, {0, 0, 5, 4}, kQueryMaskKey);
  EXPECT_TRUE(q.refined_mask.all());
  EXPECT_TRUE(q.crop_rgb == img);
}

TEST(CropAndRefine, KeyFreeRegionThrows) {
  RgbImage img(10, 10, {0, 0, 0});
  img.set(9, 9, kKey);
  try {
    crop_and_refine(img, {0, 0, 4, 4}, kQueryMaskKey, "s9");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyRefinedMask);
  }
}

TEST(CropAndRefine, RejectsBoxOutsideImage) {
  RgbImage img(4, 4, kKey);
  EXPECT_THROW(crop_and_refine(img, {0, 0, 5, 4}, kQueryMaskKey), Error);
}

TEST(RenderSilhouette, WhiteOnBlack) {
  BinaryMask m(2, 2);
  m << true, false, false, true;
  const auto s = render_silhouette(m);
  EXPECT_EQ(s.at(0, 0), (Rgb{255, 255, 255}));
  EXPECT_EQ(s.at(1, 1), (Rgb{255, 255, 255}));
  EXPECT_EQ(s.at(0, 1), (Rgb{0, 0, 0}));
  EXPECT_EQ(s.at(1, 0), (Rgb{0, 0, 0}));
}

TEST(RenderSilhouette, EmptyMaskIsBlack) {
  const auto s = render_silhouette(BinaryMask::Constant(3, 2, false));
  EXPECT_TRUE((s.r == 0).all() && (s.g == 0).all() && (s.b == 0).all());
}

TEST(RenderSilhouette, RoundTripsThroughWhiteKey) {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = oracle::random_mask(rng, 32, 0.5);
    ASSERT_TRUE((extract_mask(render_silhouette(m), kSilhouetteKey) == m).all());
  }
}

TEST(PreprocessScene, DeterministicAndConsistent) {
  RgbImage img(40, 40, {1, 2, 3});
  img.fill_rect(15, 12, 6, 8, kKey);
  img.set(0, 39, kKey);
  const auto a = preprocess_scene("s", img, kQueryMaskKey, 10, Connectivity::Eight);
  const auto b = preprocess_scene("s", img, kQueryMaskKey, 10, Connectivity::Eight);
  EXPECT_EQ(a.bbox, b.bbox);
  EXPECT_TRUE(a.query.crop_rgb == b.query.crop_rgb);
  EXPECT_TRUE((a.query.refined_mask == b.query.refined_mask).all());
  EXPECT_EQ(a.component_sizes, (std::vector<std::size_t>{48, 1}));
  EXPECT_EQ(a.bbox, (BBox{2, 5, 30, 31}));
  EXPECT_EQ(a.refined_popcount, 48u);
}

TEST(PreprocessScene, NoKeyPixelsIsEmptyMask) {
  RgbImage img(5, 5, {0, 0, 0});
  try {
    preprocess_scene("lonely", img, kQueryMaskKey, 10, Connectivity::Eight);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyMask);
    EXPECT_NE(std::string(e.what()).find("lonely"), std::string::npos);
  }
}
