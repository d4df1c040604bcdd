#include "motrack/detection.hpp"

#include <gtest/gtest.h>

#include "motrack/errors.hpp"
#include "test_util.hpp"

using namespace motrack;
using testutil::TempDir;
using testutil::code_of;
using testutil::read_file;
using testutil::write_file;

namespace {

Detection det(int frame, double cx, double cy, double w, double h, double conf,
              Level level = Level::builtin) {
  Detection d;
  d.frame = frame;
  d.box = Box{cx, cy, w, h};
  d.confidence = conf;
  d.level = level;
  return d;
}

FeatureStack stack_with_deviation(ImageU8 dev) {
  FeatureStack s;
  s.intensity = ImageU8(dev.width, dev.height);
  s.flow = ImageU8(dev.width, dev.height);
  s.deviation = std::move(dev);
  return s;
}

}  // namespace

TEST(Level, NamesRoundTrip) {
  for (Level l : {Level::low, Level::medium, Level::high, Level::builtin})
    EXPECT_EQ(parse_level(level_name(l)), l);
  EXPECT_EQ(code_of([] { parse_level("extreme"); }), ErrorCode::config);
}

TEST(DetectionSet, GroupsByFrameAndPreservesOrder) {
  DetectionSet set;
  set.add(det(1, 10, 10, 4, 4, 0.9));
  set.add(det(0, 5, 5, 4, 4, 0.5));
  set.add(det(1, 20, 20, 4, 4, 0.8));

  EXPECT_EQ(set.num_frames(), 2);
  EXPECT_EQ(set.total(), 3u);
  ASSERT_EQ(set.frame(1).size(), 2u);
  EXPECT_DOUBLE_EQ(set.frame(1)[0].box.cx, 10.0);
  EXPECT_DOUBLE_EQ(set.frame(1)[1].box.cx, 20.0);
  EXPECT_TRUE(set.frame(7).empty());
  EXPECT_TRUE(set.frame(-1).empty());

  auto flat = set.flatten();
  ASSERT_EQ(flat.size(), 3u);
  EXPECT_EQ(flat[0].frame, 0);
}

TEST(DetectionCsv, WriteReadRoundTripIsLossless) {
  TempDir tmp;
  DetectionSet set;
  set.add(det(0, 12.34567890123, 7.5, 30, 30, 0.123456789, Level::low));
  set.add(det(2, 0.1, 0.2, 1e-3, 2.5e2, 1.0, Level::low));
  write_detections(tmp.path("d.csv"), set);

  DetectionSet back = read_detections(tmp.path("d.csv"), Level::low);
  EXPECT_TRUE(back == set);
}

TEST(DetectionCsv, ReaderTagsRequestedLevel) {
  TempDir tmp;
  write_file(tmp.path("d.csv"), "frame,cx,cy,w,h,confidence\n0,5,5,4,4,0.5\n");
  DetectionSet set = read_detections(tmp.path("d.csv"), Level::high);
  ASSERT_EQ(set.total(), 1u);
  EXPECT_EQ(set.frame(0)[0].level, Level::high);
}

TEST(DetectionCsv, ZeroByteFileIsEmptySet) {
  TempDir tmp;
  write_file(tmp.path("d.csv"), "");
  EXPECT_EQ(read_detections(tmp.path("d.csv"), Level::low).total(), 0u);
}

TEST(DetectionCsv, CrlfAndBlankLinesTolerated) {
  TempDir tmp;
  write_file(tmp.path("d.csv"), "frame,cx,cy,w,h,confidence\r\n0,5,5,4,4,0.5\r\n\r\n");
  EXPECT_EQ(read_detections(tmp.path("d.csv"), Level::low).total(), 1u);
}

TEST(DetectionCsv, BadInputsAreFormatErrors) {
  TempDir tmp;
  auto expect_format = [&](const std::string& content) {
    write_file(tmp.path("d.csv"), content);
    EXPECT_EQ(code_of([&] { read_detections(tmp.path("d.csv"), Level::low); }),
              ErrorCode::format)
        << content;
  };
  expect_format("frame,cx,cy,w,h\n");                            // wrong header
  expect_format("frame,cx,cy,w,h,confidence\n0,5,5,4,4\n");      // five fields
  expect_format("frame,cx,cy,w,h,confidence\n0,5,5,4,4,0.5,9\n");// seven fields
  expect_format("frame,cx,cy,w,h,confidence\n0,5,5,-4,4,0.5\n"); // negative size
  expect_format("frame,cx,cy,w,h,confidence\n0,5,5,4,4,1.5\n");  // confidence > 1
  expect_format("frame,cx,cy,w,h,confidence\n-1,5,5,4,4,0.5\n"); // negative frame
  expect_format("frame,cx,cy,w,h,confidence\nx,5,5,4,4,0.5\n");  // non-numeric
}

TEST(DetectionCsv, MissingFileIsIoError) {
  EXPECT_EQ(code_of([] { read_detections("/nonexistent/d.csv", Level::low); }), ErrorCode::io);
}

TEST(MergeLevels, ConcatenatesPerFrameInSetOrder) {
  DetectionSet a, b;
  a.add(det(0, 1, 1, 4, 4, 0.1, Level::low));
  a.add(det(2, 2, 2, 4, 4, 0.2, Level::low));
  b.add(det(0, 3, 3, 4, 4, 0.3, Level::high));

  DetectionSet merged = merge_levels({a, b});
  EXPECT_EQ(merged.num_frames(), 3);
  ASSERT_EQ(merged.frame(0).size(), 2u);
  EXPECT_EQ(merged.frame(0)[0].level, Level::low);
  EXPECT_EQ(merged.frame(0)[1].level, Level::high);
  EXPECT_EQ(merged.frame(1).size(), 0u);
  EXPECT_EQ(merged.frame(2).size(), 1u);
}

TEST(BlobDetect, FindsComponentCentroidsAndConfidence) {
  ImageU8 dev(32, 32);
  // 2x2 blob at (5..6, 5..6) with value 200, centroid (5.5, 5.5).
  for (int y = 5; y <= 6; ++y)
    for (int x = 5; x <= 6; ++x) dev.at(x, y) = 200;
  // Single pixel at (20, 10), value 100.
  dev.at(20, 10) = 100;

  BlobParams p;
  p.threshold = 60;
  p.min_area = 1;
  p.max_area = 400;
  p.box_size = 30.0;
  DetectionSet set = blob_detect({stack_with_deviation(std::move(dev))}, p);

  ASSERT_EQ(set.total(), 2u);
  const auto& dets = set.frame(0);
  EXPECT_DOUBLE_EQ(dets[0].box.cx, 5.5);
  EXPECT_DOUBLE_EQ(dets[0].box.cy, 5.5);
  EXPECT_DOUBLE_EQ(dets[0].box.w, 30.0);
  EXPECT_DOUBLE_EQ(dets[0].confidence, 200.0 / 255.0);
  EXPECT_DOUBLE_EQ(dets[1].box.cx, 20.0);
  EXPECT_DOUBLE_EQ(dets[1].box.cy, 10.0);
  EXPECT_DOUBLE_EQ(dets[1].confidence, 100.0 / 255.0);
}

TEST(BlobDetect, ThresholdIsStrict) {
  ImageU8 dev(8, 8);
  dev.at(3, 3) = 60;  // equal to threshold: background
  dev.at(5, 5) = 61;
  BlobParams p;
  p.threshold = 60;
  p.min_area = 1;
  DetectionSet set = blob_detect({stack_with_deviation(std::move(dev))}, p);
  ASSERT_EQ(set.total(), 1u);
  EXPECT_DOUBLE_EQ(set.frame(0)[0].box.cx, 5.0);
}

TEST(BlobDetect, AreaGatesAreInclusive) {
  ImageU8 dev(32, 8);
  // Horizontal runs of lengths 2, 3, 4 on separate rows, separated in x.
  for (int x = 1; x <= 2; ++x) dev.at(x, 1) = 255;
  for (int x = 5; x <= 7; ++x) dev.at(x, 3) = 255;
  for (int x = 10; x <= 13; ++x) dev.at(x, 5) = 255;

  BlobParams p;
  p.threshold = 60;
  p.min_area = 2;
  p.max_area = 3;
  DetectionSet set = blob_detect({stack_with_deviation(std::move(dev))}, p);
  ASSERT_EQ(set.total(), 2u);  // the 4-pixel run is rejected
  EXPECT_DOUBLE_EQ(set.frame(0)[0].box.cx, 1.5);
  EXPECT_DOUBLE_EQ(set.frame(0)[1].box.cx, 6.0);
}

TEST(BlobDetect, DiagonalPixelsJoinOneComponent) {
  ImageU8 dev(8, 8);
  dev.at(2, 2) = 255;
  dev.at(3, 3) = 255;
  BlobParams p;
  p.threshold = 60;
  p.min_area = 1;
  DetectionSet set = blob_detect({stack_with_deviation(std::move(dev))}, p);
  ASSERT_EQ(set.total(), 1u);
  EXPECT_DOUBLE_EQ(set.frame(0)[0].box.cx, 2.5);
  EXPECT_DOUBLE_EQ(set.frame(0)[0].box.cy, 2.5);
}

TEST(BlobDetect, BadParamsAreConfigErrors) {
  std::vector<FeatureStack> one;
  one.push_back(stack_with_deviation(ImageU8(4, 4)));
  BlobParams p;
  EXPECT_EQ(code_of([&] { blob_detect({}, p); }), ErrorCode::config);
  p.min_area = 10;
  p.max_area = 5;
  EXPECT_EQ(code_of([&] { blob_detect(one, p); }), ErrorCode::config);
  p = BlobParams{};
  p.min_area = 0;
  EXPECT_EQ(code_of([&] { blob_detect(one, p); }), ErrorCode::config);
  p = BlobParams{};
  p.box_size = 0.0;
  EXPECT_EQ(code_of([&] { blob_detect(one, p); }), ErrorCode::config);
  p = BlobParams{};
  p.threshold = 256;
  EXPECT_EQ(code_of([&] { blob_detect(one, p); }), ErrorCode::config);
}
