// Copyright 2026 The vqtif Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vqtif/video_io.h"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "test_support.h"
#include "vqtif/error.h"

namespace vqtif {
namespace {

using testing::ConstantFrame;
using testing::NoiseFrame;
using testing::TempDir;

template <typename Fn>
ErrorCode CodeOf(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected vqtif::Error";
  return ErrorCode::kIo;
}

TEST(Y4mHeaderTest, ParsesUhdHeader) {
  const StreamInfo info = ParseY4mHeader("YUV4MPEG2 W3840 H2160 F30:1 Ip A1:1 C420");
  EXPECT_EQ(info.width, 3840);
  EXPECT_EQ(info.height, 2160);
  EXPECT_EQ(info.frame_rate, (Rational{30, 1}));
  EXPECT_EQ(info.pix_fmt, PixelFormat::kYuv420_8bit);
  EXPECT_FALSE(info.frame_count.has_value());
}

TEST(Y4mHeaderTest, MissingWidth) {
  EXPECT_EQ(CodeOf([] { ParseY4mHeader("YUV4MPEG2 H2160 F30:1"); }), ErrorCode::kParse);
  try {
    ParseY4mHeader("YUV4MPEG2 H2160 F30:1");
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("width"), std::string::npos);
  }
}

TEST(Y4mHeaderTest, RejectsNon420Chroma) {
  EXPECT_EQ(CodeOf([] { ParseY4mHeader("YUV4MPEG2 W1920 H1080 F25:1 C444"); }),
            ErrorCode::kUnsupported);
  EXPECT_EQ(CodeOf([] { ParseY4mHeader("YUV4MPEG2 W1920 H1080 F25:1 C420p10"); }),
            ErrorCode::kUnsupported);
  EXPECT_EQ(CodeOf([] { ParseY4mHeader("YUV4MPEG2 W1920 H1080 F25:1 Cmono"); }),
            ErrorCode::kUnsupported);
}

TEST(Y4mHeaderTest, AcceptsAll420Variants) {
  for (const char* tag : {"C420", "C420jpeg", "C420mpeg2", "C420paldv", "C420paln"}) {
    const std::string line = std::string("YUV4MPEG2 W64 H64 F24000:1001 It ") + tag;
    const StreamInfo info = ParseY4mHeader(line);
    EXPECT_EQ(info.frame_rate, (Rational{24000, 1001})) << tag;
  }
  // Chroma tag absent defaults to 4:2:0.
  EXPECT_NO_THROW(ParseY4mHeader("YUV4MPEG2 W64 H64 F25:1"));
}

TEST(Y4mHeaderTest, RejectsMalformedTokens) {
  EXPECT_EQ(CodeOf([] { ParseY4mHeader("YUV4MPEG W64 H64 F25:1"); }), ErrorCode::kParse);
  EXPECT_EQ(CodeOf([] { ParseY4mHeader("YUV4MPEG2 W64 H64 F25"); }), ErrorCode::kParse);
  EXPECT_EQ(CodeOf([] { ParseY4mHeader("YUV4MPEG2 W64 H64 F25:x"); }), ErrorCode::kParse);
  EXPECT_EQ(CodeOf([] { ParseY4mHeader("YUV4MPEG2 W64 H64 F0:1"); }), ErrorCode::kParse);
  EXPECT_EQ(CodeOf([] { ParseY4mHeader("YUV4MPEG2 W6x4 H64 F25:1"); }), ErrorCode::kParse);
  EXPECT_EQ(CodeOf([] { ParseY4mHeader("YUV4MPEG2 W64 H64"); }), ErrorCode::kParse);
  EXPECT_EQ(CodeOf([] { ParseY4mHeader(""); }), ErrorCode::kParse);
}

TEST(Y4mHeaderTest, RejectsFramesBelowOneBlockPerAxis) {
  EXPECT_EQ(CodeOf([] { ParseY4mHeader("YUV4MPEG2 W32 H64 F25:1"); }),
            ErrorCode::kInvalidArgument);
}

TEST(Y4mReaderTest, ReadsConstantFrameThenEnd) {
  std::ostringstream out;
  const Frame source = ConstantFrame(64, 64, 128);
  WriteY4m(out, std::span<const Frame>(&source, 1));
  Y4mReader reader(std::make_unique<std::istringstream>(out.str()));
  auto frame = reader.ReadFrame();
  ASSERT_TRUE(frame.has_value());
  EXPECT_EQ(frame->index(), 0);
  EXPECT_EQ(frame->width(), 64);
  for (uint8_t v : frame->luma()) ASSERT_EQ(v, 128);
  EXPECT_FALSE(reader.ReadFrame().has_value());
}

TEST(Y4mReaderTest, TruncatedPayload) {
  std::ostringstream out;
  const Frame source = ConstantFrame(64, 64, 10);
  WriteY4m(out, std::span<const Frame>(&source, 1));
  std::string bytes = out.str();
  bytes.resize(bytes.size() - 5);  // shorter than width*height*1.5
  Y4mReader reader(std::make_unique<std::istringstream>(bytes));
  EXPECT_EQ(CodeOf([&] { reader.ReadFrame(); }), ErrorCode::kTruncated);
}

TEST(Y4mReaderTest, MalformedFrameMarker) {
  std::string bytes = "YUV4MPEG2 W64 H64 F25:1\nFRAMX\n";
  bytes.append(64 * 64 * 3 / 2, '\0');
  Y4mReader reader(std::make_unique<std::istringstream>(bytes));
  EXPECT_EQ(CodeOf([&] { reader.ReadFrame(); }), ErrorCode::kParse);
}

TEST(Y4mReaderTest, FrameMarkerParametersAreSkipped) {
  std::string bytes = "YUV4MPEG2 W64 H64 F25:1\nFRAME Ixyz\n";
  bytes.append(64 * 64, '\x07');
  bytes.append(2 * 32 * 32, '\x80');
  Y4mReader reader(std::make_unique<std::istringstream>(bytes));
  auto frame = reader.ReadFrame();
  ASSERT_TRUE(frame);
  EXPECT_EQ(frame->at(63, 63), 7);
}

// Round trip through the emitter is bit-exact, for odd-sized chroma too.
TEST(Y4mReaderTest, RoundTripIsBitExact) {
  TempDir dir;
  for (auto [w, h] : {std::pair{64, 64}, std::pair{97, 71}}) {
    std::vector<Frame> frames;
    for (int i = 0; i < 4; ++i) frames.push_back(NoiseFrame(w, h, 100 + i, i));
    const auto path = dir / "noise.y4m";
    WriteY4mFile(path, frames, {25, 1});
    auto source = OpenVideo(path);
    EXPECT_EQ(source->info().frame_count, 4);
    EXPECT_EQ(source->info().frame_rate, (Rational{25, 1}));
    for (int i = 0; i < 4; ++i) {
      auto frame = source->ReadFrame();
      ASSERT_TRUE(frame);
      EXPECT_EQ(frame->index(), i);
      EXPECT_TRUE(std::equal(frame->luma().begin(), frame->luma().end(),
                             frames[i].luma().begin(), frames[i].luma().end()));
    }
    EXPECT_FALSE(source->ReadFrame());
  }
}

TEST(RawYuvTest, RequiresGeometry) {
  TempDir dir;
  const std::vector<Frame> frames = {ConstantFrame(64, 64, 1)};
  WriteRawYuvFile(dir / "a.yuv", frames);
  EXPECT_EQ(CodeOf([&] { OpenVideo(dir / "a.yuv"); }), ErrorCode::kInvalidArgument);
  RawGeometry geometry;
  geometry.width = 64;
  geometry.height = 64;
  auto source = OpenVideo(dir / "a.yuv", geometry);
  EXPECT_EQ(source->info().frame_count, 1);
  auto frame = source->ReadFrame();
  ASSERT_TRUE(frame);
  EXPECT_EQ(frame->at(5, 5), 1);
  EXPECT_FALSE(source->ReadFrame());
}

TEST(RawYuvTest, PartialFrameIsTruncation) {
  TempDir dir;
  const std::vector<Frame> frames = {ConstantFrame(64, 64, 1)};
  WriteRawYuvFile(dir / "a.yuv", frames);
  std::filesystem::resize_file(dir / "a.yuv", 64 * 64 * 3 / 2 - 1);
  RawGeometry geometry;
  geometry.width = 64;
  geometry.height = 64;
  EXPECT_EQ(CodeOf([&] { CountFrames(dir / "a.yuv", geometry); }), ErrorCode::kTruncated);
}

TEST(CountFramesTest, TruncatedY4mIsReported) {
  TempDir dir;
  const std::vector<Frame> frames = {ConstantFrame(64, 64, 1), ConstantFrame(64, 64, 2)};
  WriteY4mFile(dir / "a.y4m", frames);
  const auto size = std::filesystem::file_size(dir / "a.y4m");
  std::filesystem::resize_file(dir / "a.y4m", size - 100);
  EXPECT_EQ(CodeOf([&] { CountFrames(dir / "a.y4m"); }), ErrorCode::kTruncated);
  EXPECT_EQ(CodeOf([&] { CountFrames(dir / "missing.y4m"); }), ErrorCode::kIo);
}

StreamInfo Info(int w, int h, int64_t frames) {
  StreamInfo info;
  info.width = w;
  info.height = h;
  info.frame_count = frames;
  return info;
}

TEST(ValidatePairTest, Cases) {
  EXPECT_NO_THROW(ValidatePair(Info(3840, 2160, 120), Info(3840, 2160, 120)));
  EXPECT_EQ(CodeOf([] { ValidatePair(Info(3840, 2160, 120), Info(1920, 1080, 120)); }),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(CodeOf([] { ValidatePair(Info(3840, 2160, 120), Info(3840, 2160, 119)); }),
            ErrorCode::kFrameCountMismatch);
}

TEST(ChunkSegmentTest, PaperSegmentation) {
  std::vector<Frame> frames;
  for (int i = 0; i < 120; ++i) frames.push_back(ConstantFrame(64, 64, 0, i));
  const auto chunks = ChunkSegment(frames, 8);
  ASSERT_EQ(chunks.size(), 15u);
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    EXPECT_EQ(chunks[c].chunk_index, static_cast<int64_t>(c));
    ASSERT_EQ(chunks[c].frames.size(), 8u);
    for (std::size_t t = 0; t < 8; ++t) {
      EXPECT_EQ(chunks[c].frames[t].get().index(), static_cast<int64_t>(c * 8 + t));
    }
  }
}

TEST(ChunkSegmentTest, RemainderDropped) {
  std::vector<Frame> frames;
  for (int i = 0; i < 12; ++i) frames.push_back(ConstantFrame(64, 64, 0, i));
  const auto chunks = ChunkSegment(frames, 8);
  ASSERT_EQ(chunks.size(), 1u);
  EXPECT_EQ(chunks[0].frames.back().get().index(), 7);
}

TEST(ChunkSegmentTest, ShortInputPadsWithLastFrame) {
  std::vector<Frame> frames;
  for (int i = 0; i < 5; ++i) frames.push_back(ConstantFrame(64, 64, 0, i));
  const auto chunks = ChunkSegment(frames, 8);
  ASSERT_EQ(chunks.size(), 1u);
  const std::vector<int64_t> expected = {0, 1, 2, 3, 4, 4, 4, 4};
  for (std::size_t t = 0; t < 8; ++t) {
    EXPECT_EQ(chunks[0].frames[t].get().index(), expected[t]);
  }
}

TEST(ChunkSegmentTest, EmptyAndZeroChunkSize) {
  EXPECT_EQ(CodeOf([] { ChunkPlan(0, 8); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { ChunkPlan(10, 0); }), ErrorCode::kInvalidArgument);
}

// Chunk count and per-chunk ordering over a sweep of sizes.
TEST(ChunkSegmentTest, PlanProperties) {
  for (std::size_t n = 1; n <= 40; ++n) {
    for (std::size_t fc = 1; fc <= 10; ++fc) {
      const auto plan = ChunkPlan(n, fc);
      ASSERT_EQ(plan.size(), n >= fc ? n / fc : 1u) << n << " " << fc;
      std::size_t prev = 0;
      bool first = true;
      for (const auto& chunk : plan) {
        ASSERT_EQ(chunk.size(), fc);
        for (std::size_t pos : chunk) {
          ASSERT_LT(pos, n);
          if (!first) {
            if (n >= fc) {
              ASSERT_GT(pos, prev);
            } else {
              ASSERT_GE(pos, prev);
            }
          }
          prev = pos;
          first = false;
        }
      }
    }
  }
}

}  // namespace
}  // namespace vqtif
