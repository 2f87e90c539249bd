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

#ifndef VQTIF_VIDEO_IO_H_
#define VQTIF_VIDEO_IO_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vqtif {

// Smallest accepted luma dimension: one complete 32x32 texture block per axis
// after partial blocks are dropped, with margin for the SSIM window.
inline constexpr int kMinDimension = 64;

enum class PixelFormat { kYuv420_8bit };

const char* PixelFormatName(PixelFormat format);
// Accepts "yuv420p" (and "i420"); throws ErrorCode::kUnsupported otherwise.
PixelFormat ParsePixelFormat(std::string_view name);

struct Rational {
  int64_t num = 30;
  int64_t den = 1;

  double value() const { return static_cast<double>(num) / den; }
  bool operator==(const Rational&) const = default;
};

struct StreamInfo {
  int width = 0;
  int height = 0;
  Rational frame_rate;
  PixelFormat pix_fmt = PixelFormat::kYuv420_8bit;
  std::optional<int64_t> frame_count;

  std::size_t luma_bytes() const {
    return static_cast<std::size_t>(width) * height;
  }
  // Luma plus both 4:2:0 chroma planes.
  std::size_t frame_bytes() const;
};

// Throws ErrorCode::kInvalidArgument unless the geometry invariants hold.
void ValidateStreamInfo(const StreamInfo& info);

// One decoded luma plane. Immutable once built; safe to share across threads.
class Frame {
 public:
  Frame() = default;
  Frame(int width, int height, std::vector<uint8_t> luma, int64_t index);

  int width() const { return width_; }
  int height() const { return height_; }
  int64_t index() const { return index_; }
  std::span<const uint8_t> luma() const { return luma_; }
  std::span<const uint8_t> row(int y) const {
    return std::span<const uint8_t>(luma_).subspan(
        static_cast<std::size_t>(y) * width_, width_);
  }
  uint8_t at(int x, int y) const {
    return luma_[static_cast<std::size_t>(y) * width_ + x];
  }

  // Same samples under a different ordinal.
  Frame WithIndex(int64_t index) const;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<uint8_t> luma_;
  int64_t index_ = 0;
};

// Parses the Y4M signature line from `in`, leaving the stream at the first
// FRAME marker. Interlacing, aspect and extension tokens are ignored.
StreamInfo ParseY4mHeader(std::istream& in);
StreamInfo ParseY4mHeader(std::string_view header_line);

// Sequential reader of luma frames from one stream.
class FrameSource {
 public:
  virtual ~FrameSource() = default;

  virtual const StreamInfo& info() const = 0;
  // Next luma frame, or std::nullopt at end of stream.
  virtual std::optional<Frame> ReadFrame() = 0;
};

class Y4mReader : public FrameSource {
 public:
  explicit Y4mReader(std::unique_ptr<std::istream> in);
  static std::unique_ptr<Y4mReader> Open(const std::filesystem::path& path);

  const StreamInfo& info() const override { return info_; }
  std::optional<Frame> ReadFrame() override;

  void set_frame_count(int64_t count) { info_.frame_count = count; }

 private:
  std::unique_ptr<std::istream> in_;
  StreamInfo info_;
  int64_t next_index_ = 0;
  std::vector<uint8_t> chroma_scratch_;
};

// Headerless planar 4:2:0 file; geometry has to come from the caller.
class RawYuvReader : public FrameSource {
 public:
  RawYuvReader(std::unique_ptr<std::istream> in, StreamInfo info);
  static std::unique_ptr<RawYuvReader> Open(const std::filesystem::path& path,
                                            StreamInfo info);

  const StreamInfo& info() const override { return info_; }
  std::optional<Frame> ReadFrame() override;

 private:
  std::unique_ptr<std::istream> in_;
  StreamInfo info_;
  int64_t next_index_ = 0;
  std::vector<uint8_t> chroma_scratch_;
};

// Geometry for raw input. Only consulted for files that are not Y4M.
struct RawGeometry {
  std::optional<int> width;
  std::optional<int> height;
  PixelFormat pix_fmt = PixelFormat::kYuv420_8bit;
  Rational frame_rate;
};

bool IsY4mPath(const std::filesystem::path& path);

// Opens `path` as Y4M (by extension) or raw YUV. The returned source's info
// carries frame_count, determined by scanning the file without decoding.
std::unique_ptr<FrameSource> OpenVideo(const std::filesystem::path& path,
                                       const RawGeometry& raw = {});

// Number of complete frames in a file; throws on a truncated final frame or
// a malformed marker.
int64_t CountFrames(const std::filesystem::path& path, const RawGeometry& raw = {});

// Succeeds iff both streams have the same geometry, pixel format and frame
// count. Frame counts must be populated.
void ValidatePair(const StreamInfo& ref, const StreamInfo& dist);

struct Chunk {
  std::vector<std::reference_wrapper<const Frame>> frames;
  int64_t chunk_index = 0;
};

// Source positions making up each chunk: consecutive non-overlapping runs of
// chunk_size; a trailing remainder is dropped; a total shorter than
// chunk_size yields one chunk padded by repeating the last position.
std::vector<std::vector<std::size_t>> ChunkPlan(std::size_t total,
                                                std::size_t chunk_size);

std::vector<Chunk> ChunkSegment(std::span<const Frame> frames,
                                std::size_t chunk_size);

// Test and tooling helper: writes frames as a Y4M 4:2:0 stream with mid-grey
// chroma.
void WriteY4m(std::ostream& out, std::span<const Frame> frames,
              Rational frame_rate = {});
void WriteY4mFile(const std::filesystem::path& path, std::span<const Frame> frames,
                  Rational frame_rate = {});
void WriteRawYuvFile(const std::filesystem::path& path,
                     std::span<const Frame> frames);

}  // namespace vqtif

#endif  // VQTIF_VIDEO_IO_H_
