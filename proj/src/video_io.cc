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

#include <algorithm>
#include <charconv>
#include <sstream>

#include "vqtif/error.h"

namespace vqtif {
namespace {

constexpr std::string_view kY4mSignature = "YUV4MPEG2";
constexpr std::string_view kFrameMarker = "FRAME";
constexpr std::size_t kMaxHeaderLength = 4096;

std::size_t ChromaPlaneBytes(int width, int height) {
  return static_cast<std::size_t>((width + 1) / 2) * ((height + 1) / 2);
}

int64_t ParseInteger(std::string_view text, std::string_view what) {
  int64_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw Error(ErrorCode::kParse,
                "malformed " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

Rational ParseRational(std::string_view text, std::string_view what) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::kParse,
                "malformed " + std::string(what) + " '" + std::string(text) + "'");
  }
  Rational r{ParseInteger(text.substr(0, colon), what),
             ParseInteger(text.substr(colon + 1), what)};
  return r;
}

bool IsSupportedChroma(std::string_view tag) {
  return tag == "420" || tag == "420jpeg" || tag == "420mpeg2" ||
         tag == "420paldv" || tag == "420paln";
}

// Reads up to and excluding '\n'. Returns false if the stream was already at
// EOF before any byte was read.
bool ReadLine(std::istream& in, std::string& line, std::size_t limit,
              std::string_view what) {
  line.clear();
  for (;;) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) {
      if (line.empty()) return false;
      throw Error(ErrorCode::kTruncated,
                  "unterminated " + std::string(what) + " line");
    }
    if (c == '\n') return true;
    line.push_back(static_cast<char>(c));
    if (line.size() > limit) {
      throw Error(ErrorCode::kParse, std::string(what) + " line too long");
    }
  }
}

void ReadExact(std::istream& in, uint8_t* dst, std::size_t n, int64_t index) {
  in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    throw Error(ErrorCode::kTruncated,
                "truncated payload in frame " + std::to_string(index));
  }
}

// Reads a FRAME marker line. Returns false on clean end of stream.
bool ReadFrameMarker(std::istream& in, int64_t index) {
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string line;
  if (!ReadLine(in, line, kMaxHeaderLength, "FRAME")) return false;
  const std::string_view view(line);
  if (!view.starts_with(kFrameMarker) ||
      (view.size() > kFrameMarker.size() && view[kFrameMarker.size()] != ' ')) {
    throw Error(ErrorCode::kParse,
                "malformed FRAME marker before frame " + std::to_string(index));
  }
  return true;
}

std::unique_ptr<std::istream> OpenBinary(const std::filesystem::path& path) {
  auto in = std::make_unique<std::ifstream>(path, std::ios::binary);
  if (!*in) {
    throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  }
  return in;
}

StreamInfo RawStreamInfo(const std::filesystem::path& path, const RawGeometry& raw) {
  if (!raw.width || !raw.height) {
    throw Error(ErrorCode::kInvalidArgument,
                "raw input '" + path.string() + "' needs --width and --height");
  }
  StreamInfo info;
  info.width = *raw.width;
  info.height = *raw.height;
  info.pix_fmt = raw.pix_fmt;
  info.frame_rate = raw.frame_rate;
  ValidateStreamInfo(info);
  return info;
}

}  // namespace

const char* PixelFormatName(PixelFormat format) {
  switch (format) {
    case PixelFormat::kYuv420_8bit: return "yuv420p";
  }
  return "unknown";
}

PixelFormat ParsePixelFormat(std::string_view name) {
  if (name == "yuv420p" || name == "i420" || name == "420") {
    return PixelFormat::kYuv420_8bit;
  }
  throw Error(ErrorCode::kUnsupported,
              "unsupported pixel format '" + std::string(name) + "'");
}

std::size_t StreamInfo::frame_bytes() const {
  return luma_bytes() + 2 * ChromaPlaneBytes(width, height);
}

void ValidateStreamInfo(const StreamInfo& info) {
  if (info.width < kMinDimension || info.height < kMinDimension) {
    throw Error(ErrorCode::kInvalidArgument,
                "frame size " + std::to_string(info.width) + "x" +
                    std::to_string(info.height) + " is below the " +
                    std::to_string(kMinDimension) + "x" +
                    std::to_string(kMinDimension) + " minimum");
  }
  if (info.frame_rate.num <= 0 || info.frame_rate.den <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "frame rate must be positive");
  }
}

Frame::Frame(int width, int height, std::vector<uint8_t> luma, int64_t index)
    : width_(width), height_(height), luma_(std::move(luma)), index_(index) {
  if (width <= 0 || height <= 0 ||
      luma_.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::kInvalidArgument,
                "luma plane size does not match " + std::to_string(width) + "x" +
                    std::to_string(height));
  }
}

Frame Frame::WithIndex(int64_t index) const {
  Frame copy = *this;
  copy.index_ = index;
  return copy;
}

StreamInfo ParseY4mHeader(std::istream& in) {
  std::string line;
  if (!ReadLine(in, line, kMaxHeaderLength, "Y4M header")) {
    throw Error(ErrorCode::kParse, "missing YUV4MPEG2 signature");
  }
  return ParseY4mHeader(line);
}

StreamInfo ParseY4mHeader(std::string_view header_line) {
  if (!header_line.empty() && header_line.back() == '\n') {
    header_line.remove_suffix(1);
  }
  std::vector<std::string_view> tokens;
  for (std::size_t pos = 0; pos < header_line.size();) {
    const auto next = header_line.find(' ', pos);
    const auto end = next == std::string_view::npos ? header_line.size() : next;
    if (end > pos) tokens.push_back(header_line.substr(pos, end - pos));
    pos = end + 1;
  }
  if (tokens.empty() || tokens[0] != kY4mSignature) {
    throw Error(ErrorCode::kParse, "missing YUV4MPEG2 signature");
  }

  StreamInfo info;
  bool have_width = false, have_height = false, have_rate = false;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const std::string_view value = tokens[i].substr(1);
    switch (tokens[i][0]) {
      case 'W':
        info.width = static_cast<int>(ParseInteger(value, "width"));
        have_width = true;
        break;
      case 'H':
        info.height = static_cast<int>(ParseInteger(value, "height"));
        have_height = true;
        break;
      case 'F':
        info.frame_rate = ParseRational(value, "frame rate");
        have_rate = true;
        break;
      case 'A':
        ParseRational(value, "aspect ratio");
        break;
      case 'C':
        if (!IsSupportedChroma(value)) {
          throw Error(ErrorCode::kUnsupported,
                      "unsupported chroma format 'C" + std::string(value) +
                          "' (only 8-bit 4:2:0 is supported)");
        }
        break;
      case 'I':  // interlacing: parsed, ignored
      case 'X':  // extension
        break;
      default:
        throw Error(ErrorCode::kParse,
                    "unknown Y4M header token '" + std::string(tokens[i]) + "'");
    }
  }
  if (!have_width) throw Error(ErrorCode::kParse, "Y4M header missing width (W)");
  if (!have_height) throw Error(ErrorCode::kParse, "Y4M header missing height (H)");
  if (!have_rate) throw Error(ErrorCode::kParse, "Y4M header missing frame rate (F)");
  if (info.frame_rate.num <= 0 || info.frame_rate.den <= 0) {
    throw Error(ErrorCode::kParse, "malformed frame rate");
  }
  ValidateStreamInfo(info);
  return info;
}

Y4mReader::Y4mReader(std::unique_ptr<std::istream> in) : in_(std::move(in)) {
  info_ = ParseY4mHeader(*in_);
}

std::unique_ptr<Y4mReader> Y4mReader::Open(const std::filesystem::path& path) {
  return std::make_unique<Y4mReader>(OpenBinary(path));
}

std::optional<Frame> Y4mReader::ReadFrame() {
  if (!ReadFrameMarker(*in_, next_index_)) return std::nullopt;
  std::vector<uint8_t> luma(info_.luma_bytes());
  ReadExact(*in_, luma.data(), luma.size(), next_index_);
  chroma_scratch_.resize(info_.frame_bytes() - info_.luma_bytes());
  ReadExact(*in_, chroma_scratch_.data(), chroma_scratch_.size(), next_index_);
  return Frame(info_.width, info_.height, std::move(luma), next_index_++);
}

RawYuvReader::RawYuvReader(std::unique_ptr<std::istream> in, StreamInfo info)
    : in_(std::move(in)), info_(info) {
  ValidateStreamInfo(info_);
}

std::unique_ptr<RawYuvReader> RawYuvReader::Open(const std::filesystem::path& path,
                                                 StreamInfo info) {
  return std::make_unique<RawYuvReader>(OpenBinary(path), info);
}

std::optional<Frame> RawYuvReader::ReadFrame() {
  if (in_->peek() == std::char_traits<char>::eof()) return std::nullopt;
  std::vector<uint8_t> luma(info_.luma_bytes());
  ReadExact(*in_, luma.data(), luma.size(), next_index_);
  chroma_scratch_.resize(info_.frame_bytes() - info_.luma_bytes());
  ReadExact(*in_, chroma_scratch_.data(), chroma_scratch_.size(), next_index_);
  return Frame(info_.width, info_.height, std::move(luma), next_index_++);
}

bool IsY4mPath(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".y4m";
}

int64_t CountFrames(const std::filesystem::path& path, const RawGeometry& raw) {
  std::error_code ec;
  const auto file_size = std::filesystem::file_size(path, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");

  if (!IsY4mPath(path)) {
    const StreamInfo info = RawStreamInfo(path, raw);
    if (file_size % info.frame_bytes() != 0) {
      throw Error(ErrorCode::kTruncated,
                  "raw file '" + path.string() +
                      "' is not a whole number of frames");
    }
    return static_cast<int64_t>(file_size / info.frame_bytes());
  }

  auto in = OpenBinary(path);
  const StreamInfo info = ParseY4mHeader(*in);
  int64_t count = 0;
  while (ReadFrameMarker(*in, count)) {
    const auto here = static_cast<uint64_t>(in->tellg());
    if (here + info.frame_bytes() > file_size) {
      throw Error(ErrorCode::kTruncated,
                  "truncated payload in frame " + std::to_string(count));
    }
    in->seekg(static_cast<std::streamoff>(info.frame_bytes()), std::ios::cur);
    ++count;
  }
  return count;
}

std::unique_ptr<FrameSource> OpenVideo(const std::filesystem::path& path,
                                       const RawGeometry& raw) {
  const int64_t count = CountFrames(path, raw);
  if (IsY4mPath(path)) {
    auto reader = Y4mReader::Open(path);
    reader->set_frame_count(count);
    return reader;
  }
  StreamInfo info = RawStreamInfo(path, raw);
  info.frame_count = count;
  return RawYuvReader::Open(path, info);
}

void ValidatePair(const StreamInfo& ref, const StreamInfo& dist) {
  if (ref.width != dist.width || ref.height != dist.height) {
    throw Error(ErrorCode::kDimensionMismatch,
                "dimension mismatch: reference " + std::to_string(ref.width) + "x" +
                    std::to_string(ref.height) + " vs distorted " +
                    std::to_string(dist.width) + "x" + std::to_string(dist.height));
  }
  if (ref.pix_fmt != dist.pix_fmt) {
    throw Error(ErrorCode::kFormatMismatch, "pixel format mismatch");
  }
  if (!ref.frame_count || !dist.frame_count) {
    throw Error(ErrorCode::kInvalidArgument, "frame counts are not known");
  }
  if (*ref.frame_count != *dist.frame_count) {
    throw Error(ErrorCode::kFrameCountMismatch,
                "frame-count mismatch: reference " +
                    std::to_string(*ref.frame_count) + " vs distorted " +
                    std::to_string(*dist.frame_count));
  }
}

std::vector<std::vector<std::size_t>> ChunkPlan(std::size_t total,
                                                std::size_t chunk_size) {
  if (chunk_size == 0) {
    throw Error(ErrorCode::kInvalidArgument, "chunk size must be at least 1");
  }
  if (total == 0) {
    throw Error(ErrorCode::kInvalidArgument, "cannot chunk an empty frame list");
  }
  std::vector<std::vector<std::size_t>> plan;
  if (total < chunk_size) {
    std::vector<std::size_t> chunk(chunk_size, total - 1);
    for (std::size_t i = 0; i < total; ++i) chunk[i] = i;
    plan.push_back(std::move(chunk));
    return plan;
  }
  const std::size_t count = total / chunk_size;
  plan.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    std::vector<std::size_t> chunk(chunk_size);
    for (std::size_t i = 0; i < chunk_size; ++i) chunk[i] = c * chunk_size + i;
    plan.push_back(std::move(chunk));
  }
  return plan;
}

std::vector<Chunk> ChunkSegment(std::span<const Frame> frames,
                                std::size_t chunk_size) {
  const auto plan = ChunkPlan(frames.size(), chunk_size);
  std::vector<Chunk> chunks;
  chunks.reserve(plan.size());
  for (std::size_t c = 0; c < plan.size(); ++c) {
    Chunk chunk;
    chunk.chunk_index = static_cast<int64_t>(c);
    for (std::size_t pos : plan[c]) chunk.frames.emplace_back(frames[pos]);
    chunks.push_back(std::move(chunk));
  }
  return chunks;
}

void WriteY4m(std::ostream& out, std::span<const Frame> frames, Rational frame_rate) {
  if (frames.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no frames to write");
  }
  const int width = frames.front().width();
  const int height = frames.front().height();
  out << kY4mSignature << " W" << width << " H" << height << " F" << frame_rate.num
      << ':' << frame_rate.den << " Ip A1:1 C420jpeg\n";
  const std::vector<char> chroma(2 * ChromaPlaneBytes(width, height), char(128));
  for (const Frame& frame : frames) {
    if (frame.width() != width || frame.height() != height) {
      throw Error(ErrorCode::kDimensionMismatch, "frames differ in size");
    }
    out << kFrameMarker << '\n';
    out.write(reinterpret_cast<const char*>(frame.luma().data()),
              static_cast<std::streamsize>(frame.luma().size()));
    out.write(chroma.data(), static_cast<std::streamsize>(chroma.size()));
  }
}

void WriteY4mFile(const std::filesystem::path& path, std::span<const Frame> frames,
                  Rational frame_rate) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  WriteY4m(out, frames, frame_rate);
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path.string() + "'");
}

void WriteRawYuvFile(const std::filesystem::path& path,
                     std::span<const Frame> frames) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  for (const Frame& frame : frames) {
    out.write(reinterpret_cast<const char*>(frame.luma().data()),
              static_cast<std::streamsize>(frame.luma().size()));
    const std::vector<char> chroma(
        2 * ChromaPlaneBytes(frame.width(), frame.height()), char(128));
    out.write(chroma.data(), static_cast<std::streamsize>(chroma.size()));
  }
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path.string() + "'");
}

}  // namespace vqtif
