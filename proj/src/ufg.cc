// Copyright 2026 The UFTrack Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "uft/ufg.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "uft/error.h"

namespace uft {

namespace {

constexpr char kMagic[4] = {'U', 'F', 'G', '1'};
constexpr size_t kHeaderBytes = 16;

void PutU32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

uint32_t GetU32(const std::string& in, size_t offset) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<uint32_t>(static_cast<unsigned char>(in[offset + i])) << (8 * i);
  }
  return v;
}

}  // namespace

ScalarGrid UfgImage::Channel(uint32_t channel) const {
  if (channel >= channels) {
    ThrowData("UFG1 channel " + std::to_string(channel) + " out of range");
  }
  std::vector<double> out(static_cast<size_t>(width) * height);
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = values[i * channels + channel];
  }
  return ScalarGrid(static_cast<int>(width), static_cast<int>(height),
                    std::move(out));
}

UfgImage PackChannels(const std::vector<const ScalarGrid*>& channels) {
  if (channels.empty()) ThrowInvalid("no channels to pack");
  const ScalarGrid& first = *channels.front();
  UfgImage image;
  image.width = static_cast<uint32_t>(first.width());
  image.height = static_cast<uint32_t>(first.height());
  image.channels = static_cast<uint32_t>(channels.size());
  image.values.resize(first.size() * channels.size());
  for (size_t c = 0; c < channels.size(); ++c) {
    if (!channels[c]->SameShape(first)) ThrowInvalid("channel shape mismatch");
    auto src = channels[c]->values();
    for (size_t i = 0; i < src.size(); ++i) {
      image.values[i * channels.size() + c] = static_cast<float>(src[i]);
    }
  }
  return image;
}

std::string EncodeUfg(const UfgImage& image) {
  const size_t count =
      static_cast<size_t>(image.width) * image.height * image.channels;
  if (image.values.size() != count) ThrowInvalid("UFG1 value count mismatch");
  std::string out(kMagic, 4);
  out.reserve(kHeaderBytes + 4 * count);
  PutU32(out, image.width);
  PutU32(out, image.height);
  PutU32(out, image.channels);
  for (float f : image.values) PutU32(out, std::bit_cast<uint32_t>(f));
  return out;
}

UfgImage DecodeUfg(const std::string& bytes) {
  if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    ThrowData("not a UFG1 file");
  }
  UfgImage image;
  image.width = GetU32(bytes, 4);
  image.height = GetU32(bytes, 8);
  image.channels = GetU32(bytes, 12);
  if (image.width == 0 || image.height == 0 || image.channels == 0) {
    ThrowData("UFG1 header has a zero dimension");
  }
  const uint64_t count =
      uint64_t{image.width} * image.height * image.channels;
  if (bytes.size() != kHeaderBytes + 4 * count) {
    ThrowData("UFG1 payload size does not match header");
  }
  image.values.resize(count);
  for (size_t i = 0; i < count; ++i) {
    image.values[i] = std::bit_cast<float>(GetU32(bytes, kHeaderBytes + 4 * i));
  }
  return image;
}

void WriteUfg(const std::filesystem::path& path, const UfgImage& image) {
  WriteFileAtomic(path, EncodeUfg(image));
}

UfgImage ReadUfg(const std::filesystem::path& path) {
  return DecodeUfg(ReadFile(path));
}

void WriteFileAtomic(const std::filesystem::path& path,
                     const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) ThrowData("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) ThrowData("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) ThrowData("cannot rename " + tmp.string() + ": " + ec.message());
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ThrowData("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace uft
