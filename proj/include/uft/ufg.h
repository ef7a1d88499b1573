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

// "UFG1" grid container: magic, then little-endian u32 width, height,
// channels, then width*height*channels little-endian float32 values,
// row-major with channels interleaved per pixel.

#ifndef UFT_UFG_H_
#define UFT_UFG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "uft/grid.h"

namespace uft {

struct UfgImage {
  uint32_t width = 0;
  uint32_t height = 0;
  uint32_t channels = 0;
  std::vector<float> values;  // size width * height * channels

  // Extracts one channel as a grid.
  ScalarGrid Channel(uint32_t channel) const;
};

// Interleaves same-shaped grids into one image.
UfgImage PackChannels(const std::vector<const ScalarGrid*>& channels);

std::string EncodeUfg(const UfgImage& image);
// Throws kData on a bad magic, truncated payload, or trailing bytes.
UfgImage DecodeUfg(const std::string& bytes);

void WriteUfg(const std::filesystem::path& path, const UfgImage& image);
UfgImage ReadUfg(const std::filesystem::path& path);

// Whole-file write through a temporary sibling and rename.
void WriteFileAtomic(const std::filesystem::path& path,
                     const std::string& contents);
std::string ReadFile(const std::filesystem::path& path);

}  // namespace uft

#endif  // UFT_UFG_H_
