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

#ifndef UFT_ERROR_H_
#define UFT_ERROR_H_

#include <stdexcept>
#include <string>

namespace uft {

enum class ErrorKind {
  kInvalidArgument,  // violated precondition on an in-memory value
  kData,             // malformed or inconsistent on-disk data
  kUsage,            // bad command line or configuration
};

// Single exception type for the library. The kind decides the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void ThrowInvalid(const std::string& message) {
  throw Error(ErrorKind::kInvalidArgument, message);
}

[[noreturn]] inline void ThrowData(const std::string& message) {
  throw Error(ErrorKind::kData, message);
}

[[noreturn]] inline void ThrowUsage(const std::string& message) {
  throw Error(ErrorKind::kUsage, message);
}

}  // namespace uft

#endif  // UFT_ERROR_H_
