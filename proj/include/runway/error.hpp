// Copyright 2026 The Runway Toolkit Authors. All Rights Reserved.
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

#pragma once

#include <stdexcept>
#include <string>

namespace runway {

// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-contract input. The CLI maps these to exit status 1.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A geometric construction has no well-defined answer (parallel lines,
// collinear correspondences, empty masks). SPM treats these as a signal to
// fall back to polygon simplification.
class GeometryError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// Filesystem failures. The CLI maps these to exit status 2.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace runway
