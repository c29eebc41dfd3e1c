// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace fast3d {

/// Anything wrong with on-disk inputs: missing files, malformed payloads,
/// cross-file inconsistencies. The kind distinguishes failure classes that
/// callers (and tests) care about; the message names the offending file.
class DatasetError : public std::runtime_error {
 public:
  enum class Kind {
    MissingFile,
    Parse,           // unreadable or malformed payload
    LengthMismatch,  // index-aligned arrays disagree in length
    FrameOrder,      // frame indices not strictly increasing, or bad timestamps
    Validation,      // value-level violations (bad pose, bad box, bad range)
  };

  DatasetError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace fast3d
