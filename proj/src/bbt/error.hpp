#pragma once

#include <stdexcept>
#include <string>

namespace bbt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition violated by the caller (bad sizes, ranges, mismatched dimensions).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Sequence or config could not be read from disk.
class IngestionError : public Error {
 public:
  using Error::Error;
};

/// A single frame could not be processed; trackers keep their previous state.
class FrameError : public Error {
 public:
  using Error::Error;
};

}  // namespace bbt
