#pragma once

#include <stdexcept>
#include <string>

namespace qksvm {

// Bad argument values, shape mismatches, malformed inputs.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Resource limits (qubit cap, not enough samples to build the requested subsets).
class CapacityError : public std::length_error {
 public:
  explicit CapacityError(const std::string& what) : std::length_error(what) {}
};

// CSV ingestion failures; message carries the offending row number.
class LoadError : public std::runtime_error {
 public:
  explicit LoadError(const std::string& what) : std::runtime_error(what) {}
};

// Zero-variance inputs where a scale or spectrum is required.
class DegenerateScaleError : public std::runtime_error {
 public:
  explicit DegenerateScaleError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem failures when emitting reports.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qksvm
