#pragma once

#include <stdexcept>
#include <string>

namespace acoint {

/// Failure categories surfaced by the estimation pipeline.
enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  SampleTooSmall,
  RankDeficient,
  NotPositiveDefinite,
  ZeroKernelWeights,
  Parse,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace acoint
