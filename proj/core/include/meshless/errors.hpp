#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace meshless {

/// Invalid argument passed to a public operation (out-of-range h, n > N, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A local interpolation matrix is singular to working precision.
class ConditioningError : public std::runtime_error {
 public:
  static constexpr std::size_t kNoOffset = static_cast<std::size_t>(-1);

  ConditioningError(const std::string& what, std::size_t node,
                    std::size_t offset = kNoOffset)
      : std::runtime_error(what), node_(node), offset_(offset) {}

  std::size_t node() const noexcept { return node_; }
  /// Virtual stencil offset index, or kNoOffset when not applicable.
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t node_;
  std::size_t offset_;
};

/// Missing or duplicated operator rows when building the global system.
class AssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Breakdown of the iterative solver or failure of the direct oracle.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace meshless
