#pragma once

#include <stdexcept>
#include <string>

namespace blastvox {

/// Invalid scenario, mesh, or argument supplied by the user.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A field became NaN or infinite during integration.
class NumericAbort : public std::runtime_error {
 public:
  NumericAbort(const std::string& what, std::size_t voxel, std::uint64_t step)
      : std::runtime_error(what), voxel_(voxel), step_(step) {}
  std::size_t voxel() const { return voxel_; }
  std::uint64_t step() const { return step_; }

 private:
  std::size_t voxel_;
  std::uint64_t step_;
};

/// File could not be read, written, or parsed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace blastvox
