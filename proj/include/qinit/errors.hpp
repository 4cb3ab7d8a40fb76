#pragma once

#include <stdexcept>
#include <string>

namespace qinit {

// File access and file-content failures (open, write, parse, version,
// invariant-on-load). Kept distinct from logic errors so the CLI can map
// them to a dedicated exit status.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qinit
