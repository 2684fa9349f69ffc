#pragma once

#include <stdexcept>
#include <string>

namespace cskd {

// Fatal, non-recoverable failure (bad input file, schema violation, I/O).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cskd
