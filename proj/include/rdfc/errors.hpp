#pragma once

#include <stdexcept>
#include <string>

namespace rdfc {

/// Thrown when a requested computation would exceed a hard size cap
/// (exhaustive permutation search, exact sequence-space enumeration).
class SizeError : public std::runtime_error {
 public:
  explicit SizeError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rdfc
