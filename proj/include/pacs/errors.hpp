#pragma once

#include <stdexcept>
#include <string>

namespace pacs {

// Raised when a truncated Fock space is too small for the requested state
// or when an operation leaks norm past the cutoff.
class TruncationError : public std::runtime_error {
 public:
  explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an SNR is requested for a zero-variance state (e.g. a Fock
// state). Signaled as a condition, never emitted as an infinity.
class DivergentSnrError : public std::domain_error {
 public:
  explicit DivergentSnrError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace pacs
