#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace parasemi {

enum class ErrorKind {
  input,                    // malformed arguments (empty grid, bad range, ...)
  shape,                    // vector length does not match the operator dimension
  singularity,              // A^θ S(0) with θ > 0
  spectrum_hit,             // resolvent evaluated on an eigenvalue
  unsupported_singularity,  // kernel exponent outside (0, 1)
  regime,                   // exponent inequality of the solution regime violated
  precondition,             // data outside the required function space
  hs_divergence,            // Hilbert–Schmidt sum diverges in the continuum
  tolerance,                // requested numerical tolerance not reached
  parse,                    // malformed configuration or data file
  io,                       // file system failure
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type of the library; the kind drives the CLI exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string subject = {})
      : std::runtime_error(message), kind_(kind), subject_(std::move(subject)) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Offending item (config key, file name) when one applies.
  const std::string& subject() const noexcept { return subject_; }

 private:
  ErrorKind kind_;
  std::string subject_;
};

}  // namespace parasemi
