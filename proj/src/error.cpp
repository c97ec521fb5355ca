#include "parasemi/error.hpp"

namespace parasemi {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::input: return "input";
    case ErrorKind::shape: return "shape";
    case ErrorKind::singularity: return "singularity";
    case ErrorKind::spectrum_hit: return "spectrum_hit";
    case ErrorKind::unsupported_singularity: return "unsupported_singularity";
    case ErrorKind::regime: return "regime";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::hs_divergence: return "hs_divergence";
    case ErrorKind::tolerance: return "tolerance";
    case ErrorKind::parse: return "parse";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace parasemi
