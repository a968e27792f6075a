#include "ambispot/error.hpp"

namespace ambispot {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_geometry: return "invalid-geometry";
    case ErrorKind::degenerate_geometry: return "degenerate-geometry";
    case ErrorKind::invalid_score: return "invalid-score";
    case ErrorKind::duplicate_id: return "duplicate-id";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::parse_error: return "parse-error";
    case ErrorKind::io_error: return "io-error";
    case ErrorKind::empty_corpus: return "empty-corpus";
    case ErrorKind::single_class: return "single-class";
    case ErrorKind::insufficient_ambiguous: return "insufficient-ambiguous";
    case ErrorKind::internal: return "internal";
  }
  return "internal";
}

}  // namespace ambispot
