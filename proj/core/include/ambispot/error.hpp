#ifndef AMBISPOT_ERROR_HPP
#define AMBISPOT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ambispot {

// Error categories. Anything caused by user input (bad files, bad
// geometry, bad scores) maps to a distinct kind so the CLI can report a
// machine-readable error and exit with the input-error code.
enum class ErrorKind {
  invalid_geometry,
  degenerate_geometry,
  invalid_score,
  duplicate_id,
  invalid_argument,
  parse_error,
  io_error,
  empty_corpus,
  single_class,
  insufficient_ambiguous,
  internal,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  // true for errors a caller caused with bad input, false for internal bugs
  bool is_input_error() const { return kind_ != ErrorKind::internal; }

 private:
  ErrorKind kind_;
};

}  // namespace ambispot

#endif
