#pragma once

#include <stdexcept>
#include <string>

namespace sparsedetect {

enum class ErrorCode {
  Parameter,   // invalid construction parameters or configuration values
  Domain,      // argument outside the mathematical domain of a formula
  Dimension,   // vector / matrix sizes do not agree
  EmptyGrid,   // discretized search grid has no points
  Parse,       // malformed input text (CSV, JSON)
  Io,          // file could not be read or written
  Runtime,     // failure while running an experiment
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace sparsedetect
