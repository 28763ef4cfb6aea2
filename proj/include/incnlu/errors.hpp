#ifndef INCNLU_ERRORS_HPP
#define INCNLU_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace incnlu {

// Bad input data (malformed files, contract violations on user-supplied
// values). The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// DataError with a 1-based line number attached.
class ParseError : public DataError {
public:
  ParseError(const std::string& message, std::size_t line)
      : DataError("line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

// Violation of the external-model line protocol. Exit code 3.
class ProtocolError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace incnlu

#endif
