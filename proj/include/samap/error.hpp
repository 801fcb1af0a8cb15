#ifndef SAMAP_ERROR_HPP
#define SAMAP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace samap {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad input: invalid indices, mismatched dimensions, malformed recipes.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Malformed Matrix Market or manifest content. Carries the 1-based line number.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/// Operation refused because a configured size cap would be exceeded.
class CapExceeded : public Error {
public:
  using Error::Error;
};

/// Numerical failure: singular matrices, line search breakdown.
class NumericalError : public Error {
public:
  using Error::Error;
};

} // namespace samap

#endif // SAMAP_ERROR_HPP
