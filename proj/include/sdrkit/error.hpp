#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sdrkit {

/// Base class for every error raised by the library. `code()` is the stable
/// machine-greppable prefix the CLI prints (E_PARSE, E_VALIDATE, ...).
class Error : public std::runtime_error {
 public:
  Error(std::string_view code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  std::string_view code() const noexcept { return code_; }

  /// Computational failures (no convergence, no sign change) map to exit 2,
  /// everything else to exit 1.
  virtual bool computational() const noexcept { return false; }

 private:
  std::string_view code_;
};

class InvalidParameter : public Error {
 public:
  explicit InvalidParameter(const std::string& what) : Error("E_VALIDATE", what) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error("E_VALIDATE", what) {}
};

class NotFound : public Error {
 public:
  explicit NotFound(const std::string& what) : Error("E_VALIDATE", what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("E_PARSE", "line " + std::to_string(line) + ": " + what), line_(line) {}
  explicit ParseError(const std::string& what) : Error("E_PARSE", what), line_(0) {}

  /// 1-based line number, or 0 when the error is not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class NoSignChange : public Error {
 public:
  explicit NoSignChange(const std::string& what) : Error("E_NOSIGN", what) {}
  bool computational() const noexcept override { return true; }
};

class NoConvergence : public Error {
 public:
  explicit NoConvergence(const std::string& what) : Error("E_NOCONV", what) {}
  bool computational() const noexcept override { return true; }
};

}  // namespace sdrkit
