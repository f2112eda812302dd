#pragma once

#include <stdexcept>
#include <string>

namespace wsn {

/// Raised for out-of-range inputs supplied by a caller or a config.
class InvalidParameters : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an internal invariant breaks; indicates a simulator bug.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed config text. Carries the offending key and 1-based line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& key, int line, const std::string& what)
      : std::runtime_error(format(key, line, what)), key_(key), line_(line) {}

  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& key, int line, const std::string& what) {
    std::string msg;
    if (line > 0) msg += "line " + std::to_string(line) + ": ";
    if (!key.empty()) msg += "'" + key + "': ";
    return msg + what;
  }

  std::string key_;
  int line_;
};

}  // namespace wsn
