#ifndef MLEL_ERROR_H_
#define MLEL_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mlel {

// Bad argument or violated precondition (range, length mismatch, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A layer has no two-paths, so the degree weighting 1/sqrt(P_l) is undefined.
class TwoPathsZero : public std::runtime_error {
 public:
  explicit TwoPathsZero(std::size_t layer)
      : std::runtime_error("layer " + std::to_string(layer + 1) +
                           " has zero two-paths"),
        layer_(layer) {}

  // 0-based index into the network's layer list.
  std::size_t layer() const { return layer_; }

 private:
  std::size_t layer_;
};

// Configuration file problem. key() names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : "'" + key + "': " + what),
        key_(std::move(key)) {}

  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// Malformed input data. line() is 1-based, 0 when not tied to a line.
// Well-formed configuration whose values fall outside the model's domain.
class ConfigValueError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line == 0 ? what
                                     : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Root finder failed to reach tolerance within its iteration budget.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mlel

#endif  // MLEL_ERROR_H_
