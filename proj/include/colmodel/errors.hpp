#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace colmodel {

// Root of every exception thrown by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Register would exceed the supported qubit count.
class capacity_error : public error {
 public:
  using error::error;
};

// Operand dimensions do not agree.
class dimension_error : public error {
 public:
  using error::error;
};

// Qubit index outside the register.
class index_error : public error {
 public:
  using error::error;
};

// Parameter outside its legal domain.
class domain_error : public error {
 public:
  using error::error;
};

// A state failed a density-matrix invariant during evolution.
class integrity_error : public error {
 public:
  integrity_error(const std::string& what, std::size_t step)
      : error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

// Malformed or out-of-range configuration. line() is 0 when the problem
// is not tied to a line of the document.
class config_error : public error {
 public:
  explicit config_error(const std::string& what, std::size_t line = 0)
      : error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class io_error : public error {
 public:
  using error::error;
};

}  // namespace colmodel
