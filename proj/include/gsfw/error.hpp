#ifndef GSFW_ERROR_HPP_
#define GSFW_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace gsfw {

/// Malformed dataset text (bad token, unsorted indices, label problems).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Argument outside the domain of a function (e.g. a conjugate).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid run configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An invariant the algorithms guarantee was observed to be broken.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace gsfw

#endif  // GSFW_ERROR_HPP_
