#pragma once

#include <stdexcept>
#include <string>

namespace crdiscs {

// Base of every error raised by the library. `name()` is the stable,
// machine-readable identifier surfaced by the CLI.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(what), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

// Input outside an operation's mathematical domain.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error("DomainError", what) {}
};

// An operation's precondition on its arguments does not hold.
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what)
      : Error("PreconditionError", what) {}
};

}  // namespace crdiscs
