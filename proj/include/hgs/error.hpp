#pragma once

#include <stdexcept>
#include <string>

namespace hgs {

enum class ErrorKind {
  input,          // malformed argument or precondition violation
  hypothesis,     // a weight/symbol condition required by the computation fails
  accuracy,       // requested tolerance not reached
  divergence,     // quantity is infinite where a number was required
  underflow,      // value below the representable range of the active precision
  resource,       // size exceeds the memory budget
  nonconvergence  // iterative kernel failed
};

const char* to_string(ErrorKind kind) noexcept;

/// Exception carrying the failing module name and an error category.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string module, const std::string& message)
      : std::runtime_error(module + ": " + message), kind_(kind), module_(std::move(module)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }

private:
  ErrorKind kind_;
  std::string module_;
};

} // namespace hgs
