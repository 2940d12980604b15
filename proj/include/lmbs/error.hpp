#pragma once

#include <stdexcept>
#include <string>

namespace lmbs {

// Categories surfaced by the command-line front end as distinct exit codes.
enum class ErrorKind {
  Config,                 // malformed or inconsistent input
  NumericalPrecondition,  // a theorem's hypothesis does not hold
  TailUndetermined,       // an integral to infinity needs tail metadata
  ToleranceFailure,       // a requested check missed its tolerance
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, std::string operation,
        const std::string& message)
      : std::runtime_error(module + "::" + operation + ": " + message),
        kind_(kind),
        module_(std::move(module)),
        operation_(std::move(operation)),
        detail_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }
  const std::string& operation() const noexcept { return operation_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string module_;
  std::string operation_;
  std::string detail_;
};

[[noreturn]] inline void fail(ErrorKind kind, const char* module,
                              const char* operation,
                              const std::string& message) {
  throw Error(kind, module, operation, message);
}

}  // namespace lmbs
