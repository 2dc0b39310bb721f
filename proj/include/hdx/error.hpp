#pragma once

#include <stdexcept>
#include <string>

namespace hdx {

// Categories double as process exit codes for the command-line tool.
enum class ErrorKind : int {
  kIo = 2,
  kParse = 3,
  kConfig = 4,
  kSchema = 5,
  kEmptySubset = 6,
  kDimension = 7,
  kInvalidArgument = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
  [[nodiscard]] int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace hdx
