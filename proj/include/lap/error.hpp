#pragma once

#include <stdexcept>
#include <string>

namespace lap {

// Error category doubles as the CLI exit code.
enum class ErrorKind : int { usage = 2, data = 3, backend = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }
  int exit_code() const { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

inline Error usage_error(const std::string& w) { return Error(ErrorKind::usage, w); }
inline Error data_error(const std::string& w) { return Error(ErrorKind::data, w); }
inline Error backend_error(const std::string& w) { return Error(ErrorKind::backend, w); }

}  // namespace lap
