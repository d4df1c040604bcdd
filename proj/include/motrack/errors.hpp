#pragma once

#include <stdexcept>
#include <string>

namespace motrack {

// Error classes map 1:1 onto CLI exit codes (0 is success).
enum class ErrorCode { config = 1, io = 2, numerical = 3, format = 4 };

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

inline Error config_error(const std::string& m) { return Error(ErrorCode::config, m); }
inline Error io_error(const std::string& m) { return Error(ErrorCode::io, m); }
inline Error numerical_error(const std::string& m) { return Error(ErrorCode::numerical, m); }
inline Error format_error(const std::string& m) { return Error(ErrorCode::format, m); }

}  // namespace motrack
