#ifndef PREPLY_COMMON_ERROR_H_
#define PREPLY_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace preply {

// Coarse error classes. The C API maps these one-to-one onto pr_status.
enum class ErrorCode {
  kInvalidArgument = 1,
  kShapeMismatch = 2,
  kIo = 3,
  kParse = 4,
  kData = 5,
  kState = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace preply

#endif  // PREPLY_COMMON_ERROR_H_
