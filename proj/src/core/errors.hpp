#pragma once

#include <stdexcept>
#include <string>

namespace l3s3tv {

// Status codes shared by the C API and the CLI exit codes.
enum class Status : int {
  ok = 0,
  bad_argument = 1,
  io_failure = 2,
  numeric_failure = 3,
  selfcheck_failure = 4,
};

class Error : public std::runtime_error {
 public:
  Error(Status status, const std::string& message)
      : std::runtime_error(message), status_(status) {}

  Status status() const { return status_; }

 private:
  Status status_;
};

[[noreturn]] inline void fail(Status status, const std::string& message) {
  throw Error(status, message);
}

[[noreturn]] inline void fail_argument(const std::string& message) {
  fail(Status::bad_argument, message);
}

}  // namespace l3s3tv
