#pragma once

#include <stdexcept>
#include <string>

namespace rinfer {

// All validation and precondition failures throw this type. The CLI turns it
// into a message on stderr and a nonzero exit code.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

inline void require(bool cond, const std::string& msg) {
  if (!cond) fail(msg);
}

}  // namespace rinfer
