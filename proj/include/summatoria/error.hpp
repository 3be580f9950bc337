#pragma once

#include <stdexcept>
#include <string>

namespace summatoria {

enum class ErrorCode {
  Domain,      // argument outside the operation's domain
  Resource,    // interval or limit exceeds a configured maximum
  Integrity,   // cache header or checksum mismatch
  Corruption,  // decoded artifact violates its invariants
  Io,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_domain(const std::string& msg) {
  throw Error(ErrorCode::Domain, msg);
}

[[noreturn]] inline void throw_resource(const std::string& msg) {
  throw Error(ErrorCode::Resource, msg);
}

}  // namespace summatoria
