#pragma once

#include <stdexcept>
#include <string>

namespace ptb {

// Library-wide error with a coarse code the C API can surface.
class Error : public std::runtime_error {
 public:
  enum class Code { Invalid, Parse, Io, Degenerate, Runtime };

  Error(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

[[noreturn]] inline void fail_invalid(const std::string& msg) { throw Error(Error::Code::Invalid, msg); }
[[noreturn]] inline void fail_parse(const std::string& msg) { throw Error(Error::Code::Parse, msg); }
[[noreturn]] inline void fail_io(const std::string& msg) { throw Error(Error::Code::Io, msg); }
[[noreturn]] inline void fail_degenerate(const std::string& msg) { throw Error(Error::Code::Degenerate, msg); }
[[noreturn]] inline void fail_runtime(const std::string& msg) { throw Error(Error::Code::Runtime, msg); }

}  // namespace ptb
