#pragma once

#include <stdexcept>
#include <string>

namespace momkit {

// Parse errors come from malformed input text; precondition errors from a move
// or operation whose requirements do not hold; invariant errors from a result
// that fails its own postcondition check.
enum class ErrorKind { parse, precondition, invariant };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail_parse(const std::string& msg) { throw Error(ErrorKind::parse, msg); }
[[noreturn]] inline void fail_pre(const std::string& msg) { throw Error(ErrorKind::precondition, msg); }
[[noreturn]] inline void fail_invariant(const std::string& msg) { throw Error(ErrorKind::invariant, msg); }

inline void require(bool ok, const std::string& msg) {
  if (!ok) fail_pre(msg);
}

}  // namespace momkit
