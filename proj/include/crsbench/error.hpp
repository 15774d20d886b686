#ifndef CRSBENCH_ERROR_HPP
#define CRSBENCH_ERROR_HPP

#include <stdexcept>
#include <string>

namespace crsbench {

// Structured error with a coarse category, mapped by the CLI to exit codes.
class Error : public std::runtime_error {
public:
  enum class Kind {
    usage,        // bad arguments, dimension mismatch, out-of-range parameter
    assertion,    // a checked mathematical guarantee failed
    io,           // file / parse problems
    unsupported,  // legal but out of this artifact's scope (scale caps, orders)
  };

  Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

[[noreturn]] inline void fail_usage(const std::string& msg) {
  throw Error(Error::Kind::usage, msg);
}
[[noreturn]] inline void fail_assert(const std::string& msg) {
  throw Error(Error::Kind::assertion, msg);
}
[[noreturn]] inline void fail_io(const std::string& msg) {
  throw Error(Error::Kind::io, msg);
}
[[noreturn]] inline void fail_unsupported(const std::string& msg) {
  throw Error(Error::Kind::unsupported, msg);
}

}  // namespace crsbench

#endif
