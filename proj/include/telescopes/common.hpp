#ifndef TELESCOPES_COMMON_HPP
#define TELESCOPES_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace telescopes {

using BigInt = mpz_class;

// Bad argument to an operation (violated precondition).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input text that does not parse. `position` is a 0-based byte offset.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// A computation would exceed a configured size cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

BigInt factorial(unsigned n);

inline std::string to_decimal(const BigInt& x) { return x.get_str(10); }

}  // namespace telescopes

#endif
