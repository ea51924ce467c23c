#ifndef TELESCOPES_FIELD_HPP
#define TELESCOPES_FIELD_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "telescopes/kernels.hpp"

namespace telescopes {

// Finite field F_q, q in {2,3,4,5,7,8,9}. An element is the integer whose
// base-p digits are its coefficients in the basis 1, x, x^2, ... modulo a
// fixed irreducible (x^2+x+1 for q=4, x^3+x+1 for q=8, x^2+1 for q=9).
class Field {
 public:
  // Shared immutable instance; throws PreconditionError for other q.
  static const Field& get(unsigned q);
  static bool supported(unsigned q);

  unsigned q() const { return q_; }
  unsigned p() const { return p_; }
  unsigned e() const { return e_; }
  std::string name() const;  // "p^e"

  std::uint8_t add(std::uint8_t a, std::uint8_t b) const { return add_[a * q_ + b]; }
  std::uint8_t sub(std::uint8_t a, std::uint8_t b) const { return add_[a * q_ + neg_[b]]; }
  std::uint8_t mul(std::uint8_t a, std::uint8_t b) const { return mul_[a * q_ + b]; }
  std::uint8_t neg(std::uint8_t a) const { return neg_[a]; }
  std::uint8_t inv(std::uint8_t a) const;  // throws on 0
  std::uint8_t from_int(long v) const;      // image of an integer

  // The F_p-basis 1, x, ..., x^(e-1) as encoded elements.
  std::vector<std::uint8_t> prime_basis() const;

  const std::uint8_t* mul_row(std::uint8_t a) const { return mul_rows_[a].data(); }
  const std::uint8_t* add_table() const { return add_.data(); }
  kernels::GfAdd add_mode() const { return mode_; }

 private:
  explicit Field(unsigned q);

  unsigned q_, p_, e_;
  std::vector<std::uint8_t> add_, mul_, neg_, inv_;
  std::vector<std::array<std::uint8_t, 16>> mul_rows_;
  kernels::GfAdd mode_;
};

}  // namespace telescopes

#endif
