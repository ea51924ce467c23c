#ifndef TELESCOPES_MATFQ_HPP
#define TELESCOPES_MATFQ_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "telescopes/alphabet.hpp"
#include "telescopes/field.hpp"

namespace telescopes {

inline constexpr std::size_t kMatrixDimCap = 1024;

// Dense square matrix over F_q, rows and columns indexed by the words of one
// level in lexicographic order.
class MatFq {
 public:
  MatFq() = default;
  MatFq(const Field& f, std::size_t n);  // zero matrix
  static MatFq identity(const Field& f, std::size_t n);
  static MatFq scalar(const Field& f, std::size_t n, std::uint8_t lambda);

  const Field& field() const { return *field_; }
  std::size_t dim() const { return n_; }
  std::uint8_t at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, std::uint8_t v) { a_[i * n_ + j] = v; }
  const std::uint8_t* row(std::size_t i) const { return a_.data() + i * n_; }
  std::uint8_t* row(std::size_t i) { return a_.data() + i * n_; }

  bool is_identity() const;
  std::uint8_t det() const;
  MatFq inverse() const;  // throws PreconditionError when singular
  // A (x) I_m: row (i, s) is the word of i followed by the suffix s.
  MatFq kron_identity(std::size_t m) const;
  // Copy of the block with the given row/column indices.
  MatFq submatrix(const std::vector<std::size_t>& idx) const;

  // "q=<p>^<e> n=<dim>" then one line per row of integers.
  std::string format() const;
  static MatFq parse(std::string_view text);
  std::size_t hash() const;

  friend MatFq operator*(const MatFq& a, const MatFq& b);
  friend bool operator==(const MatFq& a, const MatFq& b) {
    return a.n_ == b.n_ && a.field_ == b.field_ && a.a_ == b.a_;
  }

 private:
  const Field* field_ = nullptr;
  std::size_t n_ = 0;
  std::vector<std::uint8_t> a_;
};

// Identity plus r at (y, z).
MatFq elementary(const Field& f, std::size_t n, std::size_t y, std::size_t z,
                 std::uint8_t r);
MatFq elementary(const Field& f, const Alphabet& a, WordView y, WordView z,
                 std::uint8_t r);
// e_{y,z}(-1) e_{z,y}(1) e_{y,z}(-1): the block ((0,-1),(1,0)) on (y, z).
MatFq signed_perm(const Field& f, std::size_t n, std::size_t y, std::size_t z);
MatFq signed_perm(const Field& f, const Alphabet& a, WordView y, WordView z);

// Smallest index set Y' such that the matrix is the identity off Y'.
std::vector<std::size_t> mat_support(const MatFq& m);
std::optional<std::uint8_t> is_scalar(const MatFq& m);
// Equal up to a global scalar factor.
bool equal_mod_scalars(const MatFq& a, const MatFq& b);
// Divides by the first nonzero entry in row-major order.
MatFq normalize_scalar(const MatFq& m);

MatFq commutator(const MatFq& g, const MatFq& h);  // g h g^-1 h^-1
MatFq conjugate(const MatFq& g, const MatFq& h);   // h^-1 g h
// Block diagonal: a on the first indices, b after.
MatFq direct_sum(const MatFq& a, const MatFq& b);

// Signed permutation data of a monomial matrix with entries +-1:
// m e_y = sign[y] e_{target[y]}. Absent for other matrices.
struct SignedPermData {
  std::vector<std::size_t> target;
  std::vector<std::uint8_t> sign;
};
std::optional<SignedPermData> as_signed_perm(const MatFq& m);

struct NonCommutingTau {
  MatFq tau;            // acts on the whole space, supported in U
  std::string branch;   // which case produced it
  std::size_t u1 = 0, u2 = 0;  // the two basis vectors of U used
};

// tau supported in U with det 1 such that [alpha, tau] is not scalar.
// U and W partition the index set. Throws PreconditionError when alpha maps
// every vector of U to the same multiple of itself.
NonCommutingTau find_noncommuting_tau(const MatFq& alpha,
                                      const std::vector<std::size_t>& u,
                                      const std::vector<std::size_t>& w);

}  // namespace telescopes

#endif
