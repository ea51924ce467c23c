#ifndef TELESCOPES_PERM_HPP
#define TELESCOPES_PERM_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "telescopes/common.hpp"

namespace telescopes {

// Permutation of {0, ..., degree-1}, acting on the left: p(x) = images[x].
class Perm {
 public:
  Perm() = default;
  explicit Perm(std::uint32_t degree);  // identity
  explicit Perm(std::vector<std::uint32_t> images);  // validated bijection
  // Cycles given as point lists; points not mentioned are fixed.
  static Perm from_cycles(std::uint32_t degree,
                          const std::vector<std::vector<std::uint32_t>>& cycles);
  static Perm cycle(std::uint32_t degree, const std::vector<std::uint32_t>& pts);
  // Skips validation; the caller guarantees a bijection.
  static Perm unchecked(std::vector<std::uint32_t> images);

  std::uint32_t degree() const { return static_cast<std::uint32_t>(img_.size()); }
  std::uint32_t operator()(std::uint32_t x) const { return img_[x]; }
  const std::vector<std::uint32_t>& images() const { return img_; }

  bool is_identity() const;
  std::size_t moved_count() const;
  // Nontrivial cycles, each starting at its smallest point, ordered by it.
  std::vector<std::vector<std::uint32_t>> cycles() const;
  BigInt order() const;

  friend bool operator==(const Perm&, const Perm&) = default;
  friend auto operator<=>(const Perm&, const Perm&) = default;

 private:
  std::vector<std::uint32_t> img_;
};

enum class Parity { even, odd };

// compose(a, b) = a after b, i.e. x -> a(b(x)).
Perm compose(const Perm& a, const Perm& b);
Perm inverse(const Perm& a);
Parity parity(const Perm& a);
std::vector<std::uint32_t> support_of(const Perm& a);
Perm power(const Perm& a, std::int64_t e);
// g^h = h^-1 g h
Perm conjugate(const Perm& g, const Perm& h);
// [g, h] = g h g^-1 h^-1
Perm commutator(const Perm& g, const Perm& h);
// Disjoint union action: a on the first block, b on the next.
Perm direct_sum(const Perm& a, const Perm& b);

using PointNamer = std::function<std::string(std::uint32_t)>;
using PointLookup = std::function<std::optional<std::uint32_t>(std::string_view)>;

// "(w1 w2 w3)(w4 w5)"; identity prints as "()".
std::string format_cycles(const Perm& p, const PointNamer& name);
// Parses cycle notation; a point may be given by name or as "#<index>".
// "()" and "id" are the identity. Throws ParseError.
Perm parse_cycles(std::string_view text, std::uint32_t degree,
                  const PointLookup& lookup);

struct PermHash {
  std::size_t operator()(const Perm& p) const;
};

}  // namespace telescopes

#endif
