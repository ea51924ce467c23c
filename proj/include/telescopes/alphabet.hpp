#ifndef TELESCOPES_ALPHABET_HPP
#define TELESCOPES_ALPHABET_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "telescopes/common.hpp"

namespace telescopes {

// Letters are 0-based internally; the text form x1, x2, ... is 1-based.
using Letter = std::uint16_t;
using Word = std::vector<Letter>;
using WordView = std::span<const Letter>;

// Per-coordinate alphabet sizes. Coordinate k (0-based) has size leading[k]
// when k < leading.size() and `rest` afterwards, so X^l = X_1 x ... x X_l.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::uint32_t d);
  Alphabet(std::vector<std::uint32_t> leading, std::uint32_t rest);

  std::uint32_t size_at(std::size_t pos) const {
    return pos < leading_.size() ? leading_[pos] : rest_;
  }
  bool is_uniform() const { return leading_.empty(); }
  // |X^level|. Throws CapExceeded when it does not fit in 64 bits.
  std::uint64_t count(std::size_t level) const;
  bool valid(WordView w) const;

  // Lexicographic rank within X^|w| (mixed radix, first letter most
  // significant) and its inverse.
  std::uint64_t rank(WordView w) const;
  Word unrank(std::uint64_t index, std::size_t level) const;

  std::string format(WordView w) const;
  // Parses "x5x5x1"; the empty string is the empty word.
  Word parse(std::string_view text) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::uint32_t> leading_;
  std::uint32_t rest_ = 0;
};

std::string format_word(WordView w);

// A word with 1-based letters over a uniform alphabet of size d.
struct AlphabetWord {
  std::vector<std::uint32_t> letters;
  std::uint32_t d = 0;
};

std::uint64_t word_to_index(const AlphabetWord& w);
AlphabetWord index_to_word(std::uint64_t index, std::size_t level,
                           std::uint32_t d);

// Subset of a coordinate's letters.
class LetterSet {
 public:
  LetterSet() = default;
  static LetterSet none(std::uint32_t universe);
  static LetterSet full(std::uint32_t universe);
  static LetterSet singleton(std::uint32_t universe, Letter x);
  static LetterSet of(std::uint32_t universe, std::initializer_list<Letter> xs);
  static LetterSet of(std::uint32_t universe, const std::vector<Letter>& xs);

  std::uint32_t universe() const { return universe_; }
  bool contains(Letter x) const {
    return x < universe_ && ((bits_[x >> 6] >> (x & 63)) & 1);
  }
  void insert(Letter x);
  std::uint32_t count() const;
  bool empty() const { return count() == 0; }
  bool is_full() const { return count() == universe_; }
  std::optional<Letter> single() const;
  std::vector<Letter> letters() const;

  friend LetterSet operator&(const LetterSet& a, const LetterSet& b);
  friend bool operator==(const LetterSet&, const LetterSet&) = default;

 private:
  std::uint32_t universe_ = 0;
  std::vector<std::uint64_t> bits_;
};

enum class ConstraintKind { singleton, subset, full };

// Product set C_1 x ... x C_level of words.
class CylinderSet {
 public:
  CylinderSet() = default;
  // Throws PreconditionError on an empty coordinate or a universe mismatch.
  CylinderSet(Alphabet alphabet, std::vector<LetterSet> constraints);

  static CylinderSet full(const Alphabet& alphabet, std::size_t level);
  // prefix x X^(level - |prefix|)
  static CylinderSet with_prefix(const Alphabet& alphabet, WordView prefix,
                                 std::size_t level);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t level() const { return constraints_.size(); }
  const LetterSet& constraint(std::size_t i) const { return constraints_[i]; }
  const std::vector<LetterSet>& constraints() const { return constraints_; }
  ConstraintKind kind(std::size_t i) const;

  bool contains(WordView w) const;
  BigInt cardinality() const;
  // All members in lexicographic order. Throws CapExceeded above `cap`.
  std::vector<Word> enumerate(std::uint64_t cap = 1u << 22) const;
  std::string format() const;

  friend bool operator==(const CylinderSet&, const CylinderSet&) = default;

 private:
  Alphabet alphabet_;
  std::vector<LetterSet> constraints_;
};

// Disjoint iff some coordinate has an empty intersection.
bool cylinder_disjoint(const CylinderSet& a, const CylinderSet& b);
std::optional<CylinderSet> cylinder_intersect(const CylinderSet& a,
                                              const CylinderSet& b);
// Pads with `extra` full coordinates: vw is in the result iff v is in a.
CylinderSet cylinder_extend(const CylinderSet& a, std::size_t extra);

using CylinderUnion = std::vector<CylinderSet>;

bool unions_disjoint(const CylinderUnion& a, const CylinderUnion& b);
bool union_contains(const CylinderUnion& u, WordView w);
CylinderUnion union_extend(const CylinderUnion& u, std::size_t extra);

}  // namespace telescopes

#endif
