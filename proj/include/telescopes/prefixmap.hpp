#ifndef TELESCOPES_PREFIXMAP_HPP
#define TELESCOPES_PREFIXMAP_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "telescopes/alphabet.hpp"
#include "telescopes/perm.hpp"

namespace telescopes {

// Permutation of X^level stored as a complete prefix code of rewrite rules
// p -> q with |p| = |q|: a word p u maps to q u. The code is kept in the
// unique coarsest form (sibling rules p x -> q x for every letter x merge
// into p -> q), so equal maps have identical rule lists. Lifting to a deeper
// level (w v -> sigma(w) v) reuses the rules unchanged, which is what makes
// elements like iota_{2,13}(sigma) cheap.
class PrefixMap {
 public:
  using Rule = std::pair<Word, Word>;

  PrefixMap() = default;
  static PrefixMap identity(const Alphabet& alphabet, std::size_t level);
  // Rules with pairwise disjoint domains; words in no domain are fixed.
  // Throws PreconditionError unless the result is a bijection.
  static PrefixMap from_rules(const Alphabet& alphabet, std::size_t level,
                              std::vector<Rule> rules);
  // p acts on X^level through the lexicographic rank.
  static PrefixMap from_perm(const Alphabet& alphabet, std::size_t level,
                             const Perm& p);

  const Alphabet& alphabet() const { return alpha_; }
  std::size_t level() const { return level_; }
  std::size_t rule_count() const { return len_.size(); }
  WordView rule_prefix(std::size_t i) const {
    return WordView(buf_.data() + off_[i], len_[i]);
  }
  WordView rule_image(std::size_t i) const {
    return WordView(buf_.data() + off_[i] + len_[i], len_[i]);
  }
  bool rule_moves(std::size_t i) const;

  // Acts on the first `level` letters of w and leaves the rest; |w| >= level.
  Word apply(WordView w) const;
  PrefixMap lift(std::size_t new_level) const;
  // Image of a word shorter than level() when a single rule covers it, so
  // that the map sends w u to (result) u for every u; absent otherwise.
  std::optional<Word> prefix_image(WordView w) const;
  Perm to_perm() const;

  bool is_identity() const;
  std::uint64_t moved_count() const;
  // Moved words at level >= level(), as prefix cylinders.
  CylinderUnion support(std::size_t at_level) const;
  CylinderUnion support() const { return support(level_); }
  // Image of a cylinder of level >= level() as a union of cylinders.
  CylinderUnion image(const CylinderSet& c) const;

  // "x5x3->x5x4, x5x4->x5x5" over moved rules; "id" for the identity.
  std::string format_rules() const;
  std::size_t hash() const;

  friend bool operator==(const PrefixMap& a, const PrefixMap& b) {
    return a.level_ == b.level_ && a.alpha_ == b.alpha_ && a.len_ == b.len_ &&
           a.buf_ == b.buf_;
  }

  friend PrefixMap compose(const PrefixMap& a, const PrefixMap& b);
  friend PrefixMap inverse(const PrefixMap& a);

 private:
  // Index of the rule whose prefix is a prefix of w, or npos.
  std::size_t covering_rule(WordView w) const;
  // First and one-past-last rule whose prefix extends w.
  std::pair<std::size_t, std::size_t> extending_rules(WordView w) const;
  void push_rule(WordView p, WordView q);
  void canonicalize();
  void check_bijective() const;

  Alphabet alpha_;
  std::size_t level_ = 0;
  std::vector<Letter> buf_;          // per rule: prefix then image
  std::vector<std::uint32_t> off_;
  std::vector<std::uint16_t> len_;
};

PrefixMap compose(const PrefixMap& a, const PrefixMap& b);  // a after b
PrefixMap inverse(const PrefixMap& a);

}  // namespace telescopes

#endif
