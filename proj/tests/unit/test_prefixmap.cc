#include "doctest.h"

#include <numeric>

#include "telescopes/prefixmap.hpp"
#include "telescopes/rng.hpp"

using namespace telescopes;

namespace {

Perm random_perm(std::uint32_t n, Rng& rng) {
  std::vector<std::uint32_t> v(n);
  std::iota(v.begin(), v.end(), 0u);
  for (std::uint32_t i = n; i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
  return Perm(v);
}

// Random map that is a lifted permutation of a shorter level on part of
// the words, so that the rules have mixed lengths.
PrefixMap random_map(const Alphabet& a, std::size_t level, Rng& rng) {
  std::size_t low = 1 + rng.below(level);
  PrefixMap p = PrefixMap::from_perm(a, low, random_perm(static_cast<std::uint32_t>(a.count(low)), rng)).lift(level);
  if (rng.coin()) p = compose(PrefixMap::from_perm(a, level, random_perm(static_cast<std::uint32_t>(a.count(level)), rng)), p);
  return p;
}

}  // namespace

TEST_CASE("prefix maps agree with their permutations") {
  Alphabet a(3);
  Rng rng(51);
  for (int t = 0; t < 60; ++t) {
    PrefixMap p = random_map(a, 3, rng), q = random_map(a, 3, rng);
    Perm pp = p.to_perm(), qq = q.to_perm();
    CHECK(PrefixMap::from_perm(a, 3, pp) == p);
    CHECK(compose(p, q).to_perm() == compose(pp, qq));
    CHECK(inverse(p).to_perm() == inverse(pp));
    CHECK(p.moved_count() == pp.moved_count());
    CHECK(p.is_identity() == pp.is_identity());
    for (std::uint64_t r = 0; r < a.count(3); ++r) CHECK(a.rank(p.apply(a.unrank(r, 3))) == pp(static_cast<std::uint32_t>(r)));
  }
}

TEST_CASE("canonical form merges sibling rules") {
  Alphabet a(3);
  std::vector<PrefixMap::Rule> fine;
  for (Letter x = 0; x < 3; ++x) fine.push_back({Word{0, x}, Word{1, x}});
  for (Letter x = 0; x < 3; ++x) fine.push_back({Word{1, x}, Word{0, x}});
  PrefixMap p = PrefixMap::from_rules(a, 2, fine);
  PrefixMap q = PrefixMap::from_rules(a, 2, {{Word{0}, Word{1}}, {Word{1}, Word{0}}});
  CHECK(p == q);
  CHECK(p.prefix_image(Word{0}) == Word{1});
  CHECK(p.prefix_image(Word{2, 1}) == Word{2, 1});
  CHECK_FALSE(PrefixMap::identity(a, 2).prefix_image(Word{}).has_value() == false);
  CHECK(p.format_rules() == "x1->x2, x2->x1");
  CHECK(PrefixMap::identity(a, 2).format_rules() == "id");
  CHECK_THROWS_AS(PrefixMap::from_rules(a, 2, {{Word{0}, Word{1}}}), PreconditionError);
}

TEST_CASE("lifting is a homomorphism and keeps the suffix") {
  Alphabet a(4);
  Rng rng(52);
  for (int t = 0; t < 40; ++t) {
    PrefixMap p = random_map(a, 2, rng), q = random_map(a, 2, rng);
    CHECK(compose(p, q).lift(4) == compose(p.lift(4), q.lift(4)));
    Word w = a.unrank(rng.below(a.count(4)), 4);
    Word img = p.lift(4).apply(w);
    Word head = p.apply(Word(w.begin(), w.begin() + 2));
    CHECK(Word(img.begin(), img.begin() + 2) == head);
    CHECK(Word(img.begin() + 2, img.end()) == Word(w.begin() + 2, w.end()));
  }
}

TEST_CASE("supports and images against enumeration") {
  Alphabet a(3);
  Rng rng(53);
  for (int t = 0; t < 40; ++t) {
    PrefixMap p = random_map(a, 3, rng);
    CylinderUnion s = p.support(4);
    for (std::uint64_t r = 0; r < a.count(4); ++r) {
      Word w = a.unrank(r, 4);
      CHECK(union_contains(s, w) == (p.apply(w) != w));
    }
    CylinderSet c = CylinderSet::with_prefix(a, Word{static_cast<Letter>(rng.below(3))}, 3);
    CylinderUnion img = p.image(c);
    for (std::uint64_t r = 0; r < a.count(3); ++r) {
      Word w = a.unrank(r, 3);
      CHECK(union_contains(img, p.apply(w)) == c.contains(w));
    }
  }
}

TEST_CASE("mixed radix prefix maps") {
  Alphabet a({6}, 5);
  Rng rng(54);
  PrefixMap p = PrefixMap::from_perm(a, 2, random_perm(30, rng));
  CHECK(compose(p, inverse(p)).is_identity());
  CHECK(p.lift(3).to_perm().degree() == 150);
  CHECK(p.hash() == PrefixMap::from_perm(a, 2, p.to_perm()).hash());
}
