#include "doctest.h"

#include <set>

#include "telescopes/instances.hpp"
#include "telescopes/permgroup.hpp"

using namespace telescopes;

namespace {

std::set<Word> moved_words(const LevelElem& x, const Alphabet& a, std::size_t level) {
  std::set<Word> out;
  for (std::uint64_t r = 0; r < a.count(level); ++r) {
    Word w = a.unrank(r, level);
    if (std::get<PrefixMap>(x).apply(w) != w) out.insert(w);
  }
  return out;
}

BigInt sl_order(unsigned n, unsigned q) {
  BigInt r = 1, qq = q;
  for (unsigned k = 0; k < n * (n - 1) / 2; ++k) r *= qq;
  BigInt qi = q;
  for (unsigned i = 2; i <= n; ++i) {
    qi *= q;
    r *= qi - 1;
  }
  return r;
}

}  // namespace

TEST_CASE("alternating telescope shape") {
  auto m = build_alt(AltParams{5, 2, 6});
  const Alphabet& a = m->alphabet();
  CHECK(a.count(1) == 5);
  CHECK(a.count(3) == 125);
  CHECK(m->level_order(1) == 60);
  CHECK(moved_words(m->alpha(2), a, 2) == std::set<Word>{{4, 2}, {4, 3}, {4, 4}});
  CHECK(moved_words(m->iota(m->alpha(2), 2, 3), a, 3).size() == 15);
  // a 3-cycle of B moves three words at level 3, all behind x5
  std::set<Word> mv = moved_words(m->phi(3, m->b_generators()[0]), a, 3);
  CHECK(mv.size() == 3);
  for (const auto& w : mv) CHECK(w.front() == 4);
  for (const auto& b : m->b_generators()) {
    Perm p = level_to_perm(m->phi(3, b));
    CHECK(parity(p) == Parity::even);
  }
}

TEST_CASE("support cylinders") {
  CHECK(alt_support(5, 2, AltSupport::B, 2, 2).cardinality() == 10);
  CHECK(alt_support(5, 2, AltSupport::alpha, 1, 1).cardinality() == 3);
  CylinderSet bc = alt_support(5, 2, AltSupport::B_conj, 1, 3, 3);
  CHECK(bc.cardinality() == 10);
  CHECK(bc.contains(Word{3, 0, 2}));
  CHECK_FALSE(bc.contains(Word{4, 0, 2}));
  // the supports contain what the maps actually move
  auto m = build_alt(AltParams{5, 2, 6});
  for (std::size_t i = 2; i <= 4; ++i)
    for (std::size_t j = i; j <= 4; ++j) {
      CylinderSet c = alt_support(5, 2, AltSupport::B, i, j);
      for (const auto& b : m->b_generators())
        for (const auto& w : moved_words(m->iota(m->phi(i, b), i, j), m->alphabet(), j)) CHECK(c.contains(w));
    }
  for (std::size_t i = 1; i <= 3; ++i) {
    CylinderSet c = alt_support(5, 2, AltSupport::alpha, i, i + 1);
    for (const auto& w : moved_words(m->iota(m->alpha(i), i, i + 1), m->alphabet(), i + 1)) CHECK(c.contains(w));
  }
  // B_j and B_{i,j} conjugated by alpha_i sit on disjoint cylinders
  CHECK(cylinder_disjoint(alt_support(5, 2, AltSupport::B, 4, 4), alt_support(5, 2, AltSupport::B_conj, 1, 3, 4)));
}

TEST_CASE("linear telescope shape") {
  auto m = build_el(4, 2, 3);
  CHECK(m->level_order(1) == 20160);
  CHECK(m->dim(2) == 16);
  CHECK(el_support_z(4, 2, 2).cardinality() == 8);
  for (std::size_t n = 2; n <= 3; ++n) {
    CylinderSet z = el_support_z(4, n, n);
    for (const auto& b : m->b_generators()) {
      MatFq x = std::get<MatFq>(m->phi(n, b));
      for (auto i : mat_support(x)) CHECK(z.contains(m->alphabet().unrank(i, n)));
    }
  }
  for (std::size_t i = 1; i <= 2; ++i)
    for (std::size_t k = i + 2; k <= 5; ++k)
      for (std::size_t l = i + 2; l <= 5; ++l) {
        std::size_t top = std::max(k, l);
        CHECK(cylinder_disjoint(el_support_zi(4, i, k, top), el_support_z(4, l, top)));
      }
  BigInt sl = sl_order(4, 2);
  CHECK(sl == 20160);
}

TEST_CASE("projective telescope") {
  auto p = build_psl(4, 3, 3);
  CHECK(p->level_order(1) * 2 == sl_order(4, 3));
  const Field& f = Field::get(3);
  MatFq minus = MatFq::scalar(f, 4, 2);
  CHECK(p->equal(minus, MatFq::identity(f, 4)));
  CHECK_FALSE(p->equal(elementary(f, 4, 0, 1, 1), MatFq::identity(f, 4)));
  for (std::size_t j = 2; j <= 3; ++j) CHECK(is_scalar(std::get<MatFq>(p->iota(minus, 1, j))).has_value());
}

TEST_CASE("finite groups") {
  FiniteGroup a5 = FiniteGroup::builtin("alt5");
  CHECK(a5.size() == 60);
  CHECK(a5.is_perfect());
  CHECK(a5.element(0).is_identity());
  for (std::size_t g = 0; g < a5.size(); ++g) {
    CHECK(a5.mul(g, a5.inv(g)) == 0);
    CHECK(a5.index_of(a5.element(g)) == g);
  }
  CHECK(FiniteGroup::builtin("alt6").size() == 360);
  CHECK(FiniteGroup::builtin("sl2_5").size() == 120);
  FiniteGroup s3 = FiniteGroup::from_generators("s3", {Perm::cycle(3, {0, 1}), Perm::cycle(3, {0, 1, 2})});
  CHECK(s3.size() == 6);
  CHECK_FALSE(s3.is_perfect());
}

TEST_CASE("embedding telescope of Alt(5)") {
  FiniteGroup g = FiniteGroup::builtin("alt5");
  auto m = build_embed(EmbedParams{g, 3});
  const Alphabet& a = m->alphabet();
  CHECK(a.count(1) == 6);
  CHECK(a.count(2) == 360);
  CHECK(a.count(3) == 21600);
  // phi_2 moves only B-point words; the group part (1, g) sits behind alpha
  std::vector<Word> pts = m->b_point_words();
  std::set<Word> points(pts.begin(), pts.end());
  for (const auto& b : m->b_generators())
    for (const auto& w : moved_words(m->phi(2, b), a, 2)) CHECK(points.count(w) == 1);
  for (std::size_t k = 1; k < 5; ++k) {
    std::set<Word> mv = moved_words(m->phi(2, embed_group_element(*m, g, k)), a, 2);
    CHECK_FALSE(mv.empty());
    for (const auto& w : mv) CHECK(w[0] == kEmbedAlpha);
  }
  std::vector<LazyElement> emb = directed_tree_embedding(m, g);
  CHECK(emb.size() == 60);
  CHECK(emb[0].trivial_at(3));
  for (std::size_t k = 1; k < emb.size(); ++k) CHECK_FALSE(emb[k].trivial_at(3));
}

TEST_CASE("random even permutations") {
  Rng rng(81);
  for (int t = 0; t < 50; ++t) CHECK(parity(random_even_perm(2 + static_cast<std::uint32_t>(rng.below(20)), rng)) == Parity::even);
}
