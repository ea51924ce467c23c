#include "doctest.h"

#include <algorithm>

#include "telescopes/normalform.hpp"
#include "telescopes/verify.hpp"

using namespace telescopes;

namespace {

std::shared_ptr<const SpinalPermModel> alt(std::size_t max_level) {
  return build_alt(AltParams{5, 2, max_level});
}

std::size_t tilde_count(const LazyElement& g) {
  return static_cast<std::size_t>(std::count_if(g.atoms().begin(), g.atoms().end(),
                                                [](const Atom& a) { return a.data->kind == AtomKind::tilde; }));
}

// Word over the default generators with at most `tildes` tilde atoms.
LazyElement capped_word(const ModelPtr& m, std::size_t len, std::size_t tildes, Rng& rng) {
  for (;;) {
    LazyElement g = random_generator_word(m, len, rng);
    if (tilde_count(g) <= tildes) return g;
  }
}

}  // namespace

TEST_CASE("weak normal form reassembles the word") {
  auto m = alt(14);
  Rng rng = Rng(11).split("nf-unit");
  for (int t = 0; t < 40; ++t) {
    LazyElement g = random_generator_word(m, 1 + rng.below(8), rng);
    NormalForm nf = weak_normal_form(g);
    CHECK(nf.m <= g.length());
    // the rightmost tilde atom is the base case m = 0
    CHECK(nf.m + 1 == std::max<std::size_t>(tilde_count(g), 1));
    LazyElement r = reassemble(m, nf);
    CHECK(equal_up_to(g, r, std::min(nf.m + 4, m->max_level())));
  }
}

TEST_CASE("weak normal form takes one-hot and higher Delta atoms") {
  auto m = alt(10);
  Rng rng = Rng(12).split("nf-lift");
  for (int t = 0; t < 15; ++t) {
    LazyElement g = random_generator_word(m, 4, rng);
    std::size_t j = 2 + rng.below(3);
    g = g * LazyElement::one_hot(m, j, m->random_level_element(j, rng));
    g = LazyElement::delta(m, 3, m->random_level_element(3, rng)) * g;
    NormalForm nf = weak_normal_form(g);
    CHECK(nf.m >= 2);
    CHECK(equal_up_to(g, reassemble(m, nf), std::min(nf.m + 3, m->max_level())));
  }
  CHECK_THROWS_AS(weak_normal_form(LazyElement::directed(m, 1, 2, LineFamily{1, {{Word{4}, m->config().b_gens[0]}}})), PreconditionError);
}

TEST_CASE("normal form needs room above m") {
  auto m = alt(4);
  LazyElement t = LazyElement::tilde(m, 1, m->b_generators()[0]);
  CHECK_THROWS_AS(weak_normal_form(t * t * t * t * t), CapExceeded);
}

TEST_CASE("direct sum membership") {
  auto m = alt(9);
  Rng rng = Rng(13).split("sum");
  LazyElement e(m);
  CHECK(in_direct_sum(e).member);
  LazyElement f = LazyElement::one_hot(m, 2, m->random_level_element(2, rng)) *
                  LazyElement::one_hot(m, 4, m->random_level_element(4, rng));
  CHECK(in_direct_sum(f).member);
  LazyElement t = LazyElement::tilde(m, 1, m->b_generators()[0]);
  Membership mt = in_direct_sum(t);
  CHECK_FALSE(mt.member);
  REQUIRE(mt.witness.has_value());
  CHECK(is_consistent_at(t, mt.witness->w));
  CHECK_THROWS_AS(find_consistent_point(f), PreconditionError);
}

TEST_CASE("consistent moved points lie at level at most m+3") {
  auto m = alt(12);
  Rng rng = Rng(14).split("cons-point");
  int seen = 0;
  for (int t = 0; t < 40; ++t) {
    LazyElement g = capped_word(m, 1 + rng.below(8), 5, rng);
    Membership s = in_direct_sum(g);
    if (s.member) continue;
    ++seen;
    const ConsistentPoint& p = *s.witness;
    CHECK(p.k <= s.nf.m + 3);
    CHECK(p.w.size() == p.k);
    PrefixMap x = std::get<PrefixMap>(g.project(p.k));
    CHECK(x.apply(p.w) != p.w);
    CHECK(is_consistent_at(g, p.w));
  }
  CHECK(seen > 20);
}

TEST_CASE("simplicity witness is a nontrivial Delta atom") {
  auto m = alt(10);
  Rng rng = Rng(15).split("simple");
  int seen = 0;
  for (int t = 0; t < 12; ++t) {
    LazyElement g = capped_word(m, 1 + rng.below(6), 3, rng);
    if (in_direct_sum(g).member) continue;
    SimplicityWitness w = simplicity_witness(g);
    ++seen;
    CHECK(w.verified);
    CHECK(w.verified_to == m->max_level());
    REQUIRE(w.commutator.has_value());
    CHECK_FALSE(std::get<PrefixMap>(w.atom).is_identity());
    CHECK(check_delta_atom(*w.commutator, w.k + 1, w.atom, m->max_level()));
  }
  CHECK(seen > 5);
}

TEST_CASE("check_delta_atom rejects a wrong atom") {
  auto m = alt(6);
  LazyElement t = LazyElement::tilde(m, 1, m->b_generators()[0]);
  CHECK_FALSE(check_delta_atom(t, 2, m->phi(2, m->b_generators()[0]), 6));
  LevelElem a = m->alpha(2);
  CHECK(check_delta_atom(LazyElement::delta(m, 2, a), 2, a, 6));
}

TEST_CASE("head normal form agrees above level n") {
  auto m = alt(12);
  Rng rng = Rng(16).split("head");
  for (int t = 0; t < 25; ++t) {
    LazyElement g = capped_word(m, 1 + rng.below(8), 5, rng);
    HeadNormalForm h = head_normal_form(g);
    CHECK(h.n == tilde_count(g));
    LazyElement r = reassemble_head(m, h);
    for (std::size_t j = h.n + 1; j <= std::min(h.n + 4, m->max_level()); ++j) CHECK(equal_at(g, r, j));
    for (std::size_t i = 0; i < h.factors.size(); ++i)
      for (std::size_t k = i + 1; k < h.factors.size(); ++k)
        CHECK(head_base_point(*m, h, i) != head_base_point(*m, h, k));
  }
}

TEST_CASE("head_equal separates direct sum and tilde perturbations") {
  auto m = alt(10);
  Rng rng = Rng(17).split("head-eq");
  for (int t = 0; t < 10; ++t) {
    LazyElement g = capped_word(m, 1 + rng.below(5), 3, rng);
    std::size_t j = 1 + rng.below(4);
    LazyElement sum = g * LazyElement::one_hot(m, j, m->random_level_element(j, rng));
    CHECK(head_equal(g, sum));
    LazyElement tl = g * LazyElement::tilde(m, 1, m->b_generators()[rng.below(m->b_generators().size())]);
    CHECK_FALSE(head_equal(g, tl));
  }
}

TEST_CASE("germs at fixed points") {
  auto m = alt(10);
  Rng rng = Rng(18).split("germ");
  const Alphabet& al = m->alphabet();
  int nontrivial = 0, checked = 0;
  for (int t = 0; t < 12; ++t) {
    LazyElement q = capped_word(m, 1 + rng.below(5), 2, rng);
    std::size_t n = head_normal_form(q).n;
    for (std::uint64_t r = 0; r < al.count(2); ++r) {
      Word p = al.unrank(r, 2);
      std::size_t J = std::max<std::size_t>(n + 1, 2) + 2;
      Word xi = p;
      xi.resize(J, m->config().prefix);
      if (std::get<PrefixMap>(q.project(J)).apply(xi) != xi) {
        CHECK_THROWS_AS(germ_at(q, p), PreconditionError);
        continue;
      }
      Germ gm = germ_at(q, p);
      ++checked;
      CHECK(gm.verified);
      if (!gm.trivial) ++nontrivial;
    }
  }
  CHECK(checked > 0);
  MESSAGE("germs checked: ", checked, ", nontrivial: ", nontrivial);
}

TEST_CASE("matrix normal form and non-scalar witnesses") {
  auto m = build_el(4, 2, 5);
  Rng rng = Rng(19).split("sl-nf");
  int witnesses = 0;
  for (int t = 0; t < 12; ++t) {
    LazyElement g = capped_word(m, 1 + rng.below(6), 2, rng);
    NormalForm nf = weak_normal_form_sl(g);
    CHECK(equal_up_to(g, reassemble(m, nf), m->max_level()));
    if (scalar_class(nf)) {
      CHECK_THROWS_AS(sl_nonscalar_witness(g), PreconditionError);
      continue;
    }
    SlWitness w = sl_nonscalar_witness(g);
    ++witnesses;
    CHECK(w.verified);
    CHECK(w.level <= nf.m + 3);
  }
  CHECK(witnesses > 5);
}

TEST_CASE("normal form base cases") {
  auto m = alt(8);
  NormalForm e = weak_normal_form(LazyElement(m));
  CHECK(e.m == 0);
  CHECK(sigma_trivial(e));
  CHECK(std::get<PrefixMap>(e.delta).is_identity());
  Perm b = m->config().b_gens[0];
  NormalForm t = weak_normal_form(LazyElement::tilde(m, 1, b));
  CHECK(t.m == 0);
  CHECK(t.f.empty());
  const auto& lines = std::get<LineFamily>(t.sigma).lines;
  REQUIRE(lines.size() == 1);
  CHECK(lines.begin()->first.empty());
  CHECK(lines.begin()->second == b);
  CHECK(std::get<PrefixMap>(t.delta).is_identity());
  CHECK(std::get<PrefixMap>(t.eta).is_identity());
}

TEST_CASE("consistent point of a single tilde") {
  auto m = alt(8);
  for (const auto& b : m->b_generators()) {
    LazyElement t = LazyElement::tilde(m, 1, b);
    ConsistentPoint p = find_consistent_point(t);
    CHECK(p.k <= 3);
    REQUIRE_FALSE(p.w.empty());
    CHECK(p.w.front() == 4);
  }
}

TEST_CASE("matrix witness examples") {
  auto m = build_el(4, 2, 5);
  MatFq e = elementary(m->field(), 8, 0, 1, 1);
  SlWitness w = sl_nonscalar_witness(LazyElement::tilde(m, 1, e));
  CHECK(w.level == 3);
  CHECK(w.verified);
  auto m3 = build_el(4, 3, 3);
  LazyElement minus = LazyElement::delta(m3, 1, MatFq::scalar(m3->field(), 4, 2));
  CHECK(scalar_class(weak_normal_form_sl(minus)));
  CHECK_THROWS_AS(sl_nonscalar_witness(minus), PreconditionError);
}

TEST_CASE("head normal form examples") {
  auto m = alt(8);
  LazyElement t = LazyElement::tilde(m, 1, m->b_generators()[0]);
  CHECK(head_normal_form(t).factors.size() == 1);
  CHECK_FALSE(head_equal(t, LazyElement(m)));
  Rng rng = Rng(20).split("reflexive");
  for (int k = 0; k < 20; ++k) {
    LazyElement g = capped_word(m, 1 + rng.below(6), 4, rng);
    CHECK(head_equal(g, g));
  }
  // t t has both factors at the base point o^n
  HeadNormalForm h = head_normal_form(t * t);
  CHECK(h.factors.size() == 1);
  CHECK(h.merges == 1);
}

TEST_CASE("germ of a tilde at the spine point") {
  auto m = alt(8);
  Perm b = m->config().b_gens[0];
  Germ g = germ_at(LazyElement::tilde(m, 1, b), Word{});
  CHECK_FALSE(g.trivial);
  REQUIRE(g.b.has_value());
  CHECK(std::get<Perm>(*g.b) == b);
  CHECK_FALSE(g.omega.has_value());
  CHECK(g.verified);
}
