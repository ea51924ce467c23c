#include "doctest.h"

#include "telescopes/normalform.hpp"
#include "telescopes/verify.hpp"

using namespace telescopes;

namespace {

BigInt fact(unsigned n) {
  BigInt r = 1;
  for (unsigned k = 2; k <= n; ++k) r *= k;
  return r;
}

BigInt pow5(std::size_t i) {
  BigInt r = 1;
  for (std::size_t k = 0; k < i; ++k) r *= 5;
  return r;
}

bool ratio_is(const Ratio& r, const BigInt& num, const BigInt& den) { return r.num * den == num * r.den; }

}  // namespace

TEST_CASE("axioms on the alternating telescope and its corruption") {
  ModelPtr m = build_alt(AltParams{5, 2, 6});
  CHECK(check_commutator_axiom(m, 5).passed());
  CHECK(check_flexibility(m, 5).passed());
  ModelPtr bad = build_alt_corrupted(AltParams{5, 2, 6});
  CHECK(check_commutator_axiom(bad, 5).verdict == Verdict::fail);
}

TEST_CASE("axioms on the linear telescopes") {
  for (unsigned q : {2u, 3u}) {
    ModelPtr m = build_el(4, q, 3);
    CHECK(check_commutator_axiom(m, 3).passed());
    CHECK(check_flexibility(m, 3).passed());
    CHECK(check_scalar_transport(m, 3).passed());
  }
  CHECK(check_commutator_axiom(build_psl(4, 3, 3), 3).passed());
}

TEST_CASE("the non-flexible toy telescope fails F2") {
  ModelPtr t = build_toy(6);
  VerificationReport r = check_flexibility(t, 6);
  CHECK(r.verdict == Verdict::fail);
}

TEST_CASE("generation axiom at level 2") {
  ModelPtr m = build_alt(AltParams{5, 2, 4});
  VerificationReport r = check_generation_axiom(m, 2);
  CHECK(r.passed());
  REQUIRE(r.find_quantity("order") != nullptr);
  CHECK(*r.find_quantity("order") == to_decimal(fact(25) / 2));
  ModelPtr e = build_el(4, 2, 3);
  VerificationReport s = check_generation_axiom(e, 2);
  CHECK(s.passed());
  CHECK(*s.find_quantity("positions") == "240");
}

TEST_CASE("frame surjectivity and its negative control") {
  ModelPtr m = build_alt(AltParams{5, 2, 4});
  VerificationReport r = check_frame_surjectivity(m, 1, 2, default_generators(m));
  CHECK(r.passed());
  CHECK(*r.find_quantity("order") == to_decimal(60 * (fact(25) / 2)));
  std::vector<LazyElement> deltas;
  for (const auto& g : default_generators(m))
    if (g.atoms().front().data->kind == AtomKind::delta) deltas.push_back(g);
  CHECK(check_frame_surjectivity(m, 1, 2, deltas).verdict == Verdict::fail);
  CHECK(*truncated_order(default_generators(m), 1, 1) == 60);
}

TEST_CASE("Nagura primes") {
  CHECK(nagura_prime(25) == 13);
  CHECK(nagura_prime(125) == 67);
  CHECK(nagura_prime(625) == 313);
  CHECK(nagura_prime(64) == 37);
}

TEST_CASE("telescope identities") {
  CHECK(check_telescope_identities(build_alt(AltParams{5, 2, 5}), 4, 3, 10).passed());
  CHECK(check_telescope_identities(build_el(4, 2, 4), 4, 2, 3).passed());
}

TEST_CASE("constructive non-commuting routine") {
  for (unsigned q : {2u, 3u, 5u}) CHECK(check_linear_noncommute(q, 20).passed());
}

TEST_CASE("two generators of the alternating frame") {
  auto m = build_alt(AltParams{5, 2, 4});
  TwoGenAlt tg = build_two_generators_alt(m);
  CHECK(tg.n == 2);
  CHECK(tg.p == 13);
  CHECK(tg.jordan.certified);
  PermGroup s = bsgs({tg.sigma1, tg.sigma2});
  CHECK(s.order() == fact(25) / 2);
  VerificationReport r = verify_two_generation(tg.a, tg.b, 2, 2);
  CHECK(r.passed());
  CHECK(*r.find_quantity("order") == to_decimal(fact(25) / 2));
  // a alone generates a cyclic group
  CHECK(*truncated_order({tg.a}, 2, 2) < fact(25) / 2);
}

TEST_CASE("two generator placement for the linear telescope") {
  auto m = build_el(4, 2, 4);
  TwoGenSl tg = build_two_generators_sl(m);
  CHECK(tg.n == 3);
  CHECK(tg.p == 37);
}

TEST_CASE("consistency volumes") {
  ModelPtr m = build_alt(AltParams{5, 2, 7});
  const auto& cfg = dynamic_cast<const SpinalPermModel&>(*m).config();
  LazyElement eps = epsilon_element(m);
  std::vector<std::uint32_t> cyc{0, 1, 2, 3, 4, 5, 6, 7, 8};
  LazyElement tc = LazyElement::tilde(m, 1, Perm::cycle(static_cast<std::uint32_t>(cfg.points.size()), cyc));
  for (std::size_t i = 1; i <= 5; ++i) {
    CHECK(cons_volume(eps, i).num == 0);
    CHECK(ratio_is(cons_volume(tc, i), pow5(i) - 3, pow5(i)));
    CHECK(ratio_is(cons_volume(LazyElement(m), i), 1, 1));
  }
  CHECK(check_consistency_suite(m, 5, 30).passed());
}

TEST_CASE("glued frame") {
  ModelPtr m = build_alt(AltParams{5, 2, 5});
  VerificationReport r = check_glued_frame(m, 2, 4, 10);
  CHECK(r.passed());
  CHECK(*r.find_quantity("order") == to_decimal(60 * (fact(25) / 2)));
}

TEST_CASE("random generator words use only the generating atoms") {
  ModelPtr m = build_alt(AltParams{5, 2, 4});
  Rng rng(91);
  for (int t = 0; t < 20; ++t) {
    LazyElement g = random_generator_word(m, 10, rng);
    CHECK(g.length() <= 10);
    for (const auto& a : g.atoms()) {
      CHECK(a.data->level == 1);
      CHECK((a.data->kind == AtomKind::delta || a.data->kind == AtomKind::tilde));
    }
  }
}
