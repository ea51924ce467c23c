#include "doctest.h"

#include "telescopes/action.hpp"
#include "telescopes/normalform.hpp"

using namespace telescopes;

namespace {

LimitPoint random_point(const TelescopeModel& m, std::size_t max_len, Rng& rng) {
  std::size_t len = rng.below(max_len + 1);
  return canonical(m, m.alphabet().unrank(rng.below(m.alphabet().count(len)), len));
}

}  // namespace

TEST_CASE("limit points are stored without trailing spine letters") {
  auto m = build_alt(AltParams{5, 2, 8});
  const Letter o = spine_letter(*m);
  CHECK(o == 4);
  LimitPoint x = canonical(*m, Word{0, 4, 4});
  CHECK(x.level == 1);
  CHECK(x.w == Word{0});
  CHECK(at_level(*m, x, 3) == Word{0, 4, 4});
  CHECK(parse_limit(*m, format_limit(*m, x)) == x);
  CHECK_THROWS_AS(parse_limit(*m, "x1x2"), ParseError);
  CHECK_THROWS_AS(parse_limit(*m, "x1x2@3"), ParseError);
}

TEST_CASE("limit action agrees with the level action and composes") {
  auto m = build_alt(AltParams{5, 2, 12});
  Rng rng = Rng(21).split("limit");
  for (int t = 0; t < 40; ++t) {
    LazyElement g = random_generator_word(m, 1 + rng.below(3), rng);
    LazyElement h = random_generator_word(m, 1 + rng.below(3), rng);
    LimitPoint x = random_point(*m, 2, rng);
    LimitAction hx = act_limit(h, x);
    LimitAction ghx = act_limit(g * h, x);
    CHECK(act_limit(g, hx.point).point == ghx.point);
    std::size_t j = hx.t + 5;
    if (j <= m->max_level()) {
      Word img = std::get<PrefixMap>(h.project(j)).apply(at_level(*m, x, j));
      CHECK(canonical(*m, img) == hx.point);
    }
  }
}

TEST_CASE("limit action level budget") {
  auto m = build_alt(AltParams{5, 2, 4});
  LazyElement t = LazyElement::tilde(m, 1, m->b_generators()[0]);
  CHECK_THROWS_AS(act_limit(t * t * t, LimitPoint{1, Word{0}}), CapExceeded);
  CHECK_THROWS_AS(stabilization_level(LazyElement::epsilon(build_embed(EmbedParams{FiniteGroup::builtin("alt5"), 3})), 1),
                  PreconditionError);
}

TEST_CASE("Cantor prefixes") {
  auto m = build_alt(AltParams{5, 2, 12});
  const Letter o = spine_letter(*m);
  LazyElement t = LazyElement::tilde(m, 1, m->b_generators()[0]);
  CantorPoint xi{Word{0, 1}, true};
  CHECK(parse_cantor(*m, format_cantor(*m, xi)).prefix == xi.prefix);
  CantorImage img = act_cantor_prefix(t, xi, 6);
  CHECK(img.complete);
  CHECK(img.status == "ok");
  Word rep = xi.prefix;
  rep.resize(8, o);
  Word direct = std::get<PrefixMap>(t.project(8)).apply(rep);
  CHECK(Word(direct.begin(), direct.begin() + 6) == img.prefix);

  CantorPoint open{Word{0}, false};
  CantorImage part = act_cantor_prefix(t, open, 6);
  CHECK_FALSE(part.complete);
  CHECK(part.status != "ok");
  CHECK(part.stable_len < 6);
}

TEST_CASE("bounded type profile of the generators is small and constant") {
  auto m = build_alt(AltParams{5, 2, 8});
  for (const auto& g : default_generators(m)) {
    auto counts = bounded_type_profile(g, 6);
    for (std::size_t l = 2; l <= 6; ++l) {
      CHECK(counts[l - 1] <= 3);
      CHECK(counts[l - 1] == counts[1]);
    }
  }
  CHECK_THROWS_AS(bounded_type_profile(default_generators(m)[0], 7), PreconditionError);
}

TEST_CASE("transitivity witnesses") {
  ModelPtr m = build_alt(AltParams{5, 2, 6});
  Rng rng = Rng(22).split("trans");
  for (int t = 0; t < 10; ++t) {
    std::vector<LimitPoint> xs, ys;
    while (xs.size() < 2) {
      LimitPoint p = random_point(*m, 2, rng);
      if (std::find(xs.begin(), xs.end(), p) == xs.end()) xs.push_back(p);
    }
    while (ys.size() < 2) {
      LimitPoint p = random_point(*m, 2, rng);
      if (std::find(ys.begin(), ys.end(), p) == ys.end()) ys.push_back(p);
    }
    TransitivityWitness w = transitivity_witness(m, xs, ys);
    LazyElement g = LazyElement::delta(m, w.level, w.omega);
    for (std::size_t k = 0; k < 2; ++k) CHECK(act_limit(g, xs[k]).point == ys[k]);
  }
  std::vector<LimitPoint> rep{LimitPoint{1, Word{0}}, LimitPoint{1, Word{0}}};
  CHECK_THROWS_AS(transitivity_witness(m, rep, rep), PreconditionError);
  VerificationReport r = check_transitivity_limit(m, 2, 10);
  CHECK(r.passed());
}

TEST_CASE("projective action on spanned lines") {
  ModelPtr m = build_el(4, 3, 4);
  CHECK(check_projective_action(m, 4).passed());
  CHECK_THROWS_AS(check_projective_action(build_alt(AltParams{5, 2, 4}), 4), PreconditionError);
}
