#include "doctest.h"

#include "telescopes/instances.hpp"
#include "telescopes/report.hpp"
#include "telescopes/specfile.hpp"
#include "telescopes/verify.hpp"

using namespace telescopes;

namespace {

std::shared_ptr<const SpinalPermModel> alt(std::size_t max_level = 6) {
  return build_alt(AltParams{5, 2, max_level});
}

}  // namespace

TEST_CASE("Delta atoms") {
  auto m = alt();
  LazyElement id = LazyElement::delta(m, 1, m->identity(1));
  for (std::size_t j = 1; j <= 5; ++j) CHECK(id.trivial_at(j));
  LevelElem a2 = m->alpha(2);
  LazyElement d = LazyElement::delta(m, 2, a2);
  CHECK(d.project(1) == m->identity(1));
  CHECK(d.project(3) == m->iota(a2, 2, 3));
  // Delta_2(w) Delta_3(iota(w)^-1) lives on level 2 only
  LevelElem w = m->level_generators(2)[0];
  LazyElement pair = LazyElement::delta(m, 2, w) * LazyElement::delta(m, 3, m->iota(level_inv(w), 2, 3));
  CHECK_FALSE(pair.trivial_at(2));
  for (std::size_t j : {1u, 3u, 4u, 5u, 6u}) CHECK(pair.trivial_at(j));
  CHECK_FALSE(equal_up_to(LazyElement::delta(m, 2, w), LazyElement::delta(m, 3, m->iota(w, 2, 3)), 3));
}

TEST_CASE("tilde atoms against the product of phi") {
  auto m = alt();
  for (const auto& b : m->b_generators()) {
    LazyElement t = LazyElement::tilde(m, 1, b);
    CHECK(t.trivial_at(1));
    CHECK(t.project(2) == m->phi(2, b));
    LevelElem want = level_mul(level_mul(m->iota(m->phi(2, b), 2, 4), m->iota(m->phi(3, b), 3, 4)), m->phi(4, b));
    CHECK(t.project(4) == want);
    LazyElement t2 = LazyElement::tilde(m, 2, b);
    CHECK(t2.trivial_at(2));
    CHECK(t2.project(3) == m->phi(3, b));
  }
  CHECK(LazyElement::tilde(m, 1, m->b_identity()).trivial_at(5));
}

TEST_CASE("projection is a homomorphism") {
  auto m = alt();
  Rng rng(71);
  for (int t = 0; t < 30; ++t) {
    LazyElement g = random_generator_word(m, 1 + rng.below(10), rng);
    LazyElement h = random_generator_word(m, 1 + rng.below(10), rng);
    CHECK((g * g.inverse()).length() == 0);
    for (std::size_t j : {3u, 5u}) {
      CHECK((g * h).project(j) == level_mul(g.project(j), h.project(j)));
      CHECK(g.inverse().project(j) == level_inv(g.project(j)));
    }
    CHECK(commutator(g, h).project(4) ==
          level_mul(level_mul(g.project(4), h.project(4)), level_inv(level_mul(h.project(4), g.project(4)))));
    CHECK(conjugate(g, h).project(4) == level_mul(level_inv(h.project(4)), level_mul(g.project(4), h.project(4))));
  }
  CHECK_THROWS_AS(LazyElement::tilde(m, 1, m->b_generators()[0]).project(7), PreconditionError);
}

TEST_CASE("element grammar round trip") {
  auto m = alt();
  Rng rng(72);
  for (int t = 0; t < 30; ++t) {
    LazyElement g = random_generator_word(m, 1 + rng.below(6), rng);
    LazyElement h = parse_element(m, format_element(g));
    CHECK(format_element(h) == format_element(g));
    CHECK(equal_up_to(g, h, 4));
  }
  CHECK(parse_element(m, "D(1,id)").trivial_at(5));
  CHECK(parse_element(m, "1").length() == 0);
  CHECK(equal_at(parse_element(m, "T(1,b0)*T(1,b0)^-1"), LazyElement(m), 4));
  CHECK(equal_at(parse_element(m, "(T(1,b0)*D(1,g0))^-1"), parse_element(m, "D(1,g0)^-1*T(1,b0)^-1"), 4));
  CHECK(equal_at(parse_element(m, "D(2,a)"), LazyElement::delta(m, 2, m->alpha(2)), 3));
  for (const char* bad : {"T(1,b0", "Q(1,id)", "D(x,id)", "T(1,b0)*", "D(1,(x1 x9))"}) {
    CHECK_THROWS_AS(parse_element(m, bad), ParseError);
  }
  try {
    parse_element(m, "D(1,id)*Z");
  } catch (const ParseError& e) {
    CHECK(e.position() == 8);
  }
}

TEST_CASE("shifted telescopes") {
  auto m = alt(6);
  ModelPtr s = shift(m, 1);
  CHECK(s->max_level() == 5);
  CHECK(s->level_order(1) == m->level_order(2));
  for (const auto& b : m->b_generators()) CHECK(s->phi(2, b) == m->phi(3, b));
  CHECK(shift(m, 0)->level_order(2) == m->level_order(2));
}

TEST_CASE("spec files") {
  SpecFile s = parse_spec_file("# comment\nkind = alt\nd = 5\nr = 2\nmax_level = 7\n");
  CHECK(s.kind == "alt");
  CHECK(s.d == 5);
  CHECK(s.max_level == 7);
  ModelPtr m = build_model(s);
  CHECK(m->max_level() == 7);
  CHECK(m->level_order(1) == 60);
  CHECK_THROWS_AS(parse_spec_file("kind = alt\nd 5\n"), ParseError);
  CHECK_THROWS_AS(parse_spec_file("kind = alt\ncolour = 5\n"), ParseError);
  CHECK_THROWS_AS(parse_spec_file("d = 5\n"), ParseError);
  CHECK_THROWS_AS(load_spec_file("/nonexistent/file.tspec"), std::runtime_error);
  ModelPtr e = build_model(parse_spec_file("kind = el\nd = 4\nq = 2\nmax_level = 3\n"));
  CHECK(e->engine() == Engine::matrix);
  ModelPtr p = build_model(parse_spec_file("kind = psl\nd = 4\nq = 3\nmax_level = 2\n"));
  CHECK(p->engine() == Engine::matrix_mod_scalars);
}

TEST_CASE("reports serialize deterministically") {
  ReportDocument doc;
  doc.command = "verify";
  doc.spec_id = "alt(5,2)";
  doc.seed = 7;
  VerificationReport r;
  r.check_id = "x";
  r.method = "exact-evaluation";
  r.quantity("order", "60");
  r.add("a", "exact-evaluation", true);
  r.add("b", "exact-evaluation", false, "detail");
  r.seconds = 1.5;
  r.finalize();
  CHECK(r.verdict == Verdict::fail);
  doc.reports.push_back(r);
  std::string j1 = to_json(doc);
  doc.reports[0].seconds = 99;
  CHECK(to_json(doc) == j1);
  CHECK(j1.find("report.v1") != std::string::npos);
  CHECK(j1.find("seconds") == std::string::npos);
  CHECK(doc.overall() == Verdict::fail);
  CHECK(to_text(doc).find("fail") != std::string::npos);

  VerificationReport s;
  s.add(SubCheck{"cap", "normal-closure", Verdict::skipped_cap, ""});
  s.add("ok", "exact-evaluation", true);
  s.finalize();
  CHECK(s.verdict == Verdict::skipped_cap);
}
