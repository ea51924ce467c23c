// Acceptance run: one report per criterion, one PASS/FAIL line each.
// Usage: acceptance [--seed N] [--json FILE] [--only K]

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>

#include "telescopes/action.hpp"
#include "telescopes/normalform.hpp"
#include "telescopes/verify.hpp"

using namespace telescopes;

namespace {

BigInt fact(unsigned n) {
  BigInt r = 1;
  for (unsigned k = 2; k <= n; ++k) r *= k;
  return r;
}

BigInt pow_u(unsigned b, std::size_t e) {
  BigInt r = 1;
  for (std::size_t k = 0; k < e; ++k) r *= b;
  return r;
}

std::size_t tilde_count(const LazyElement& g) {
  return static_cast<std::size_t>(std::count_if(g.atoms().begin(), g.atoms().end(),
                                                [](const Atom& a) { return a.data->kind == AtomKind::tilde; }));
}

LazyElement capped_word(const ModelPtr& m, std::size_t len, std::size_t tildes, Rng& rng) {
  for (;;) {
    LazyElement g = random_generator_word(m, len, rng);
    if (tilde_count(g) <= tildes) return g;
  }
}

// Copies the sub-checks of a library report into r, prefixed by its id.
void absorb(VerificationReport& r, const VerificationReport& sub) {
  std::string tag = sub.check_id;
  if (!sub.spec_id.empty()) tag += "[" + sub.spec_id + "]";
  tag += "@" + std::to_string(sub.level_from) + ".." + std::to_string(sub.level_to);
  for (const auto& q : sub.quantities) r.quantity(tag + ": " + q.first, q.second);
  for (const auto& c : sub.subchecks) r.add(SubCheck{tag + ": " + c.name, c.method, c.verdict, c.detail});
  if (sub.subchecks.empty()) r.add(SubCheck{tag, sub.method, sub.verdict, ""});
}

void expect_order(VerificationReport& r, const VerificationReport& sub, const std::string& what, const BigInt& v) {
  const std::string* q = sub.find_quantity("order");
  r.add(what, "bsgs-order", q && *q == to_decimal(v), q ? "order " + *q : "no order computed");
}

VerificationReport start(const std::string& id, std::size_t from, std::size_t to) {
  VerificationReport r;
  r.check_id = id;
  r.level_from = from;
  r.level_to = to;
  r.method = "acceptance";
  return r;
}

std::string count_detail(std::size_t bad, std::size_t total, const std::string& first) {
  std::string s = std::to_string(total - bad) + "/" + std::to_string(total);
  if (bad) s += ", first at " + first;
  return s;
}

// ---- criteria

VerificationReport c1_axioms(std::uint64_t seed) {
  VerificationReport r = start("axioms-alt", 1, 6);
  VerifyOptions opt;
  opt.seed = seed;
  opt.exact_level = 4;
  auto m = build_alt(AltParams{5, 2, 6});
  r.spec_id = m->id();
  absorb(r, check_commutator_axiom(m, 6, opt));
  absorb(r, check_flexibility(m, 6, opt));
  VerificationReport g2 = check_generation_axiom(m, 2, opt), g3 = check_generation_axiom(m, 3, opt);
  absorb(r, g2);
  absorb(r, g3);
  expect_order(r, g2, "generation at level 2 has order 25!/2", fact(25) / 2);
  expect_order(r, g3, "generation at level 3 has order 125!/2", fact(125) / 2);
  r.finalize();
  return r;
}

VerificationReport c2_frame(std::uint64_t seed) {
  VerificationReport r = start("frame-alt", 1, 3);
  VerifyOptions opt;
  opt.seed = seed;
  auto m = build_alt(AltParams{5, 2, 4});
  r.spec_id = m->id();
  VerificationReport f = check_frame_surjectivity(m, 1, 3, default_generators(m), opt);
  absorb(r, f);
  expect_order(r, f, "truncated order is 60 (25!/2) (125!/2)", 60 * (fact(25) / 2) * (fact(125) / 2));
  r.finalize();
  return r;
}

VerificationReport c3_twogen(std::uint64_t seed) {
  VerificationReport r = start("two-generation-alt", 2, 3);
  VerifyOptions opt;
  opt.seed = seed;
  auto m = build_alt(AltParams{5, 2, 4});
  r.spec_id = m->id();
  TwoGenAlt tg = build_two_generators_alt(m, opt);
  r.quantity("n", std::to_string(tg.n));
  r.quantity("p", std::to_string(tg.p));
  r.add("n = 2", "construction", tg.n == 2);
  r.add("p = 13", "construction", tg.p == 13);
  r.add("Jordan test certifies <sigma1, sigma2> = Alt(25)", "jordan", tg.jordan.certified);
  // independent of the Jordan route
  r.add("<sigma1, sigma2> has order 25!/2", "bsgs-order", bsgs({tg.sigma1, tg.sigma2}).order() == fact(25) / 2);
  VerificationReport v = verify_two_generation(tg.a, tg.b, 2, 3, opt);
  absorb(r, v);
  expect_order(r, v, "<a, b> on levels 2..3 has order (25!/2)(125!/2)", (fact(25) / 2) * (fact(125) / 2));
  r.finalize();
  return r;
}

VerificationReport c4_identities(std::uint64_t seed) {
  VerificationReport r = start("telescope-identities", 1, 5);
  VerifyOptions opt;
  opt.seed = seed;
  auto m = build_alt(AltParams{5, 2, 5});
  r.spec_id = m->id();
  VerificationReport t = check_telescope_identities(m, 5, 4, 100, opt);
  absorb(r, t);
  r.finalize();
  return r;
}

VerificationReport c5_normal_form(std::uint64_t seed) {
  VerificationReport r = start("normal-form", 1, 14);
  auto m = build_alt(AltParams{5, 2, 14});
  r.spec_id = m->id();
  Rng rng = Rng(seed).split("acceptance-nf");
  std::size_t bad_m = 0, bad_eq = 0, max_m = 0;
  std::string first_m, first_eq;
  const std::size_t words = 500;
  for (std::size_t t = 0; t < words; ++t) {
    LazyElement g = random_generator_word(m, 1 + rng.below(10), rng);
    NormalForm nf = weak_normal_form(g);
    max_m = std::max(max_m, nf.m);
    if (nf.m > g.length() && bad_m++ == 0) first_m = format_element(g);
    if (!equal_up_to(g, reassemble(m, nf), nf.m + 4) && bad_eq++ == 0) first_eq = format_element(g);
  }
  r.quantity("words", std::to_string(words));
  r.quantity("largest m", std::to_string(max_m));
  r.add("m <= word length", "normal-form", bad_m == 0, count_detail(bad_m, words, first_m));
  r.add("reassembly equals the word at levels <= m+4", "exact-evaluation", bad_eq == 0,
        count_detail(bad_eq, words, first_eq));
  r.finalize();
  return r;
}

VerificationReport c6_consistency(std::uint64_t seed) {
  VerificationReport r = start("consistency", 1, 6);
  VerifyOptions opt;
  opt.seed = seed;
  auto m = build_alt(AltParams{5, 2, 8});
  r.spec_id = m->id();
  const SpinalConfig& cfg = m->config();
  LazyElement eps = epsilon_element(m);
  std::vector<std::uint32_t> cyc(cfg.points.size() - 1);
  for (std::uint32_t k = 0; k < cyc.size(); ++k) cyc[k] = k;
  if (cyc.size() % 2 == 0) cyc.pop_back();
  LazyElement tc = LazyElement::tilde(m, 1, Perm::cycle(static_cast<std::uint32_t>(cfg.points.size()), cyc));
  std::size_t eps_bad = 0, tc_bad = 0;
  for (std::size_t i = 1; i <= 6; ++i) {
    if (cons_volume(eps, i).num != 0) ++eps_bad;
    Ratio c = cons_volume(tc, i);
    BigInt d = pow_u(5, i);
    if (c.num * d != (d - 3) * c.den) ++tc_bad;
  }
  r.add("cons_i(epsilon) = 0 for i <= 6", "exact-evaluation", eps_bad == 0);
  r.add("cons_i(tilde(1,c)) = (5^i - 3)/5^i for i <= 6", "exact-evaluation", tc_bad == 0);
  absorb(r, check_consistency_suite(m, 6, 200, opt));

  auto big = build_alt(AltParams{5, 2, 13});
  Rng rng = Rng(seed).split("acceptance-consistent-points");
  std::size_t outside = 0, bad_k = 0, bad_pt = 0, bad_vol = 0;
  std::string first_k, first_pt, first_vol;
  for (std::size_t t = 0; t < 100; ++t) {
    LazyElement g = random_generator_word(big, 1 + rng.below(10), rng);
    Membership s = in_direct_sum(g);
    if (s.member) continue;
    ++outside;
    const ConsistentPoint& p = *s.witness;
    if (p.k > s.nf.m + 3 && bad_k++ == 0) first_k = format_element(g);
    bool moved = std::get<PrefixMap>(g.project(p.k)).apply(p.w) != p.w;
    if ((!moved || !is_consistent_at(g, p.w)) && bad_pt++ == 0) first_pt = format_element(g);
    for (std::size_t i = p.k; i <= 6; ++i) {
      Ratio v = support_volume(g, i);
      // vol_i >= 5^-k
      if (v.num * pow_u(5, p.k) < v.den && bad_vol++ == 0) first_vol = format_element(g) + " at level " + std::to_string(i);
    }
  }
  r.quantity("words outside the direct sum", std::to_string(outside));
  r.add("consistent moved point at k <= m+3", "normal-form", bad_k == 0 && outside > 0, count_detail(bad_k, outside, first_k));
  r.add("witness is moved and consistent", "exact-evaluation", bad_pt == 0, count_detail(bad_pt, outside, first_pt));
  r.add("vol_i >= 5^-k for k <= i <= 6", "exact-evaluation", bad_vol == 0, bad_vol ? "first at " + first_vol : "");
  r.finalize();
  return r;
}

VerificationReport c7_simplicity(std::uint64_t seed) {
  VerificationReport r = start("simplicity-witnesses", 1, 12);
  auto m = build_alt(AltParams{5, 2, 12});
  r.spec_id = m->id();
  Rng rng = Rng(seed).split("acceptance-simplicity");
  std::size_t found = 0, bad = 0;
  std::string first;
  while (found < 50) {
    LazyElement g = random_generator_word(m, 1 + rng.below(8), rng);
    if (in_direct_sum(g).member) continue;
    ++found;
    SimplicityWitness w = simplicity_witness(g);
    bool ok = w.verified && w.commutator && !std::get<PrefixMap>(w.atom).is_identity() &&
              check_delta_atom(*w.commutator, w.k + 1, w.atom, m->max_level()) &&
              equal_up_to(*w.commutator, LazyElement::delta(m, w.k + 1, w.atom), m->max_level());
    if (!ok && bad++ == 0) first = format_element(g);
  }
  r.add("commutator is a nontrivial Delta_(k+1) atom at every level <= 12", "exact-evaluation", bad == 0,
        count_detail(bad, found, first));

  auto e = build_el(4, 2, 5);
  Rng srng = Rng(seed).split("acceptance-sl-witness");
  std::size_t sfound = 0, sbad = 0, scalar = 0;
  std::string sfirst;
  while (sfound < 20) {
    LazyElement g = capped_word(e, 1 + srng.below(6), 2, srng);
    NormalForm nf = weak_normal_form_sl(g);
    if (scalar_class(nf)) {
      ++scalar;
      continue;
    }
    ++sfound;
    SlWitness w = sl_nonscalar_witness(g);
    bool ok = w.verified && w.commutator && w.level <= nf.m + 3 && !is_scalar(w.atom).has_value() &&
              equal_up_to(*w.commutator, LazyElement::delta(e, w.level, w.atom), e->max_level());
    if (!ok && sbad++ == 0) sfirst = format_element(g);
  }
  r.quantity("scalar-class words skipped", std::to_string(scalar));
  r.add("non-scalar Delta atom at level <= m+3 over E_4(F_2)", "exact-evaluation", sbad == 0,
        count_detail(sbad, sfound, sfirst));
  r.finalize();
  return r;
}

VerificationReport c8_linear(std::uint64_t seed) {
  VerificationReport r = start("linear-suite", 1, 4);
  VerifyOptions opt;
  opt.seed = seed;
  for (unsigned q : {2u, 3u}) {
    auto m = build_el(4, q, 4);
    absorb(r, check_commutator_axiom(m, 4, opt));
    absorb(r, check_flexibility(m, 4, opt));
    absorb(r, check_scalar_transport(m, 4));
  }
  absorb(r, check_scalar_transport(build_psl(4, 3, 4), 4));
  VerificationReport g = check_generation_axiom(build_el(4, 2, 3), 2, opt);
  absorb(r, g);
  r.add("transvection closure certifies 240 positions", "transvection-closure",
        g.find_quantity("positions") && *g.find_quantity("positions") == "240");
  for (unsigned q : {2u, 3u, 5u}) absorb(r, check_linear_noncommute(q, 100, opt));
  r.finalize();
  return r;
}

VerificationReport c9_embedding(std::uint64_t seed) {
  VerificationReport r = start("embedding-alt5", 1, 4);
  VerifyOptions opt;
  opt.seed = seed;
  opt.exact_level = 3;
  FiniteGroup a5 = FiniteGroup::builtin("alt5");
  auto m = build_embed(EmbedParams{a5, 4});
  r.spec_id = m->id();
  absorb(r, check_commutator_axiom(m, 4, opt));
  absorb(r, check_flexibility(m, 4, opt));
  VerificationReport g = check_generation_axiom(m, 2, opt);
  absorb(r, g);
  expect_order(r, g, "generation at level 2 has order 360!/2", fact(360) / 2);
  std::vector<LazyElement> emb = directed_tree_embedding(m, a5);
  std::size_t trivial = 0;
  for (std::size_t k = 1; k < emb.size(); ++k)
    if (emb[k].trivial_at(3)) ++trivial;
  r.add("pi_3(g~) != 1 for the 59 nontrivial g", "exact-evaluation", trivial == 0 && emb.size() == 60,
        std::to_string(emb.size() - 1 - trivial) + "/" + std::to_string(emb.size() - 1));
  Rng rng = Rng(seed).split("acceptance-embed-sum");
  std::size_t inside = 0;
  for (int t = 0; t < 10; ++t) {
    std::size_t k = 1 + rng.below(emb.size() - 1);
    if (in_direct_sum(emb[k]).member) ++inside;
  }
  r.add("g~ outside the direct sum for 10 sampled g", "normal-form", inside == 0);
  r.finalize();
  return r;
}

VerificationReport c10_glued(std::uint64_t seed) {
  VerificationReport r = start("glued-frame", 1, 5);
  VerifyOptions opt;
  opt.seed = seed;
  auto m = build_alt(AltParams{5, 2, 7});
  r.spec_id = m->id();
  VerificationReport g = check_glued_frame(m, 2, 5, 20, opt);
  absorb(r, g);
  expect_order(r, g, "<G, G^eps> on levels 1..2 has order 60 (25!/2)", 60 * (fact(25) / 2));
  r.finalize();
  return r;
}

LimitPoint random_point(const TelescopeModel& m, std::size_t max_len, Rng& rng) {
  std::size_t len = rng.below(max_len + 1);
  return canonical(m, m.alphabet().unrank(rng.below(m.alphabet().count(len)), len));
}

VerificationReport c11_action(std::uint64_t seed) {
  VerificationReport r = start("action", 1, 20);
  VerifyOptions opt;
  opt.seed = seed;
  auto m = build_alt(AltParams{5, 2, 20});
  r.spec_id = m->id();
  Rng rng = Rng(seed).split("acceptance-limit");
  std::size_t bad_assoc = 0, bad_oracle = 0, no_room = 0;
  std::string first_assoc, first_oracle;
  const std::size_t triples = 200;
  for (std::size_t t = 0; t < triples; ++t) {
    LazyElement g = random_generator_word(m, 1 + rng.below(3), rng);
    LazyElement h = random_generator_word(m, 1 + rng.below(3), rng);
    LimitPoint x = random_point(*m, 3, rng);
    LimitAction hx = act_limit(h, x);
    LimitAction ghx = act_limit(g * h, x);
    if (!(act_limit(g, hx.point).point == ghx.point) && bad_assoc++ == 0) first_assoc = "triple " + std::to_string(t);
    for (const auto& [e, a] : {std::pair{h, hx}, std::pair{g * h, ghx}}) {
      std::size_t j = a.t + 5;
      if (j > m->max_level()) {
        ++no_room;
        continue;
      }
      Word img = std::get<PrefixMap>(e.project(j)).apply(at_level(*m, x, j));
      if (!(canonical(*m, img) == a.point) && bad_oracle++ == 0) first_oracle = "triple " + std::to_string(t);
    }
  }
  r.add("(gh).x = g.(h.x)", "exact-evaluation", bad_assoc == 0, count_detail(bad_assoc, triples, first_assoc));
  r.add("limit action agrees with the level action at t+5", "exact-evaluation", bad_oracle == 0 && no_room == 0,
        count_detail(bad_oracle, 2 * triples, first_oracle) + (no_room ? ", " + std::to_string(no_room) + " above max_level" : ""));
  absorb(r, check_transitivity_limit(m, 1, 50, opt));
  absorb(r, check_transitivity_limit(m, 2, 50, opt));

  auto p = build_alt(AltParams{5, 2, 8});
  std::size_t gi = 0;
  for (const auto& g : default_generators(p)) {
    auto counts = bounded_type_profile(g, 6);
    bool ok = counts.size() >= 6;
    std::string shown;
    for (std::size_t l = 2; l <= 6 && ok; ++l) {
      ok = counts[l - 1] <= 3 && counts[l - 1] == counts[1];
      shown += (l > 2 ? "," : "") + std::to_string(counts[l - 1]);
    }
    r.add("bounded type profile of generator " + std::to_string(gi++) + " constant <= 3 on levels 2..6",
          "exact-evaluation", ok, shown);
  }
  r.finalize();
  return r;
}

VerificationReport c12_head(std::uint64_t seed) {
  VerificationReport r = start("head-word-problem", 1, 10);
  auto m = build_alt(AltParams{5, 2, 10});
  r.spec_id = m->id();
  Rng rng = Rng(seed).split("acceptance-head");
  std::size_t bad_sum = 0, bad_tilde = 0;
  std::string first_sum, first_tilde;
  for (int t = 0; t < 20; ++t) {
    LazyElement u = capped_word(m, 1 + rng.below(4), 2, rng), v = capped_word(m, 1 + rng.below(4), 1, rng);
    std::size_t j = 1 + rng.below(4);
    LevelElem w = m->random_level_element(j, rng);
    while (std::get<PrefixMap>(w).is_identity()) w = m->random_level_element(j, rng);
    LazyElement g = u * v;
    LazyElement h = u * LazyElement::one_hot(m, j, w) * v;
    if (!head_equal(g, h) && bad_sum++ == 0) first_sum = format_element(h);
  }
  for (int t = 0; t < 20; ++t) {
    LazyElement u = capped_word(m, 1 + rng.below(4), 2, rng), v = capped_word(m, 1 + rng.below(4), 1, rng);
    BElem b = m->b_random(rng);
    while (std::get<Perm>(b).is_identity()) b = m->b_random(rng);
    LazyElement g = u * v;
    LazyElement h = u * LazyElement::tilde(m, 1, b) * v;
    if (head_equal(g, h) && bad_tilde++ == 0) first_tilde = format_element(h);
  }
  r.add("direct-sum perturbations are head-equal", "head-normal-form", bad_sum == 0, count_detail(bad_sum, 20, first_sum));
  r.add("tilde perturbations are not head-equal", "head-normal-form", bad_tilde == 0, count_detail(bad_tilde, 20, first_tilde));
  r.finalize();
  return r;
}

struct Criterion {
  int id;
  std::string name;
  double budget_s;  // 0: no runtime bound
  std::function<VerificationReport(std::uint64_t)> run;
};

std::vector<Criterion> criteria() {
  return {
      {1, "axiom suite on A(5,2)", 300, c1_axioms},
      {2, "frame check on levels 1..3", 600, c2_frame},
      {3, "two generators", 600, c3_twogen},
      {4, "telescope identities", 0, c4_identities},
      {5, "weak normal form", 0, c5_normal_form},
      {6, "consistency", 0, c6_consistency},
      {7, "simplicity witnesses", 0, c7_simplicity},
      {8, "SL/PSL suite", 0, c8_linear},
      {9, "embedding telescope H(Alt(5))", 900, c9_embedding},
      {10, "glued frame", 0, c10_glued},
      {11, "action suite", 0, c11_action},
      {12, "head word problem", 0, c12_head},
  };
}

// Exceptions become a failed report so the remaining criteria still run.
VerificationReport guarded(const Criterion& c, std::uint64_t seed) {
  try {
    return c.run(seed);
  } catch (const std::exception& e) {
    VerificationReport r = start("criterion-" + std::to_string(c.id), 0, 0);
    r.add("ran to completion", "acceptance", false, e.what());
    r.finalize();
    return r;
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t seed = 20240601;
  std::string json_path;
  int only = 0;
  for (int k = 1; k + 1 < argc; k += 2) {
    std::string a = argv[k];
    if (a == "--seed") seed = std::stoull(argv[k + 1]);
    else if (a == "--json") json_path = argv[k + 1];
    else if (a == "--only") only = std::stoi(argv[k + 1]);
  }

  ReportDocument doc;
  doc.command = "acceptance";
  doc.spec_id = "acceptance";
  doc.seed = seed;
  int failures = 0;
  std::vector<Criterion> cs = criteria();
  for (const auto& c : cs) {
    if (only && c.id != only) continue;
    auto t0 = std::chrono::steady_clock::now();
    VerificationReport r = guarded(c, seed);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.seconds = secs;
    bool ok = r.passed() && (c.budget_s == 0 || secs <= c.budget_s);
    if (!ok) ++failures;
    std::printf("%s criterion %2d: %s (%.1fs%s)\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                c.budget_s > 0 ? (", budget " + std::to_string(static_cast<int>(c.budget_s)) + "s").c_str() : "");
    if (!ok)
      for (const auto& s : r.subchecks)
        if (s.verdict != Verdict::pass)
          std::printf("    %s: %s [%s] %s\n", verdict_name(s.verdict).c_str(), s.name.c_str(), s.method.c_str(),
                      s.detail.c_str());
    std::fflush(stdout);
    doc.reports.push_back(std::move(r));
  }

  if (!only || only == 13) {
    // Rerun every suite with the same seed and compare the serialized reports.
    ReportDocument again = doc;
    again.reports.clear();
    auto t0 = std::chrono::steady_clock::now();
    if (only == 13) doc.reports.clear();
    for (const auto& c : cs) {
      again.reports.push_back(guarded(c, seed));
      if (only == 13) doc.reports.push_back(guarded(c, seed));
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string a = to_json(doc), b = to_json(again);
    bool ok = a == b;
    if (!ok) ++failures;
    std::printf("%s criterion 13: byte-identical JSON on rerun (%zu bytes, %.1fs)\n", ok ? "PASS" : "FAIL", a.size(), secs);
  }

  if (!json_path.empty()) {
    std::ofstream out(json_path);
    out << to_json(doc);
  }
  return failures == 0 ? 0 : 1;
}
