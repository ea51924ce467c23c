#include <algorithm>
#include <set>

#include "telescopes/verify.hpp"

namespace telescopes {

namespace {

bool has_epsilon_atom(const LazyElement& g) {
  for (const auto& a : g.atoms())
    if (a.data->kind == AtomKind::epsilon) return true;
  return false;
}

const PrefixMap& as_prefix_map(const LevelElem& x) {
  const auto* p = std::get_if<PrefixMap>(&x);
  if (!p) throw PreconditionError("consistency needs a permutation telescope on words");
  return *p;
}

BigInt words_at(const TelescopeModel& m, std::size_t i) {
  return BigInt(static_cast<unsigned long>(m.alphabet().count(m.word_length(i))));
}

std::string level_tag(std::size_t i) { return "i=" + std::to_string(i); }

}  // namespace

std::string format_ratio(const Ratio& r) { return to_decimal(r.num) + "/" + to_decimal(r.den); }

std::size_t epsilon_check_depth(const TelescopeModel& model, std::size_t i) {
  return std::min(model.max_level(), i + model.kappa());
}

std::vector<char> consistent_points(const LazyElement& g, std::size_t i, std::size_t upto) {
  const TelescopeModel& m = g.model();
  if (upto == 0) upto = has_epsilon_atom(g) ? epsilon_check_depth(m, i) : m.max_level();
  if (upto > m.max_level() || i > upto || i == 0) throw PreconditionError("consistency guard exceeded");
  const PrefixMap base = as_prefix_map(g.project(i));
  std::vector<PrefixMap> deeper;
  for (std::size_t j = i + 1; j <= upto; ++j) deeper.push_back(as_prefix_map(g.project(j)));
  const Alphabet& al = m.alphabet();
  std::uint64_t n = al.count(i);
  std::vector<char> out(n, 1);
  for (std::uint64_t k = 0; k < n; ++k) {
    Word w = al.unrank(k, i);
    Word img = base.apply(w);
    for (const auto& p : deeper) {
      auto pi = p.prefix_image(w);
      if (!pi || *pi != img) {
        out[k] = 0;
        break;
      }
    }
  }
  return out;
}

Ratio cons_volume(const LazyElement& g, std::size_t i, std::size_t upto) {
  auto pts = consistent_points(g, i, upto);
  return {BigInt(static_cast<unsigned long>(std::count(pts.begin(), pts.end(), 1))), words_at(g.model(), i)};
}

Ratio support_volume(const LazyElement& g, std::size_t i) {
  const PrefixMap p = as_prefix_map(g.project(i));
  return {BigInt(static_cast<unsigned long>(p.moved_count())), words_at(g.model(), i)};
}

Ratio consistent_moved_volume(const LazyElement& g, std::size_t i, std::size_t upto) {
  auto pts = consistent_points(g, i, upto);
  const PrefixMap p = as_prefix_map(g.project(i));
  const Alphabet& al = g.model().alphabet();
  unsigned long c = 0;
  for (std::uint64_t k = 0; k < pts.size(); ++k) {
    if (!pts[k]) continue;
    Word w = al.unrank(k, i);
    if (p.apply(w) != w) ++c;
  }
  return {BigInt(c), words_at(g.model(), i)};
}

LazyElement epsilon_element(const ModelPtr& model) { return LazyElement::epsilon(model); }

VerificationReport check_consistency_suite(const ModelPtr& model, std::size_t L, std::size_t pairs,
                                           const VerifyOptions& opt) {
  const auto* sp = dynamic_cast<const SpinalPermModel*>(model.get());
  if (!sp || !sp->has_epsilon()) throw PreconditionError("consistency suite needs an alternating telescope");
  if (L > model->max_level()) throw PreconditionError("level above max_level");
  const SpinalConfig& cfg = sp->config();
  const Alphabet& al = cfg.alphabet;
  const Letter o = cfg.spine;
  std::set<Letter> rows;
  for (auto [a, c] : cfg.points) rows.insert(a);

  VerificationReport r;
  r.check_id = "consistency";
  r.spec_id = model->id();
  r.level_from = 1;
  r.level_to = L;
  r.method = "exact-evaluation";

  LazyElement id(model), eps = epsilon_element(model);
  // c moves every B-point but the last, so every row of the B-points is hit.
  std::vector<std::uint32_t> cyc(cfg.points.size() - 1);
  for (std::uint32_t k = 0; k < cyc.size(); ++k) cyc[k] = k;
  if (cyc.size() % 2 == 0) cyc.pop_back();
  LazyElement tc = LazyElement::tilde(model, 1, Perm::cycle(static_cast<std::uint32_t>(cfg.points.size()), cyc));

  std::size_t id_bad = 0, eps_bad = 0, tilde_bad = 0;
  std::string first_tilde;
  for (std::size_t i = 1; i <= L; ++i) {
    Ratio ci = cons_volume(id, i);
    if (ci.num != ci.den) ++id_bad;
    Ratio ce = cons_volume(eps, i);
    if (ce.num != 0) ++eps_bad;
    // the r+1 inconsistent words x_d^i and x_d^(i-1) x_a
    std::set<std::uint64_t> expect;
    expect.insert(al.rank(Word(i, o)));
    for (Letter a : rows) {
      Word w(i - 1, o);
      w.push_back(a);
      expect.insert(al.rank(w));
    }
    auto pts = consistent_points(tc, i);
    std::set<std::uint64_t> got;
    for (std::uint64_t k = 0; k < pts.size(); ++k)
      if (!pts[k]) got.insert(k);
    Ratio ct{BigInt(static_cast<unsigned long>(pts.size() - got.size())), words_at(*model, i)};
    r.quantity("cons_" + std::to_string(i) + "(tilde c)", format_ratio(ct));
    if (got != expect && tilde_bad++ == 0) first_tilde = level_tag(i);
  }
  r.add("cons_i(identity) = 1", "exact-evaluation", id_bad == 0, std::to_string(L) + " levels");
  r.add("cons_i(epsilon) = 0", "exact-evaluation", eps_bad == 0,
        std::to_string(L) + " levels, depth i+" + std::to_string(model->kappa()));
  r.add("tilde(1,c) inconsistent exactly at x_d^i and x_d^(i-1)x_a", "exact-evaluation", tilde_bad == 0,
        tilde_bad ? "first at " + first_tilde : std::to_string(L) + " levels");

  Rng rng = Rng(opt.seed).split("consistency-pairs");
  std::size_t sub_bad = 0, set_bad = 0;
  std::string first_sub;
  for (std::size_t t = 0; t < pairs; ++t) {
    LazyElement g = random_generator_word(model, 1 + rng.below(4), rng);
    LazyElement h = random_generator_word(model, 1 + rng.below(4), rng);
    std::size_t i = 1 + rng.below(L);
    auto cg = consistent_points(g, i), ch = consistent_points(h, i), cgh = consistent_points(g * h, i);
    auto count = [](const std::vector<char>& v) {
      return static_cast<long>(std::count(v.begin(), v.end(), 1));
    };
    long n = static_cast<long>(cg.size());
    // cons(gh) >= cons(g) + cons(h) - 1, scaled by d^i
    if (count(cgh) < count(cg) + count(ch) - n && sub_bad++ == 0) first_sub = "pair " + std::to_string(t);
    const PrefixMap ph = as_prefix_map(h.project(i));
    bool ok = true;
    for (std::uint64_t k = 0; k < cg.size() && ok; ++k) {
      if (!ch[k]) continue;
      std::uint64_t hk = al.rank(ph.apply(al.unrank(k, i)));
      if (cg[hk] && !cgh[k]) ok = false;
    }
    if (!ok) ++set_bad;
  }
  r.add("cons_i(gh) >= cons_i(g) + cons_i(h) - 1", "exact-evaluation", sub_bad == 0,
        std::to_string(pairs) + " pairs" + (sub_bad ? ", first at " + first_sub : ""));
  r.add("w consistent for h and h(w) for g implies w consistent for gh", "exact-evaluation", set_bad == 0,
        std::to_string(pairs) + " pairs");
  r.finalize();
  return r;
}

VerificationReport check_glued_frame(const ModelPtr& model, std::size_t L, std::size_t invariance_level,
                                     std::size_t samples, const VerifyOptions& opt) {
  const TelescopeModel& m = *model;
  VerificationReport r;
  r.check_id = "glued-frame";
  r.spec_id = m.id();
  r.level_from = 1;
  r.level_to = L;
  r.method = "bsgs-order";
  LazyElement eps = epsilon_element(model);
  std::vector<LazyElement> gens = default_generators(model);
  std::size_t base = gens.size();
  for (std::size_t k = 0; k < base; ++k) gens.push_back(conjugate(gens[k], eps));
  r.quantity("generators", std::to_string(gens.size()));
  auto order = truncated_order(gens, 1, L, opt);
  if (!order) {
    r.add(SubCheck{"glued truncated order", "bsgs-order", Verdict::skipped_cap, "degree above cap"});
  } else {
    BigInt expect = product_of_level_orders(m, 1, L);
    r.quantity("order", to_decimal(*order));
    r.quantity("expected", to_decimal(expect));
    r.add("glued truncated order equals product of level orders", "bsgs-order", *order == expect);
  }

  // w is consistent for eps^-1 g eps iff eps(w) is consistent for g.
  Rng rng = Rng(opt.seed).split("glued-invariance");
  const Alphabet& al = m.alphabet();
  std::size_t bad = 0;
  std::string first;
  Ratio min_cons{1, 1};
  for (std::size_t t = 0; t < samples; ++t) {
    LazyElement g = random_generator_word(model, 1 + rng.below(5), rng);
    LazyElement ge = conjugate(g, eps);
    for (std::size_t i = 1; i <= invariance_level; ++i) {
      std::size_t depth = epsilon_check_depth(m, i);
      auto cg = consistent_points(g, i, depth), ce = consistent_points(ge, i, depth);
      const PrefixMap pe = as_prefix_map(eps.project(i));
      bool ok = true;
      for (std::uint64_t k = 0; k < cg.size() && ok; ++k)
        ok = ce[k] == cg[al.rank(pe.apply(al.unrank(k, i)))];
      if (!ok && bad++ == 0) first = "sample " + std::to_string(t) + " " + level_tag(i);
      if (i == invariance_level) {
        Ratio c = cons_volume(g, i, depth);
        if (c.num * min_cons.den < min_cons.num * c.den) min_cons = c;
      }
    }
  }
  r.add("consistency invariant under epsilon-conjugation", "exact-evaluation", bad == 0,
        std::to_string(samples) + " elements, levels <= " + std::to_string(invariance_level) +
            (bad ? ", first at " + first : ""));
  Ratio ce = cons_volume(eps, invariance_level);
  r.quantity("cons(epsilon)", format_ratio(ce));
  r.quantity("min cons over sampled G-words", format_ratio(min_cons));
  r.add("epsilon separated from sampled G-words by consistency", "exact-evaluation",
        ce.num == 0 && min_cons.num > 0);
  r.finalize();
  return r;
}

}  // namespace telescopes
