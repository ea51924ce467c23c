#include "telescopes/action.hpp"

#include <algorithm>
#include <set>

#include "telescopes/instances.hpp"

namespace telescopes {

namespace {

const PrefixMap& pm(const LevelElem& x) {
  const auto* p = std::get_if<PrefixMap>(&x);
  if (!p) throw PreconditionError("action needs a permutation telescope on words");
  return *p;
}

const LinearModel* linear_of(const TelescopeModel& m) {
  if (const auto* l = dynamic_cast<const LinearModel*>(&m)) return l;
  if (const auto* q = dynamic_cast<const QuotientModel*>(&m))
    return dynamic_cast<const LinearModel*>(&q->base());
  return nullptr;
}

Word pad(WordView w, std::size_t len, Letter o) {
  Word out(w.begin(), w.end());
  if (out.size() < len) out.resize(len, o);
  return out;
}

// First position (0-based) in [from, w.size()) holding a letter other than o.
std::optional<std::size_t> first_off(WordView w, std::size_t from, Letter o) {
  for (std::size_t p = from; p < w.size(); ++p)
    if (w[p] != o) return p;
  return std::nullopt;
}

}  // namespace

Letter spine_letter(const TelescopeModel& model) {
  if (const auto* sp = dynamic_cast<const SpinalPermModel*>(&model)) return sp->config().spine;
  if (const auto* l = linear_of(model)) return static_cast<Letter>(l->d() - 1);
  throw PreconditionError("model has no spine letter");
}

LimitPoint canonical(const TelescopeModel& model, WordView w) {
  const Letter o = spine_letter(model);
  std::size_t n = w.size();
  while (n > 0 && w[n - 1] == o) --n;
  return {n, Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(n))};
}

Word at_level(const TelescopeModel& model, const LimitPoint& x, std::size_t j) {
  if (j < x.w.size()) throw PreconditionError("representative below the point's level");
  return pad(x.w, j, spine_letter(model));
}

std::string format_limit(const TelescopeModel& model, const LimitPoint& x) {
  return model.alphabet().format(x.w) + "@" + std::to_string(x.level);
}

LimitPoint parse_limit(const TelescopeModel& model, std::string_view text) {
  auto at = text.rfind('@');
  if (at == std::string_view::npos) throw ParseError("limit point needs the form w@i", text.size());
  Word w = model.alphabet().parse(text.substr(0, at));
  std::size_t level = 0;
  std::string_view lv = text.substr(at + 1);
  if (lv.empty()) throw ParseError("missing level", at + 1);
  for (std::size_t k = 0; k < lv.size(); ++k) {
    if (lv[k] < '0' || lv[k] > '9') throw ParseError("bad level", at + 1 + k);
    level = level * 10 + static_cast<std::size_t>(lv[k] - '0');
  }
  if (level != w.size()) throw ParseError("level does not match the word length", at + 1);
  if (!model.alphabet().valid(w)) throw ParseError("letter out of range", 0);
  return canonical(model, w);
}

namespace {

std::size_t stabilization_bound(const LazyElement& g, std::size_t i, bool skip_epsilon) {
  const std::size_t kappa = g.model().kappa();
  std::size_t t = i;
  const auto& atoms = g.atoms();
  for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) {
    const AtomData& a = *it->data;
    switch (a.kind) {
      case AtomKind::delta: t = std::max(t, a.level); break;
      case AtomKind::tilde:
      case AtomKind::directed: t += kappa; break;
      case AtomKind::one_hot: t = std::max(t, a.level + 1); break;
      case AtomKind::epsilon:
        if (!skip_epsilon) throw PreconditionError("epsilon does not act on the direct limit");
        break;
    }
  }
  return std::max<std::size_t>(t, 1);
}

}  // namespace

std::size_t stabilization_level(const LazyElement& g, std::size_t i) { return stabilization_bound(g, i, false); }

LimitAction act_limit(const LazyElement& g, const LimitPoint& x) {
  const TelescopeModel& m = g.model();
  LimitAction out;
  out.t = stabilization_level(g, x.level);
  if (out.t > m.max_level()) throw CapExceeded("level budget exceeded");
  auto image = [&](std::size_t j) { return canonical(m, pm(g.project(j)).apply(at_level(m, x, j))); };
  out.point = image(out.t);
  out.checked_to = out.t;
  for (std::size_t j = out.t + 1; j <= std::min(out.t + 2, m.max_level()); ++j) {
    if (!(image(j) == out.point))
      throw std::logic_error("action not stable at level " + std::to_string(j));
    out.checked_to = j;
  }
  return out;
}

std::string format_cantor(const TelescopeModel& model, const CantorPoint& p) {
  return model.alphabet().format(p.prefix) + (p.eventually_o ? "(o*)" : "...");
}

CantorPoint parse_cantor(const TelescopeModel& model, std::string_view text) {
  CantorPoint p;
  std::string_view body;
  if (text.size() >= 4 && text.substr(text.size() - 4) == "(o*)") {
    body = text.substr(0, text.size() - 4);
    p.eventually_o = true;
  } else if (text.size() >= 3 && text.substr(text.size() - 3) == "...") {
    body = text.substr(0, text.size() - 3);
    p.eventually_o = false;
  } else {
    throw ParseError("Cantor point needs a tail rule (o*) or ...", text.size());
  }
  p.prefix = model.alphabet().parse(body);
  if (!model.alphabet().valid(p.prefix)) throw ParseError("letter out of range", 0);
  return p;
}

CantorImage act_cantor_prefix(const LazyElement& g, const CantorPoint& xi, std::size_t out_len) {
  const auto* sp = dynamic_cast<const SpinalPermModel*>(&g.model());
  if (!sp) throw PreconditionError("Cantor action needs a permutation telescope with B-points");
  const SpinalConfig& cfg = sp->config();
  const Letter o = cfg.spine;
  bool assumption = cfg.prefix == o;
  for (auto [a, c] : cfg.points) assumption = assumption && a != o;
  if (!assumption) throw PreconditionError("B-supports do not avoid o in the second to last letter");
  const TelescopeModel& m = g.model();
  CantorImage out;

  if (xi.eventually_o) {
    // epsilon acts letterwise and moves no block support onto the spine
    std::size_t t = stabilization_bound(g, xi.prefix.size(), true);
    t = std::max(t, out_len);
    if (t > m.max_level()) throw CapExceeded("level budget exceeded");
    Word img = pm(g.project(t)).apply(pad(xi.prefix, t, o));
    img.resize(out_len, o);
    for (std::size_t j = t + 1; j <= std::min(t + 2, m.max_level()); ++j) {
      Word c = pm(g.project(j)).apply(pad(xi.prefix, j, o));
      c.resize(out_len);
      if (c != img) throw std::logic_error("Cantor action not stable at level " + std::to_string(j));
    }
    out.prefix = std::move(img);
    out.stable_len = out_len;
    out.complete = true;
    out.status = "ok";
    return out;
  }

  // Unspecified tail: track how many leading letters are still determined.
  Word cur = xi.prefix;
  const auto& atoms = g.atoms();
  for (auto it = atoms.rbegin(); it != atoms.rend() && !cur.empty(); ++it) {
    const AtomData& a = *it->data;
    std::size_t K = cur.size();
    if (a.kind == AtomKind::one_hot) continue;
    if (a.kind == AtomKind::delta && a.level > K) {
      cur.clear();
      break;
    }
    if (a.kind == AtomKind::tilde || a.kind == AtomKind::directed) {
      // blocks behind v o^j act on letters past the first non-o after v
      std::size_t from = a.kind == AtomKind::directed ? a.depth : 0;
      if (from >= K) continue;
      std::size_t keep = K;
      auto off = first_off(cur, from, o);
      if (!off || *off + 1 >= K) keep = K - 1;
      Word img = pm(a.value(m, K, it->inverse)).apply(cur);
      img.resize(keep);
      cur = std::move(img);
      continue;
    }
    cur = pm(a.value(m, K, it->inverse)).apply(cur);
  }
  out.stable_len = std::min(cur.size(), out_len);
  out.prefix.assign(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(out.stable_len));
  out.complete = out.stable_len == out_len;
  out.status = out.complete ? "ok" : out.stable_len > 0 ? "partial" : "insufficient prefix";
  return out;
}

std::vector<std::uint64_t> bounded_type_profile(const LazyElement& g, std::size_t L) {
  const TelescopeModel& m = g.model();
  if (L + 2 > m.max_level()) throw PreconditionError("profile level needs L + 2 <= max_level");
  const Alphabet& al = m.alphabet();
  std::vector<PrefixMap> lv;
  for (std::size_t j = 1; j <= m.max_level(); ++j) lv.push_back(pm(g.project(j)));
  std::vector<std::uint64_t> counts(L, 0);
  for (std::size_t l = 1; l <= L; ++l) {
    std::uint64_t n = al.count(l);
    for (std::uint64_t r = 0; r < n; ++r) {
      Word v = al.unrank(r, l);
      std::optional<Word> first;
      bool ok = true;
      for (std::size_t j = l + 1; j <= m.max_level() && ok; ++j) {
        auto img = lv[j - 1].prefix_image(v);
        if (!img || (first && *img != *first)) ok = false;
        if (!first) first = img;
      }
      if (!ok) ++counts[l - 1];
    }
  }
  return counts;
}

TransitivityWitness transitivity_witness(const ModelPtr& model, const std::vector<LimitPoint>& xs,
                                         const std::vector<LimitPoint>& ys) {
  const TelescopeModel& m = *model;
  if (xs.size() != ys.size() || xs.empty()) throw PreconditionError("tuples of different length");
  auto distinct = [](const std::vector<LimitPoint>& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = i + 1; j < v.size(); ++j)
        if (v[i] == v[j]) return false;
    return true;
  };
  if (!distinct(xs) || !distinct(ys)) throw PreconditionError("tuple with repeated entries");
  std::size_t L = 1;
  for (const auto& p : xs) L = std::max(L, p.level + 1);
  for (const auto& p : ys) L = std::max(L, p.level + 1);
  if (L > m.max_level()) throw CapExceeded("level budget exceeded");
  const Alphabet& al = m.alphabet();
  const std::uint64_t n = al.count(L);
  if (n < 2 * xs.size() + 2) throw PreconditionError("level too small for a parity fix");
  if (m.level_order(L) != factorial(static_cast<unsigned>(n)) / 2 &&
      m.level_order(L) != factorial(static_cast<unsigned>(n)))
    throw PreconditionError("level group is not Alt or Sym of the words");

  std::map<std::uint64_t, std::uint64_t> f;
  std::set<std::uint64_t> src, dst;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    std::uint64_t a = al.rank(at_level(m, xs[j], L)), b = al.rank(at_level(m, ys[j], L));
    f[a] = b;
    src.insert(a);
    dst.insert(b);
  }
  std::vector<std::uint64_t> free_dst, free_src;
  for (auto b : dst)
    if (!src.count(b)) free_dst.push_back(b);
  for (auto a : src)
    if (!dst.count(a)) free_src.push_back(a);
  for (std::size_t k = 0; k < free_dst.size(); ++k) f[free_dst[k]] = free_src[k];
  // parity of the permutation on src u dst
  std::size_t transpositions = 0;
  std::set<std::uint64_t> seen;
  for (auto [a, b] : f) {
    if (seen.count(a)) continue;
    std::size_t len = 0;
    for (std::uint64_t c = a; !seen.count(c); c = f[c]) {
      seen.insert(c);
      ++len;
    }
    transpositions += len - 1;
  }
  if (transpositions % 2) {
    std::vector<std::uint64_t> spare;
    for (std::uint64_t r = 0; spare.size() < 2; ++r)
      if (!f.count(r)) spare.push_back(r);
    f[spare[0]] = spare[1];
    f[spare[1]] = spare[0];
  }
  std::vector<PrefixMap::Rule> rules;
  for (auto [a, b] : f)
    if (a != b) rules.push_back({al.unrank(a, L), al.unrank(b, L)});
  return {L, PrefixMap::from_rules(al, L, std::move(rules))};
}

VerificationReport check_transitivity_limit(const ModelPtr& model, std::size_t k, std::size_t samples,
                                            const VerifyOptions& opt) {
  const TelescopeModel& m = *model;
  VerificationReport r;
  r.check_id = "transitivity-" + std::to_string(k);
  r.spec_id = m.id();
  r.method = "constructive-witness";
  if (k == 0 || k > 3) throw PreconditionError("k must be 1, 2 or 3");
  const std::size_t top = std::min<std::size_t>(m.max_level() - 1, 3);
  r.level_from = 1;
  r.level_to = top + 1;
  Rng rng = Rng(opt.seed).split("transitivity-" + std::to_string(k));
  const Alphabet& al = m.alphabet();
  auto sample_tuple = [&] {
    std::vector<LimitPoint> t;
    while (t.size() < k) {
      std::size_t lvl = 1 + rng.below(top);
      LimitPoint p = canonical(m, al.unrank(rng.below(al.count(lvl)), lvl));
      if (std::find(t.begin(), t.end(), p) == t.end()) t.push_back(std::move(p));
    }
    return t;
  };
  std::size_t bad = 0, max_level_used = 0;
  std::string first;
  for (std::size_t s = 0; s < samples; ++s) {
    auto xs = sample_tuple(), ys = sample_tuple();
    TransitivityWitness w = transitivity_witness(model, xs, ys);
    max_level_used = std::max(max_level_used, w.level);
    LazyElement g = LazyElement::delta(model, w.level, w.omega);
    bool ok = true;
    for (std::size_t j = 0; j < k && ok; ++j) ok = act_limit(g, xs[j]).point == ys[j];
    if (!ok && bad++ == 0) first = "sample " + std::to_string(s);
  }
  r.quantity("tuple pairs", std::to_string(samples));
  r.quantity("max witness level", std::to_string(max_level_used));
  r.add("Delta-atom witness maps each tuple to its partner", "constructive-witness", bad == 0,
        bad ? std::to_string(bad) + " failures, first at " + first : "");
  if (k >= 2) {
    auto xs = sample_tuple();
    auto ys = xs;
    xs[1] = xs[0];
    bool rejected = false;
    try {
      transitivity_witness(model, xs, ys);
    } catch (const PreconditionError&) {
      rejected = true;
    }
    r.add("tuples with repeated entries rejected", "exact-evaluation", rejected);
  }
  r.finalize();
  return r;
}

VerificationReport check_projective_action(const ModelPtr& model, std::size_t L) {
  const LinearModel* lm = linear_of(*model);
  if (!lm) throw PreconditionError("projective action needs an E_d(F_q) or PSL telescope");
  if (L > model->max_level()) throw PreconditionError("level above max_level");
  VerificationReport r;
  r.check_id = "projective-action";
  r.spec_id = model->id();
  r.level_from = 1;
  r.level_to = L;
  r.method = "exact-evaluation";
  const Alphabet& al = model->alphabet();
  const Letter x3 = 2;
  std::size_t lines = 0, bad = 0;
  for (std::size_t i = 1; i + 2 <= L; ++i)
    for (std::size_t n = 2; i + n <= L; ++n)
      for (const BElem& b : model->b_generators()) {
        const MatFq M = std::get<MatFq>(model->phi(i + n, b));
        std::optional<std::uint8_t> lambda;
        for (std::uint64_t u = 0; u < al.count(i); ++u) {
          Word w = al.unrank(u, i);
          w.resize(i + n, x3);
          std::size_t c = al.rank(w);
          bool ok = true;
          for (std::size_t row = 0; row < M.dim() && ok; ++row)
            if (row != c && M.at(row, c)) ok = false;
          if (ok && lambda && *lambda != M.at(c, c)) ok = false;
          if (ok && !lambda) lambda = M.at(c, c);
          if (ok && lambda == 0) ok = false;
          ++lines;
          if (!ok) ++bad;
        }
      }
  r.quantity("spanning vectors checked", std::to_string(lines));
  r.add("B_(i+n) fixes every line of F[X^i x x3^n], n >= 2", "exact-evaluation", bad == 0,
        std::to_string(bad) + " failures");
  r.finalize();
  return r;
}

}  // namespace telescopes
