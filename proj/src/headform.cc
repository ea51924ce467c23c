#include "telescopes/normalform.hpp"

#include <algorithm>

namespace telescopes {

namespace {

const SpinalPermModel& spinal(const TelescopeModel& m) {
  const auto* sp = dynamic_cast<const SpinalPermModel*>(&m);
  if (!sp) throw PreconditionError("head normal form needs a permutation telescope with B-points");
  return *sp;
}

const PrefixMap& pm(const LevelElem& x) { return std::get<PrefixMap>(x); }

}  // namespace

Word head_base_point(const TelescopeModel& model, const HeadNormalForm& h, std::size_t i) {
  const Letter o = spinal(model).config().prefix;
  return inverse(pm(h.factors.at(i).omega)).apply(Word(h.n, o));
}

HeadNormalForm head_normal_form(const LazyElement& g) {
  const SpinalPermModel& m = spinal(g.model());
  HeadNormalForm h;
  h.epsilon = m.identity(1);
  h.eta = m.identity(1);
  for (const auto& a : g.atoms()) {
    const AtomData& d = *a.data;
    if (d.kind == AtomKind::delta && d.level == 1) {
      const auto& x = std::get<LevelElem>(d.payload);
      h.eta = level_mul(h.eta, m.iota(a.inverse ? level_inv(x) : x, 1, h.n + 1));
      continue;
    }
    if (d.kind != AtomKind::tilde || d.level != 1)
      throw PreconditionError("atom outside the generating set Delta_1 and tilde(1, .)");
    const std::size_t N = h.n;
    if (N + 2 > m.max_level()) throw CapExceeded("head normal form needs a level above max_level");
    const BElem& raw = std::get<BElem>(d.payload);
    BElem b = a.inverse ? b_inv(raw) : raw;

    // T(N+1, b_i) = Delta_{N+2}(phi_{N+2}(b_i)) T(N+2, b_i); the first part
    // commutes past the other factors into epsilon.
    LevelElem eps = m.iota(h.epsilon, N + 1, N + 2);
    for (auto& f : h.factors) {
      LevelElem w = m.iota(f.omega, N, N + 2);
      eps = level_mul(eps, level_mul(level_inv(w), level_mul(m.phi(N + 2, f.b), w)));
      f.omega = m.iota(f.omega, N, N + 1);
    }
    h.epsilon = std::move(eps);
    LevelElem tau = h.eta;
    h.eta = level_mul(m.iota(tau, N + 1, N + 2), m.tilde_level(1, b, N + 2));
    h.n = N + 1;

    HeadFactor fresh{b, level_inv(tau)};
    h.factors.push_back(std::move(fresh));
    const std::size_t last = h.factors.size() - 1;
    Word base = head_base_point(m, h, last);
    for (std::size_t i = 0; i < last; ++i) {
      if (head_base_point(m, h, i) != base) continue;
      h.factors[i].b = b_mul(h.factors[i].b, b);
      h.factors.pop_back();
      ++h.merges;
      if (b_is_identity(h.factors[i].b)) h.factors.erase(h.factors.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  return h;
}

LazyElement reassemble_head(const ModelPtr& model, const HeadNormalForm& h) {
  LazyElement out = LazyElement::delta(model, h.n + 1, h.epsilon);
  for (const auto& f : h.factors) {
    LazyElement w = LazyElement::delta(model, h.n, f.omega);
    out = out * w.inverse() * LazyElement::tilde(model, h.n + 1, f.b) * w;
  }
  return out * LazyElement::delta(model, h.n + 1, h.eta);
}

Germ germ_at(const LazyElement& q, const Word& prefix) {
  const SpinalPermModel& m = spinal(q.model());
  const Alphabet& al = m.alphabet();
  const Letter o = m.config().prefix;
  HeadNormalForm h = head_normal_form(q);
  const std::size_t n = h.n;
  Word vmin = prefix;
  while (!vmin.empty() && vmin.back() == o) vmin.pop_back();
  const std::size_t ell = vmin.size();
  const std::size_t J = std::max(n + 1, ell) + 2;
  if (J > m.max_level()) throw CapExceeded("germ needs a level above max_level");
  Word xi = vmin;
  xi.resize(J, o);
  if (pm(q.project(J)).apply(xi) != xi) throw PreconditionError("q moves the point");

  Germ out;
  out.verified_to = m.max_level();
  Word xp = pm(m.iota(h.eta, n + 1, J)).apply(xi);
  Word u(xp.begin(), xp.begin() + static_cast<std::ptrdiff_t>(n));
  std::optional<std::size_t> hit;
  for (std::size_t i = 0; i < h.factors.size(); ++i)
    if (head_base_point(m, h, i) == u) hit = i;
  bool tail_o = std::all_of(xp.begin() + static_cast<std::ptrdiff_t>(n), xp.end(), [&](Letter x) { return x == o; });

  if (hit && tail_o) {
    out.trivial = false;
    out.b = h.factors[*hit].b;
    out.start = n + 1;
    out.omega_level = ell;
    LazyElement D = LazyElement::tilde(q.model_ptr(), n + 1, *out.b);
    if (ell > 0) {
      Word top(ell, o), third;
      for (std::uint64_t r = 0; third.empty(); ++r) {
        Word w = al.unrank(r, ell);
        if (w != vmin && w != top) third = w;
      }
      // vmin -> o^ell -> third -> vmin
      out.omega = PrefixMap::from_rules(al, ell, {{vmin, top}, {top, third}, {third, vmin}});
      LazyElement w = LazyElement::delta(q.model_ptr(), ell, *out.omega);
      D = w.inverse() * D * w;
    }
    out.neighbourhood = Word(xi.begin(), xi.begin() + static_cast<std::ptrdiff_t>(std::max(n + 1, ell)));
    out.verified_from = std::max(out.neighbourhood.size(), std::size_t{1});
    out.verified = true;
    for (std::size_t j = out.verified_from; j <= out.verified_to && out.verified; ++j) {
      PrefixMap r = compose(inverse(pm(D.project(j))), pm(q.project(j)));
      auto img = r.prefix_image(out.neighbourhood);
      out.verified = img && *img == out.neighbourhood;
    }
    return out;
  }

  std::size_t L = n + 1;
  if (hit) {
    std::size_t p = 0;
    while (xp[n + p] == o) ++p;
    L = n + p + 2;
  }
  out.neighbourhood = Word(xi.begin(), xi.begin() + static_cast<std::ptrdiff_t>(L));
  out.verified_from = L;
  out.verified = true;
  for (std::size_t j = L; j <= out.verified_to && out.verified; ++j) {
    auto img = pm(q.project(j)).prefix_image(out.neighbourhood);
    out.verified = img && *img == out.neighbourhood;
  }
  return out;
}

}  // namespace telescopes
