#include "telescopes/normalform.hpp"

#include <set>

#include "telescopes/verify.hpp"

namespace telescopes {

namespace {

const SpinalPermModel& spinal(const TelescopeModel& m) {
  const auto* sp = dynamic_cast<const SpinalPermModel*>(&m);
  if (!sp) throw PreconditionError("weak normal form needs a permutation telescope with B-points");
  return *sp;
}

const PrefixMap& pm(const LevelElem& x) { return std::get<PrefixMap>(x); }

bool has_epsilon_atom(const LazyElement& g) {
  for (const auto& a : g.atoms())
    if (a.data->kind == AtomKind::epsilon) return true;
  return false;
}

Word padded(Word w, std::size_t len, Letter x) {
  w.resize(len, x);
  return w;
}

// sigma~^[M+1] = Delta_{M+2}(phi^(M)_{M+2}(sigma)) * (sigma moved to the lines v o)~^[M+2]
LineFamily move_lines(const LineFamily& s, Letter o) {
  LineFamily next{s.depth + 1, {}};
  for (const auto& [v, p] : s.lines) {
    Word w = v;
    w.push_back(o);
    next.lines.emplace(std::move(w), p);
  }
  return next;
}

void lift(const SpinalPermModel& m, NormalForm& nf) {
  const std::size_t M = nf.m;
  if (M + 2 > m.max_level()) throw CapExceeded("normal form needs a level above max_level");
  const auto& old = std::get<LineFamily>(nf.sigma);
  nf.f.push_back(level_mul(nf.delta, nf.eta));
  nf.delta = level_mul(m.iota(nf.delta, M + 1, M + 2), m.phi_directed(M, M + 2, old));
  nf.eta = m.iota(nf.eta, M + 1, M + 2);
  nf.sigma = move_lines(old, m.config().prefix);
  nf.m = M + 1;
}

}  // namespace

NormalForm weak_normal_form(const LazyElement& g) {
  const SpinalPermModel& m = spinal(g.model());
  const Letter o = m.config().prefix;
  NormalForm nf;
  nf.delta = m.identity(1);
  nf.eta = m.identity(1);
  nf.sigma = LineFamily{0, {}};
  const auto& atoms = g.atoms();
  for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) {
    const AtomData& a = *it->data;
    if (a.kind == AtomKind::delta || a.kind == AtomKind::one_hot) {
      const auto& x0 = std::get<LevelElem>(a.payload);
      LevelElem x = it->inverse ? level_inv(x0) : x0;
      while (nf.m < a.level && (a.kind == AtomKind::one_hot || nf.m + 1 < a.level)) lift(m, nf);
      const std::size_t M = nf.m;
      if (a.kind == AtomKind::one_hot) {
        nf.f[a.level - 1] = level_mul(x, nf.f[a.level - 1]);
        continue;
      }
      for (std::size_t j = a.level; j <= M; ++j) nf.f[j - 1] = level_mul(m.iota(x, a.level, j), nf.f[j - 1]);
      nf.delta = level_mul(m.iota(x, a.level, M + 1), nf.delta);
      continue;
    }
    if (a.kind != AtomKind::tilde) throw PreconditionError("normal form takes Delta, one-hot and tilde atoms");
    while (nf.m + 1 < a.level) lift(m, nf);
    const std::size_t M = nf.m;
    if (M + 2 > m.max_level()) throw CapExceeded("normal form needs a level above max_level");
    const BElem& raw = std::get<BElem>(a.payload);
    BElem bb = it->inverse ? b_inv(raw) : raw;
    const Perm& b = std::get<Perm>(bb);
    if (M == 0 && a.level == 1 && std::get<LineFamily>(nf.sigma).lines.empty()) {
      // base case: the word so far is Delta_1(delta eta), so g = b~^[1] Delta_1(delta eta)
      nf.eta = level_mul(nf.delta, nf.eta);
      nf.delta = m.identity(1);
      if (!b.is_identity()) std::get<LineFamily>(nf.sigma).lines.emplace(Word{}, b);
      continue;
    }
    auto B = [&](std::size_t j) { return j <= a.level ? m.identity(j) : m.tilde_level(a.level, bb, j); };
    for (std::size_t j = 1; j <= M; ++j) nf.f[j - 1] = level_mul(B(j), nf.f[j - 1]);
    nf.f.push_back(level_mul(B(M + 1), level_mul(nf.delta, nf.eta)));

    // (b~^[M+2])^delta acts on the line delta^-1(o^(M+1)).
    Word line = inverse(pm(nf.delta)).apply(Word(M + 1, o));
    const LineFamily& old = std::get<LineFamily>(nf.sigma);
    LineFamily next = move_lines(old, o);
    auto [pos, fresh] = next.lines.try_emplace(line, b);
    if (!fresh) pos->second = compose(b, pos->second);
    if (pos->second.is_identity()) next.lines.erase(pos);

    LevelElem eta = level_mul(m.phi_directed(M, M + 2, old), m.iota(nf.eta, M + 1, M + 2));
    nf.delta = level_mul(B(M + 2), m.iota(nf.delta, M + 1, M + 2));
    nf.eta = std::move(eta);
    nf.sigma = std::move(next);
    nf.m = M + 1;
  }
  return nf;
}

bool sigma_trivial(const NormalForm& nf) {
  if (const auto* lf = std::get_if<LineFamily>(&nf.sigma)) {
    for (const auto& [v, p] : lf->lines)
      if (!p.is_identity()) return false;
    return true;
  }
  return std::get<MatFq>(nf.sigma).is_identity();
}

LazyElement reassemble(const ModelPtr& model, const NormalForm& nf) {
  LazyElement out(model);
  for (std::size_t j = 1; j <= nf.m; ++j)
    if (!model->is_identity(nf.f[j - 1], j)) out = out * LazyElement::one_hot(model, j, nf.f[j - 1]);
  if (!model->is_identity(nf.delta, nf.m + 1)) out = out * LazyElement::delta(model, nf.m + 1, nf.delta);
  if (!sigma_trivial(nf)) out = out * LazyElement::directed(model, nf.m, nf.m + 1, nf.sigma);
  if (!model->is_identity(nf.eta, nf.m + 1)) out = out * LazyElement::delta(model, nf.m + 1, nf.eta);
  return out;
}

std::string format_normal_form(const ModelPtr& model, const NormalForm& nf) {
  return format_element(reassemble(model, nf));
}

bool is_consistent_at(const LazyElement& g, WordView w, std::size_t upto) {
  const TelescopeModel& m = g.model();
  const std::size_t k = w.size();
  if (upto == 0) upto = has_epsilon_atom(g) ? epsilon_check_depth(m, k) : m.max_level();
  Word img = pm(g.project(k)).apply(w);
  for (std::size_t j = k + 1; j <= upto; ++j) {
    auto p = pm(g.project(j)).prefix_image(w);
    if (!p || *p != img) return false;
  }
  return true;
}

ConsistentPoint find_consistent_point(const LazyElement& g, const NormalForm& nf) {
  const SpinalPermModel& m = spinal(g.model());
  const SpinalConfig& cfg = m.config();
  const Letter o = cfg.prefix;
  const Alphabet& al = cfg.alphabet;
  const std::size_t M = nf.m;
  PrefixMap d0 = compose(pm(nf.eta), pm(nf.delta));
  ConsistentPoint cp;
  Word wp;
  if (sigma_trivial(nf)) {
    if (d0.is_identity()) throw PreconditionError("element lies in the direct sum");
    for (std::size_t i = 0; i < d0.rule_count(); ++i)
      if (d0.rule_moves(i)) {
        WordView p = d0.rule_prefix(i);
        wp = padded(Word(p.begin(), p.end()), M + 1, 0);
        break;
      }
    cp.branch = "sigma trivial: point of supp delta";
  } else {
    std::set<Letter> rows;
    for (auto [a, c] : cfg.points) rows.insert(a);
    for (std::size_t i = 0; i < d0.rule_count() && wp.empty(); ++i) {
      if (!d0.rule_moves(i)) continue;
      WordView p = d0.rule_prefix(i);
      if (p.size() == M + 1 && p.back() != o) continue;
      Word v = padded(Word(p.begin(), p.end()), M, 0);
      v.resize(M);
      v.push_back(o);
      Letter z = 0;
      while (z == o || rows.count(z)) ++z;
      if (z >= al.size_at(M + 1)) throw PreconditionError("no letter off the B-rows");
      v.push_back(z);
      wp = std::move(v);
    }
    if (!wp.empty()) {
      cp.branch = "v x_d in supp delta";
    } else {
      const auto& lf = std::get<LineFamily>(nf.sigma);
      for (const auto& [v, p] : lf.lines) {
        for (std::uint32_t i = 0; i < p.degree() && wp.empty(); ++i)
          if (p(i) != i) {
            wp = v;
            wp.push_back(o);
            wp.push_back(cfg.points[i].first);
            wp.push_back(cfg.points[i].second);
          }
        if (!wp.empty()) break;
      }
      cp.branch = "supp delta off X^m x_d";
    }
  }
  cp.k = wp.size();
  if (cp.k > m.max_level()) throw CapExceeded("consistent point above max_level");
  // undo the conjugation by eta
  cp.w = inverse(pm(nf.eta)).apply(wp);
  cp.checked_to = m.max_level();
  if (pm(g.project(cp.k)).apply(cp.w) == cp.w || !is_consistent_at(g, cp.w, cp.checked_to))
    throw std::logic_error("consistent point check failed for " + al.format(cp.w));
  return cp;
}

ConsistentPoint find_consistent_point(const LazyElement& g) {
  return find_consistent_point(g, weak_normal_form(g));
}

Membership in_direct_sum(const LazyElement& g) {
  Membership out;
  const TelescopeModel& m = g.model();
  out.nf = m.engine() == Engine::permutation ? weak_normal_form(g) : weak_normal_form_sl(g);
  out.member = sigma_trivial(out.nf) &&
               m.is_identity(level_mul(out.nf.delta, out.nf.eta), out.nf.m + 1);
  if (!out.member && m.engine() == Engine::permutation) out.witness = find_consistent_point(g, out.nf);
  return out;
}

bool check_delta_atom(const LazyElement& c, std::size_t level, const LevelElem& atom, std::size_t upto) {
  const TelescopeModel& m = c.model();
  if (m.is_identity(atom, level)) return false;
  for (std::size_t j = 1; j <= upto; ++j) {
    LevelElem want = j < level ? m.identity(j) : m.iota(atom, level, j);
    if (!m.equal(c.project(j), want)) return false;
  }
  return true;
}

SimplicityWitness simplicity_witness(const LazyElement& g) {
  const SpinalPermModel& m = spinal(g.model());
  const Alphabet& al = m.alphabet();
  ConsistentPoint cp = find_consistent_point(g);
  SimplicityWitness out;
  out.k = cp.k;
  out.w = cp.w;
  if (cp.k + 1 > m.max_level()) throw CapExceeded("witness level above max_level");
  if (al.size_at(cp.k) < 3) throw PreconditionError("alphabet too small for a 3-cycle");
  out.v = pm(g.project(cp.k)).apply(cp.w);
  auto ext = [](const Word& u, Letter x) {
    Word r = u;
    r.push_back(x);
    return r;
  };
  const Word& w = out.w;
  const Word& v = out.v;
  std::vector<PrefixMap::Rule> tau{{ext(w, 0), ext(w, 1)}, {ext(w, 1), ext(w, 2)}, {ext(w, 2), ext(w, 0)}};
  std::vector<PrefixMap::Rule> atom = tau;
  // v t^-1(x)
  atom.push_back({ext(v, 1), ext(v, 0)});
  atom.push_back({ext(v, 2), ext(v, 1)});
  atom.push_back({ext(v, 0), ext(v, 2)});
  out.tau = PrefixMap::from_rules(al, cp.k + 1, tau);
  out.atom = PrefixMap::from_rules(al, cp.k + 1, atom);
  out.commutator = commutator(LazyElement::delta(g.model_ptr(), cp.k + 1, out.tau), g);
  out.verified_to = m.max_level();
  out.verified = check_delta_atom(*out.commutator, cp.k + 1, out.atom, out.verified_to);
  return out;
}

bool head_equal(const LazyElement& g, const LazyElement& h) { return in_direct_sum(g * h.inverse()).member; }

}  // namespace telescopes
