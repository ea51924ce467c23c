#include "telescopes/normalform.hpp"

namespace telescopes {

namespace {

const LinearModel& linear(const TelescopeModel& m) {
  if (const auto* l = dynamic_cast<const LinearModel*>(&m)) return *l;
  if (const auto* qm = dynamic_cast<const QuotientModel*>(&m))
    if (const auto* l = dynamic_cast<const LinearModel*>(&qm->base())) return *l;
  throw PreconditionError("matrix normal form needs an E_d(F_q) telescope");
}

const MatFq& mat(const LevelElem& x) { return std::get<MatFq>(x); }

std::uint64_t upow(std::uint64_t b, std::size_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

// Embeds s (indexed by idx) into the identity of size n.
MatFq embed_block(const Field& f, std::size_t n, const std::vector<std::size_t>& idx, const MatFq& s) {
  MatFq out = MatFq::identity(f, n);
  for (std::size_t p = 0; p < idx.size(); ++p)
    for (std::size_t r = 0; r < idx.size(); ++r) out.set(idx[p], idx[r], s.at(p, r));
  return out;
}

// Level-K indices of X^M x {o} x ys x X.
std::vector<std::size_t> cylinder(std::uint32_t d, std::size_t M, const std::vector<std::size_t>& ys) {
  std::uint32_t o = d - 1;
  std::vector<std::size_t> out;
  for (std::uint64_t v = 0; v < upow(d, M); ++v)
    for (auto y : ys)
      for (std::uint32_t x = 0; x < d; ++x) out.push_back(((v * d + o) * d + y) * d + x);
  return out;
}

std::vector<std::size_t> complement(std::size_t n, const std::vector<std::size_t>& u) {
  std::vector<char> in(n, 0);
  for (auto i : u) in[i] = 1;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (!in[i]) out.push_back(i);
  return out;
}

bool nonscalar(const MatFq& m) { return !is_scalar(m).has_value(); }

}  // namespace

NormalForm weak_normal_form_sl(const LazyElement& g) {
  const LinearModel& m = linear(g.model());
  const Field& f = m.field();
  const std::uint32_t d = m.d();
  const std::size_t w = 2 * d;
  const Letter o = static_cast<Letter>(d - 1);
  NormalForm nf;
  nf.delta = m.identity(1);
  nf.eta = m.identity(1);
  nf.sigma = MatFq::identity(f, w);
  for (auto it = g.atoms().rbegin(); it != g.atoms().rend(); ++it) {
    const AtomData& a = *it->data;
    const std::size_t M = nf.m;
    if (a.kind == AtomKind::delta && a.level == 1) {
      const auto& x = std::get<LevelElem>(a.payload);
      LevelElem om = it->inverse ? level_inv(x) : x;
      for (std::size_t j = 1; j <= M; ++j) nf.f[j - 1] = level_mul(m.iota(om, 1, j), nf.f[j - 1]);
      nf.delta = level_mul(m.iota(om, 1, M + 1), nf.delta);
      continue;
    }
    if (a.kind != AtomKind::tilde || a.level != 1)
      throw PreconditionError("atom outside the generating set Delta_1 and tilde(1, .)");
    if (M + 2 > m.max_level()) throw CapExceeded("normal form needs a level above max_level");
    const BElem& be = std::get<BElem>(a.payload);
    BElem b = it->inverse ? b_inv(be) : be;
    if (M == 0 && std::get<MatFq>(nf.sigma).is_identity()) {
      nf.eta = level_mul(nf.delta, nf.eta);
      nf.delta = m.identity(1);
      nf.sigma = std::get<MatFq>(b);
      continue;
    }
    auto B = [&](std::size_t j) { return j < 2 ? m.identity(j) : m.tilde_level(1, b, j); };
    for (std::size_t j = 1; j <= M; ++j) nf.f[j - 1] = level_mul(B(j), nf.f[j - 1]);
    nf.f.push_back(level_mul(B(M + 1), level_mul(nf.delta, nf.eta)));

    const MatFq& old = std::get<MatFq>(nf.sigma);
    const std::size_t n1 = upow(d, M + 1) * w;
    MatFq moved = MatFq::identity(f, n1);
    auto lift = [&](std::size_t p) { return ((p / w) * d + o) * w + p % w; };
    for (std::size_t p = 0; p < old.dim(); ++p)
      for (std::size_t r = 0; r < old.dim(); ++r) moved.set(lift(p), lift(r), old.at(p, r));
    std::vector<std::size_t> idx(w);
    std::uint64_t top = m.alphabet().rank(Word(M + 1, o));
    for (std::size_t k = 0; k < w; ++k) idx[k] = top * w + k;
    MatFq dd = mat(nf.delta).kron_identity(w);
    MatFq tau = dd.inverse() * embed_block(f, n1, idx, std::get<MatFq>(b)) * dd;

    LevelElem eta = level_mul(m.phi_directed(M, M + 2, old), m.iota(nf.eta, M + 1, M + 2));
    nf.delta = level_mul(B(M + 2), m.iota(nf.delta, M + 1, M + 2));
    nf.eta = std::move(eta);
    nf.sigma = tau * moved;
    nf.m = M + 1;
  }
  return nf;
}

bool scalar_class(const NormalForm& nf) {
  return sigma_trivial(nf) && is_scalar(mat(level_mul(nf.delta, nf.eta))).has_value();
}

SlWitness sl_nonscalar_witness(const LazyElement& g, std::size_t search_budget) {
  const TelescopeModel& model = g.model();
  const LinearModel& lm = linear(model);
  const Field& f = lm.field();
  const std::uint32_t d = lm.d();
  NormalForm nf = weak_normal_form_sl(g);
  if (scalar_class(nf)) throw PreconditionError("scalar class");
  const std::size_t M = nf.m;
  SlWitness out;
  MatFq tau;
  LevelElem conj = lm.identity(M + 1);
  if (sigma_trivial(nf)) {
    out.level = M + 1;
    MatFq alpha = mat(level_mul(nf.delta, nf.eta));
    std::vector<std::size_t> all(alpha.dim());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    NonCommutingTau t = find_noncommuting_tau(alpha, all, {});
    tau = t.tau;
    out.branch = "sigma trivial: " + t.branch;
  } else {
    const std::size_t K = M + 3;
    if (K > model.max_level()) throw CapExceeded("witness level above max_level");
    out.level = K;
    conj = nf.eta;
    const std::size_t n = lm.dim(K);
    MatFq A = mat(lm.iota(level_mul(nf.eta, nf.delta), M + 1, K));
    std::vector<std::size_t> u = cylinder(d, M, {2});
    try {
      NonCommutingTau t = find_noncommuting_tau(A, u, complement(n, u));
      tau = t.tau;
      out.branch = "delta not scalar on X^m x_d: " + t.branch;
    } catch (const PreconditionError&) {
      std::vector<std::size_t> u3 = cylinder(d, M, {0, 1, 2});
      MatFq S = mat(lm.phi_directed(M, K, nf.sigma));
      NonCommutingTau t = find_noncommuting_tau(S, u3, complement(n, u3));
      tau = t.tau;
      out.branch = "delta scalar on X^m x_d: " + t.branch;
      // the commutator at level K is A (S tau S^-1) A^-1 tau^-1
      auto level_commutator = [&](const MatFq& x) { return A * S * x * S.inverse() * A.inverse() * x.inverse(); };
      if (!nonscalar(level_commutator(tau))) {
        Rng rng = Rng(0x5eed).split("sl-witness");
        bool found = false;
        for (std::size_t s = 0; s < search_budget && !found; ++s) {
          MatFq cand = embed_block(f, n, u3, lm.random_sl(u3.size(), rng));
          if (nonscalar(level_commutator(cand))) {
            tau = cand;
            found = true;
          }
        }
        if (!found) throw PreconditionError("no witness within the search budget");
        out.branch += "+search";
      }
    }
  }
  const std::size_t L = out.level;
  MatFq e = mat(lm.iota(conj, M + 1, L));
  out.tau = e.inverse() * tau * e;
  out.commutator = commutator(g, LazyElement::delta(g.model_ptr(), L, out.tau));
  out.atom = mat(out.commutator->project(L));
  out.verified = nonscalar(out.atom) && check_delta_atom(*out.commutator, L, out.atom, model.max_level());
  return out;
}

}  // namespace telescopes
