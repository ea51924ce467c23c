#include <algorithm>
#include <numeric>
#include <set>

#include "telescopes/verify.hpp"

namespace telescopes {

namespace {

std::uint64_t ipow(std::uint64_t b, std::size_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

BigInt gcd_big(const BigInt& a, const BigInt& b) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

BigInt sl_order(unsigned q, std::size_t n) {
  BigInt Q = q, out = 1;
  for (std::size_t i = 0; i < n * (n - 1) / 2; ++i) out *= Q;
  BigInt qi = Q;
  for (std::size_t i = 2; i <= n; ++i) {
    qi *= Q;
    out *= qi - 1;
  }
  return out;
}

// Action on the nonzero vectors of F_q^n, encoded base q (minus one).
Perm vector_action(const MatFq& m) {
  const Field& f = m.field();
  std::size_t n = m.dim();
  std::uint64_t count = ipow(f.q(), n);
  std::vector<std::uint32_t> img(count - 1);
  std::vector<std::uint8_t> v(n), w(n);
  for (std::uint64_t code = 1; code < count; ++code) {
    std::uint64_t c = code;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = static_cast<std::uint8_t>(c % f.q());
      c /= f.q();
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::uint8_t s = 0;
      for (std::size_t j = 0; j < n; ++j) s = f.add(s, f.mul(m.at(i, j), v[j]));
      w[i] = s;
    }
    std::uint64_t out = 0;
    for (std::size_t i = n; i-- > 0;) out = out * f.q() + w[i];
    img[code - 1] = static_cast<std::uint32_t>(out - 1);
  }
  return Perm::unchecked(std::move(img));
}

MatFq mat_power(MatFq m, std::uint64_t e) {
  MatFq r = MatFq::identity(m.field(), m.dim());
  while (e) {
    if (e & 1) r = r * m;
    m = m * m;
    e >>= 1;
  }
  return r;
}

MatFq perm_matrix(const Field& f, const Perm& p) {
  MatFq m(f, p.degree());
  for (std::uint32_t i = 0; i < p.degree(); ++i) m.set(p(i), i, 1);
  return m;
}

Perm matrix_perm(const MatFq& m) {
  std::vector<std::uint32_t> img(m.dim());
  for (std::size_t j = 0; j < m.dim(); ++j)
    for (std::size_t i = 0; i < m.dim(); ++i)
      if (m.at(i, j) != 0) img[j] = static_cast<std::uint32_t>(i);
  return Perm(std::move(img));
}

MatFq block_diag(const std::vector<MatFq>& blocks) {
  MatFq out = blocks.front();
  for (std::size_t i = 1; i < blocks.size(); ++i) out = direct_sum(out, blocks[i]);
  return out;
}

// Element of order k (k prime) as a power of a random element, or nothing.
std::optional<MatFq> random_of_order(const LinearModel& l, std::size_t n, unsigned k, Rng& rng) {
  MatFq g = l.random_sl(n, rng);
  BigInt ord = vector_action(g).order();
  if (ord % k != 0) return std::nullopt;
  BigInt e = ord / k;
  return mat_power(g, e.get_ui());
}

}  // namespace

TwoGenAlt build_two_generators_alt(const std::shared_ptr<const SpinalPermModel>& model,
                                   const VerifyOptions& opt) {
  const SpinalConfig& cfg = model->config();
  if (cfg.kind != "alt") throw PreconditionError("two generators are built for alternating telescopes");
  const Alphabet& al = cfg.alphabet;
  const std::uint32_t d = al.size_at(0);
  std::set<Letter> as;
  for (auto [a, c] : cfg.points) as.insert(a);
  const std::uint32_t r = static_cast<std::uint32_t>(as.size());
  const Letter o = cfg.spine;

  ModelPtr mp = model;
  TwoGenAlt out(mp);
  VerificationReport& rep = out.certificate;
  rep.check_id = "two-generators-alt";
  rep.spec_id = model->id();
  rep.method = "witness-replay";

  std::uint64_t target = std::max<std::uint64_t>({18, 3 * (r + 1), 2 * r * d});
  std::size_t n = 2;
  while (ipow(d, n) < target) ++n;
  if (n > model->max_level()) throw PreconditionError("level n above max_level");
  const std::uint64_t N = ipow(d, n);
  const std::uint64_t p = nagura_prime(N);
  if (p == 0) throw PreconditionError("no prime in the window (N/2, 2N/3)");
  out.n = n;
  out.p = p;
  rep.level_from = rep.level_to = n;
  rep.quantity("n", std::to_string(n));
  rep.quantity("N", std::to_string(N));
  rep.quantity("p", std::to_string(p));
  rep.add("p prime in the window", "exact-evaluation", 2 * p > N && 3 * p < 2 * N);

  auto rank = [&](Word w) { return static_cast<std::uint32_t>(al.rank(w)); };
  auto with_last = [&](Letter run, Letter last) {
    Word w(n - 1, run);
    w.push_back(last);
    return rank(w);
  };
  std::set<std::uint32_t> f1, m1, g2;  // fixed by sigma1, moved by sigma1, fixed by sigma2
  for (Letter a = 0; a < d; ++a) {
    bool small = a < r || a == o;
    if (small) f1.insert(with_last(o, a));
    if (small) g2.insert(with_last(0, a));
    m1.insert(with_last(0, a));
  }
  std::vector<std::uint32_t> s1(m1.begin(), m1.end());
  for (std::uint32_t w = 0; w < N && s1.size() < p; ++w)
    if (!f1.count(w) && !m1.count(w)) s1.push_back(w);
  if (s1.size() < p) throw PreconditionError("sigma1: too few words outside the fixed set");
  std::vector<char> in1(N, 0);
  for (auto w : s1) in1[w] = 1;
  std::vector<std::uint32_t> s2;
  for (std::uint32_t w = 0; w < N; ++w)
    if (!in1[w]) s2.push_back(w);
  for (auto w : s1) {
    if (s2.size() >= p) break;
    if (!g2.count(w)) s2.push_back(w);
  }
  if (s2.size() < p) throw PreconditionError("sigma2: too few words outside the fixed set");
  out.sigma1 = Perm::cycle(static_cast<std::uint32_t>(N), s1);
  out.sigma2 = Perm::cycle(static_cast<std::uint32_t>(N), s2);

  bool ok1 = out.sigma1.order() == p && out.sigma1.moved_count() == p;
  for (auto w : f1) ok1 = ok1 && out.sigma1(w) == w;
  for (auto w : m1) ok1 = ok1 && out.sigma1(w) != w;
  rep.add("sigma1 is a p-cycle fixing x_d^(n-1){x1..xr,x_d} and moving x1^(n-1)X", "exact-evaluation", ok1);
  bool ok2 = out.sigma2.order() == p && out.sigma2.moved_count() == p;
  for (auto w : g2) ok2 = ok2 && out.sigma2(w) == w;
  for (std::uint32_t w = 0; w < N; ++w)
    if (out.sigma1(w) == w) ok2 = ok2 && out.sigma2(w) != w;
  rep.add("sigma2 is a p-cycle moving the fixed points of sigma1", "exact-evaluation", ok2);

  JordanOptions jo;
  jo.seed = Rng(opt.seed).split("jordan").next();
  out.jordan = jordan_alt_test_detail({out.sigma1, out.sigma2}, jo);
  rep.add("jordan test certifies <sigma1, sigma2> = Alt(N)", "witness-replay", out.jordan.certified,
          "prime " + std::to_string(out.jordan.prime));
  BsgsOptions bo;
  bo.seed = Rng(opt.seed).split("two-gen-bsgs").next();
  BigInt order = bsgs({out.sigma1, out.sigma2}, bo).order();
  BigInt alt_n = factorial(static_cast<unsigned>(N)) / 2;
  rep.add("bsgs cross-check of <sigma1, sigma2>", "bsgs-order", order == alt_n);

  // omega: 3-cycle on words of length n-1 sending x1^(n-1) to x_d^(n-1)
  std::uint64_t N1 = ipow(d, n - 1);
  std::uint32_t w_from = rank(Word(n - 1, 0)), w_to = rank(Word(n - 1, o));
  std::uint32_t w3 = 0;
  while (w3 == w_from || w3 == w_to) ++w3;
  out.omega = Perm::cycle(static_cast<std::uint32_t>(N1), {w_from, w_to, w3});

  auto bg = model->b_generators();
  out.tau1 = bg.at(0);
  out.tau2 = bg.at(1);
  BigInt o1 = std::get<Perm>(out.tau1).order(), o2 = std::get<Perm>(out.tau2).order();
  rep.quantity("ord(tau1)", to_decimal(o1));
  rep.quantity("ord(tau2)", to_decimal(o2));
  rep.add("orders of tau1, tau2 coprime to p", "exact-evaluation",
          gcd_big(o1, BigInt(static_cast<unsigned long>(p))) == 1 &&
              gcd_big(o2, BigInt(static_cast<unsigned long>(p))) == 1);
  BigInt border = bsgs({std::get<Perm>(out.tau1), std::get<Perm>(out.tau2)}, bo).order();
  rep.add("tau1, tau2 generate B", "bsgs-order",
          border == factorial(static_cast<unsigned>(cfg.points.size())) / 2);

  LazyElement ds1 = LazyElement::delta(mp, n, PrefixMap::from_perm(al, n, out.sigma1));
  LazyElement ds2 = LazyElement::delta(mp, n, PrefixMap::from_perm(al, n, out.sigma2));
  LazyElement t1 = LazyElement::tilde(mp, n, out.tau1);
  LazyElement t2 = LazyElement::tilde(mp, n, out.tau2);
  LazyElement dw = LazyElement::delta(mp, n - 1, PrefixMap::from_perm(al, n - 1, out.omega));
  out.c = dw.inverse() * t2 * dw;
  out.a = ds1 * t1;
  out.b = ds2 * out.c;
  std::size_t top = model->max_level();
  rep.add("Delta_n(sigma1) commutes with tau1~^[n] at all levels", "exact-evaluation",
          equal_up_to(ds1 * t1, t1 * ds1, top));
  rep.add("Delta_n(sigma2) commutes with c at all levels", "exact-evaluation",
          equal_up_to(ds2 * out.c, out.c * ds2, top));
  rep.level_to = top;
  rep.finalize();
  return out;
}

VerificationReport verify_two_generation(const LazyElement& a, const LazyElement& b, std::size_t from,
                                         std::size_t to, const VerifyOptions& opt) {
  VerificationReport r = check_frame_surjectivity(a.model_ptr(), from, to, {a, b}, opt);
  r.check_id = "two-generation";
  return r;
}

TwoGenSl build_two_generators_sl(const std::shared_ptr<const LinearModel>& model, const VerifyOptions& opt) {
  const LinearModel& m = *model;
  const Field& f = m.field();
  const std::uint32_t d = m.d();
  TwoGenSl out;
  VerificationReport& rep = out.certificate;
  rep.check_id = "two-generators-sl";
  rep.spec_id = m.id();
  rep.method = "witness-replay";
  std::size_t n = 1;
  while (ipow(d, n) < 24) ++n;
  const std::uint64_t N = ipow(d, n);
  const std::uint64_t p = nagura_prime(N);
  out.n = n;
  out.p = p;
  rep.level_from = n;
  rep.level_to = m.max_level();
  rep.quantity("n", std::to_string(n));
  rep.quantity("N", std::to_string(N));
  rep.quantity("p", std::to_string(p));
  if (n > m.max_level()) {
    rep.verdict = Verdict::skipped_cap;
    rep.notes.push_back("level n above max_level");
    return out;
  }
  rep.add("p prime in the window", "exact-evaluation", p != 0 && 2 * p > N && 3 * p < 2 * N && p + 8 <= N);
  std::uint64_t vec_cap = 1024;
  if (ipow(f.q(), 2 * d) - 1 > vec_cap) {
    rep.verdict = Verdict::skipped_cap;
    rep.notes.push_back("generation certificate for SL_2d needs the vector action, above cap");
    return out;
  }

  Rng rng = Rng(opt.seed).split("two-generators-sl");
  BsgsOptions bo;
  bo.seed = Rng(opt.seed).split("two-gen-sl-bsgs").next();
  auto find_pair = [&](std::size_t k, MatFq& two, MatFq& three) {
    BigInt target = sl_order(f.q(), k);
    for (std::size_t attempt = 0; attempt < opt.search_budget; ++attempt) {
      auto x = random_of_order(m, k, 2, rng);
      auto y = random_of_order(m, k, 3, rng);
      if (!x || !y) continue;
      if (bsgs({vector_action(*x), vector_action(*y)}, bo).order() == target) {
        two = *x;
        three = *y;
        return true;
      }
    }
    return false;
  };
  if (!find_pair(5, out.A, out.B) || !find_pair(2 * d, out.s, out.t)) {
    rep.verdict = Verdict::skipped_search;
    rep.notes.push_back("(2,3)-search budget exhausted");
    return out;
  }
  rep.add("<A, B> = SL_5 with ord 2 and 3", "bsgs-order", true);
  rep.add("<s, t> = SL_2d with ord 2 and 3", "bsgs-order", true);

  std::vector<std::uint32_t> cyc(p);
  std::iota(cyc.begin(), cyc.end(), 0u);
  MatFq C = perm_matrix(f, Perm::cycle(static_cast<std::uint32_t>(p), cyc));
  MatFq mid = MatFq::identity(f, N - p - 5);
  out.U = block_diag({C, mid, out.A});
  out.V = block_diag({out.B, mid, C});
  auto exact_order = [&](const MatFq& x, std::uint64_t k, std::uint64_t small) {
    return mat_power(x, p * k).is_identity() && !mat_power(x, p).is_identity() &&
           !mat_power(x, small).is_identity();
  };
  rep.add("ord(U) = 2p", "exact-evaluation", exact_order(out.U, 2, 2));
  rep.add("ord(V) = 3p", "exact-evaluation", exact_order(out.V, 3, 3));
  Perm u2 = matrix_perm(mat_power(out.U, 2)), v3 = matrix_perm(mat_power(out.V, 3));
  JordanOptions jo;
  jo.seed = Rng(opt.seed).split("jordan-sl").next();
  rep.add("U^2, V^3 generate the alternating permutation matrices", "witness-replay",
          jordan_alt_test({u2, v3}, jo));

  // Move the three level-n prefixes of the B-support to basis vectors that U
  // (resp. V) fixes.
  const Alphabet al(d);
  const Letter o = static_cast<Letter>(d - 1);
  std::vector<std::size_t> pre;
  for (Letter last : {Letter{0}, Letter{1}, o}) {
    Word w(n - 1, o);
    w.push_back(last);
    pre.push_back(al.rank(w));
  }
  auto mover = [&](std::size_t lo, std::size_t hi) {
    MatFq w = MatFq::identity(f, N);
    std::size_t k = 0;
    for (std::size_t z = lo; z < hi && k < pre.size(); ++z) {
      if (std::find(pre.begin(), pre.end(), z) != pre.end()) continue;
      w = signed_perm(f, N, pre[k++], z) * w;
    }
    if (k < pre.size()) throw PreconditionError("no room for the conjugated B-support");
    return w;
  };
  MatFq w1 = mover(p, N - 5), w2 = mover(5, N - p);
  out.omega1 = w1;
  out.omega2 = w2;
  ModelPtr mp = model;
  LazyElement dU = LazyElement::delta(mp, n, out.U), dV = LazyElement::delta(mp, n, out.V);
  LazyElement o1 = LazyElement::delta(mp, n, w1), o2 = LazyElement::delta(mp, n, w2);
  LazyElement ct = o1 * LazyElement::tilde(mp, n, out.t) * o1.inverse();
  LazyElement cs = o2 * LazyElement::tilde(mp, n, out.s) * o2.inverse();
  out.a = dU * ct;
  out.b = dV * cs;
  std::size_t top = m.max_level();
  rep.add("Delta_n(U) commutes with the conjugated t~", "exact-evaluation", equal_up_to(dU * ct, ct * dU, top));
  rep.add("Delta_n(V) commutes with the conjugated s~", "exact-evaluation", equal_up_to(dV * cs, cs * dV, top));
  LazyElement a3 = *out.a * *out.a * *out.a, b2 = *out.b * *out.b;
  rep.add("a^3 = Delta_n(U^3)", "witness-replay",
          equal_up_to(a3, LazyElement::delta(mp, n, mat_power(out.U, 3)), top));
  rep.add("b^2 = Delta_n(V^2)", "witness-replay",
          equal_up_to(b2, LazyElement::delta(mp, n, mat_power(out.V, 2)), top));
  rep.notes.push_back("b carries the conjugation of s~ by a signed permutation so that it commutes with Delta_n(V)");
  rep.finalize();
  return out;
}

}  // namespace telescopes
