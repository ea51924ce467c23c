#include "telescopes/verify.hpp"

#include <algorithm>
#include <numeric>

#include "telescopes/transvection.hpp"

namespace telescopes {

namespace {

LevelElem level_commutator(const LevelElem& a, const LevelElem& b) {
  return level_mul(level_mul(a, b), level_mul(level_inv(a), level_inv(b)));
}

// h^-1 x h
LevelElem level_conjugate(const LevelElem& x, const LevelElem& h) {
  return level_mul(level_inv(h), level_mul(x, h));
}

std::vector<BElem> sample_b(const TelescopeModel& m, Rng& rng, std::size_t random_count) {
  std::vector<BElem> out;
  auto gens = m.b_generators();
  for (std::size_t i = 0; i < gens.size() && i < 2; ++i) out.push_back(gens[i]);
  for (std::size_t i = 0; i < random_count; ++i) out.push_back(m.b_random(rng));
  return out;
}

// Keeps the first failing index description per sub-check.
struct Tally {
  std::size_t tried = 0, failed = 0;
  std::string first;
  void record(bool ok, const std::string& where) {
    ++tried;
    if (!ok && failed++ == 0) first = where;
  }
  void emit(VerificationReport& r, const std::string& name, const std::string& method) const {
    std::string detail = std::to_string(tried) + " cases";
    if (failed) detail += ", " + std::to_string(failed) + " failed, first at " + first;
    r.add(name, method, failed == 0, detail);
  }
};

std::string idx(std::initializer_list<std::size_t> xs, const char* names) {
  std::string s;
  std::size_t k = 0;
  for (auto x : xs) {
    if (k) s += ",";
    s += names[k++];
    s += "=" + std::to_string(x);
  }
  return s;
}

bool symbolic_available(const TelescopeModel& m) {
  return m.max_level() >= 2 && m.b_support(2, 2).has_value();
}

bool matrix_engine(const TelescopeModel& m) { return m.engine() != Engine::permutation; }

CylinderUnion conjugated_support(const TelescopeModel& m, std::size_t i, std::size_t k,
                                 std::size_t level) {
  // supp(x^a) = a^-1(supp x)
  PrefixMap inv = inverse(m.alpha_word_map(i)->lift(level));
  CylinderUnion out;
  const CylinderUnion supp = *m.b_support(k, level);
  for (const auto& c : supp) {
    CylinderUnion img = inv.image(c);
    out.insert(out.end(), img.begin(), img.end());
  }
  return out;
}

}  // namespace

VerificationReport check_commutator_axiom(const ModelPtr& model, std::size_t L,
                                          const VerifyOptions& opt) {
  const TelescopeModel& m = *model;
  if (L > m.max_level()) throw PreconditionError("level above max_level");
  VerificationReport r;
  r.check_id = "commutator-axiom";
  r.spec_id = m.id();
  r.level_from = 2;
  r.level_to = L;
  bool symbolic = symbolic_available(m);
  r.method = symbolic ? "symbolic-cylinder" : "exact-evaluation";
  Rng rng = Rng(opt.seed).split("commutator-axiom");
  if (symbolic) {
    Tally t;
    for (std::size_t j = 3; j <= L; ++j)
      for (std::size_t i = 2; i < j; ++i)
        t.record(unions_disjoint(*m.b_support(i, j), *m.b_support(j, j)), idx({i, j}, "ij"));
    t.emit(r, "supports of B_{i,j} and B_j disjoint", "symbolic-cylinder");
  }
  std::size_t exact_to = symbolic ? std::min(L, opt.exact_level) : L;
  auto bs = sample_b(m, rng, opt.samples);
  Tally e;
  for (std::size_t j = 3; j <= exact_to; ++j)
    for (std::size_t i = 2; i < j; ++i)
      for (const auto& b : bs)
        for (const auto& c : bs) {
          LevelElem x = m.iota(m.phi(i, b), i, j);
          LevelElem y = m.phi(j, c);
          e.record(m.is_identity(level_commutator(x, y), j), idx({i, j}, "ij"));
        }
  if (exact_to >= 3) e.emit(r, "sampled commutators trivial at levels <= " + std::to_string(exact_to),
                            "exact-evaluation");
  r.finalize();
  return r;
}

VerificationReport check_flexibility(const ModelPtr& model, std::size_t L, const VerifyOptions& opt) {
  const TelescopeModel& m = *model;
  if (L > m.max_level()) throw PreconditionError("level above max_level");
  VerificationReport r;
  r.check_id = "flexibility";
  r.spec_id = m.id();
  r.level_from = 1;
  r.level_to = L;
  bool symbolic = symbolic_available(m) && m.alpha_word_map(1).has_value();
  r.method = symbolic ? "symbolic-cylinder" : "exact-evaluation";
  if (symbolic) {
    Tally f1, f2, f3;
    for (std::size_t i = 1; i + 1 <= L; ++i) {
      CylinderUnion a = m.alpha_word_map(i)->lift(i + 1).support(i + 1);
      f1.record(unions_disjoint(a, *m.b_support(i + 1, i + 1)), idx({i}, "i"));
    }
    for (std::size_t mm = 3; mm <= L; ++mm)
      for (std::size_t i = 1; i + 2 <= mm; ++i)
        for (std::size_t k = i + 2; k <= mm; ++k) {
          CylinderUnion ck = conjugated_support(m, i, k, mm);
          for (std::size_t l = i + 2; l <= mm; ++l)
            f2.record(unions_disjoint(ck, *m.b_support(l, mm)), idx({i, k, l, mm}, "iklm"));
          for (std::size_t j = 1; j < i; ++j)
            for (std::size_t l = j + 2; l <= mm; ++l)
              f3.record(unions_disjoint(ck, conjugated_support(m, j, l, mm)),
                        idx({i, j, k, l, mm}, "ijklm"));
        }
    f1.emit(r, "F1 supports disjoint", "symbolic-cylinder");
    f2.emit(r, "F2 supports disjoint", "symbolic-cylinder");
    f3.emit(r, "F3 supports disjoint", "symbolic-cylinder");
  }
  std::size_t exact_to = symbolic ? std::min(L, opt.exact_level) : L;
  Rng rng = Rng(opt.seed).split("flexibility");
  auto bs = sample_b(m, rng, opt.samples);
  Tally e1, e2, e3;
  for (std::size_t i = 1; i + 1 <= exact_to; ++i) {
    LevelElem a = m.iota(m.alpha(i), i, i + 1);
    for (const auto& b : bs)
      e1.record(m.is_identity(level_commutator(a, m.phi(i + 1, b)), i + 1), idx({i}, "i"));
  }
  for (std::size_t mm = 3; mm <= exact_to; ++mm)
    for (std::size_t i = 1; i + 2 <= mm; ++i) {
      LevelElem ai = m.iota(m.alpha(i), i, mm);
      for (std::size_t k = i + 2; k <= mm; ++k)
        for (const auto& b : bs) {
          LevelElem x = level_conjugate(m.iota(m.phi(k, b), k, mm), ai);
          for (std::size_t l = i + 2; l <= mm; ++l)
            for (const auto& c : bs)
              e2.record(m.is_identity(level_commutator(x, m.iota(m.phi(l, c), l, mm)), mm),
                        idx({i, k, l, mm}, "iklm"));
          for (std::size_t j = 1; j < i; ++j) {
            LevelElem aj = m.iota(m.alpha(j), j, mm);
            for (std::size_t l = j + 2; l <= mm; ++l)
              for (const auto& c : bs) {
                LevelElem y = level_conjugate(m.iota(m.phi(l, c), l, mm), aj);
                e3.record(m.is_identity(level_commutator(x, y), mm), idx({i, j, k, l, mm}, "ijklm"));
              }
          }
        }
    }
  std::string lv = " at levels <= " + std::to_string(exact_to);
  e1.emit(r, "F1 sampled commutators" + lv, "exact-evaluation");
  if (exact_to >= 3) {
    e2.emit(r, "F2 sampled commutators" + lv, "exact-evaluation");
    if (exact_to >= 4) e3.emit(r, "F3 sampled commutators" + lv, "exact-evaluation");
  }
  r.finalize();
  return r;
}

VerificationReport check_generation_axiom(const ModelPtr& model, std::size_t ell,
                                          const VerifyOptions& opt) {
  const TelescopeModel& m = *model;
  if (ell < 2 || ell > m.max_level()) throw PreconditionError("generation check needs 2 <= l <= max_level");
  VerificationReport r;
  r.check_id = "generation-axiom";
  r.spec_id = m.id();
  r.level_from = r.level_to = ell;
  if (!matrix_engine(m)) {
    r.method = "normal-closure";
    std::uint64_t deg = m.alphabet().count(m.word_length(ell));
    r.quantity("degree", std::to_string(deg));
    if (deg > opt.degree_cap) {
      r.verdict = Verdict::skipped_cap;
      r.notes.push_back("degree " + std::to_string(deg) + " above cap " + std::to_string(opt.degree_cap));
      return r;
    }
    std::vector<Perm> bl, conj;
    for (const auto& b : m.b_generators()) bl.push_back(level_to_perm(m.phi(ell, b)));
    for (const auto& g : m.level_generators(ell - 1)) conj.push_back(level_to_perm(m.iota(g, ell - 1, ell)));
    conj.insert(conj.end(), bl.begin(), bl.end());
    BsgsOptions bo;
    bo.seed = Rng(opt.seed).split("generation").next();
    bo.degree_cap = opt.degree_cap;
    BigInt order = normal_closure(bl, conj, bo).order();
    BigInt expect = m.level_order(ell);
    r.quantity("order", to_decimal(order));
    r.quantity("expected", to_decimal(expect));
    r.add("normal closure order equals |Omega_l|", "normal-closure", order == expect);
  } else {
    r.method = "witness-replay";
    const auto* lin = dynamic_cast<const LinearModel*>(&m);
    if (!lin) {
      if (const auto* qm = dynamic_cast<const QuotientModel*>(&m))
        lin = dynamic_cast<const LinearModel*>(&qm->base());
    }
    if (!lin) throw PreconditionError("matrix generation check needs a linear telescope");
    std::size_t dim = lin->dim(ell);
    r.quantity("dimension", std::to_string(dim));
    if (dim > opt.matrix_dim_cap) {
      r.verdict = Verdict::skipped_cap;
      r.notes.push_back("dimension above cap " + std::to_string(opt.matrix_dim_cap));
      return r;
    }
    const Field& f = lin->field();
    std::vector<MatFq> gens;
    std::vector<SeedTransvection> seeds;
    for (const auto& b : lin->b_generators()) {
      MatFq g = std::get<MatFq>(lin->phi(ell, b));
      std::size_t gi = gens.size();
      gens.push_back(g);
      // B generators are elementary; read off the off-diagonal entry.
      std::size_t found = 0;
      SeedTransvection s;
      for (std::size_t u = 0; u < dim; ++u)
        for (std::size_t v = 0; v < dim; ++v)
          if (u != v && g.at(u, v) != 0) {
            ++found;
            s.u = u;
            s.v = v;
            s.r = g.at(u, v);
          }
      if (found != 1) continue;
      s.word = {{gi, false}};
      seeds.push_back(s);
    }
    std::vector<MatFq> conj;
    for (const auto& g : lin->monomial_generators(ell - 1))
      conj.push_back(std::get<MatFq>(lin->iota(g, ell - 1, ell)));
    TransvectionClosure tc = transvection_closure(f, dim, seeds, conj);
    std::size_t covered = tc.positions().size();
    r.quantity("positions", std::to_string(covered));
    r.quantity("expected", std::to_string(dim * (dim - 1)));
    r.add("closure covers every position", "witness-replay", tc.covers_all());
    std::size_t bad = 0;
    for (const auto& [key, node] : tc.items) {
      auto [u, v, c] = key;
      if (!(tc.replay(node, gens, conj) == elementary(f, dim, u, v, c))) ++bad;
    }
    r.quantity("replayed", std::to_string(tc.items.size()));
    r.add("every witness replays to its transvection", "witness-replay", bad == 0,
          std::to_string(bad) + " mismatches");
  }
  r.finalize();
  return r;
}

std::optional<BigInt> truncated_order(const std::vector<LazyElement>& gens, std::size_t from,
                                      std::size_t to, const VerifyOptions& opt) {
  if (gens.empty()) return BigInt(1);
  const TelescopeModel& m = gens.front().model();
  if (matrix_engine(m)) return std::nullopt;
  std::uint64_t deg = 0;
  for (std::size_t i = from; i <= to; ++i) deg += m.alphabet().count(m.word_length(i));
  if (deg > opt.degree_cap) return std::nullopt;
  std::vector<Perm> perms;
  for (const auto& g : gens) {
    Perm acc = level_to_perm(g.project(from));
    for (std::size_t i = from + 1; i <= to; ++i) acc = direct_sum(acc, level_to_perm(g.project(i)));
    perms.push_back(std::move(acc));
  }
  BsgsOptions bo;
  bo.seed = Rng(opt.seed).split("truncated-order").next();
  bo.degree_cap = opt.degree_cap;
  return bsgs(perms, bo).order();
}

BigInt product_of_level_orders(const TelescopeModel& model, std::size_t from, std::size_t to) {
  BigInt out = 1;
  for (std::size_t i = from; i <= to; ++i) out *= model.level_order(i);
  return out;
}

VerificationReport check_frame_surjectivity(const ModelPtr& model, std::size_t from, std::size_t to,
                                            const std::vector<LazyElement>& gens,
                                            const VerifyOptions& opt) {
  const TelescopeModel& m = *model;
  VerificationReport r;
  r.check_id = "frame-surjectivity";
  r.spec_id = m.id();
  r.level_from = from;
  r.level_to = to;
  r.method = "bsgs-order";
  r.quantity("generators", std::to_string(gens.size()));
  auto order = truncated_order(gens, from, to, opt);
  if (!order) {
    r.verdict = Verdict::skipped_cap;
    r.notes.push_back(matrix_engine(m) ? "matrix engine: truncated product not enumerated"
                                       : "degree above cap");
    return r;
  }
  BigInt expect = product_of_level_orders(m, from, to);
  r.quantity("order", to_decimal(*order));
  r.quantity("expected", to_decimal(expect));
  r.add("truncated order equals product of level orders", "bsgs-order", *order == expect);
  r.finalize();
  return r;
}

std::uint64_t nagura_prime(std::uint64_t N) {
  auto is_prime = [](std::uint64_t x) {
    if (x < 2) return false;
    for (std::uint64_t f = 2; f * f <= x; ++f)
      if (x % f == 0) return false;
    return true;
  };
  // N/2 < p < 2N/3  <=>  2p > N and 3p < 2N
  for (std::uint64_t p = N / 2 + 1; 3 * p < 2 * N; ++p)
    if (2 * p > N && is_prime(p)) return p;
  return 0;
}

VerificationReport check_telescope_identities(const ModelPtr& model, std::size_t L, std::size_t imax,
                                              std::size_t pairs, const VerifyOptions& opt) {
  const TelescopeModel& m = *model;
  if (L > m.max_level()) throw PreconditionError("level above max_level");
  VerificationReport r;
  r.check_id = "telescope-identities";
  r.spec_id = m.id();
  r.level_from = 1;
  r.level_to = L;
  r.method = "exact-evaluation";
  Rng rng = Rng(opt.seed).split("telescope-identities");
  Tally rec, hom, comm;
  for (std::size_t t = 0; t < pairs; ++t) {
    BElem h = m.b_random(rng), k = m.b_random(rng);
    for (std::size_t i = 1; i <= imax; ++i) {
      std::string where = "pair " + std::to_string(t) + ", i=" + std::to_string(i);
      LazyElement hi = LazyElement::tilde(model, i, h);
      LazyElement ki = LazyElement::tilde(model, i, k);
      if (i + 1 <= L) {
        LazyElement step = LazyElement::delta(model, i + 1, m.phi(i + 1, h));
        LazyElement next = LazyElement::tilde(model, i + 1, h);
        rec.record(equal_up_to(hi, step * next, L) && equal_up_to(hi, next * step, L), where);
      }
      hom.record(equal_up_to(LazyElement::tilde(model, i, b_mul(h, k)), hi * ki, L), where);
      if (i + 1 <= L) {
        LazyElement a = LazyElement::delta(model, i, m.alpha(i));
        LazyElement lhs = commutator(hi, a * ki * a.inverse());
        BElem hk = b_mul(b_mul(h, k), b_mul(b_inv(h), b_inv(k)));
        LazyElement rhs = LazyElement::delta(model, i + 1, m.phi(i + 1, hk));
        comm.record(equal_up_to(lhs, rhs, L), where);
      }
    }
  }
  r.quantity("pairs", std::to_string(pairs));
  rec.emit(r, "tilde^[n] = Delta_{n+1}(phi_{n+1}(b)) tilde^[n+1], both orders", "exact-evaluation");
  hom.emit(r, "b -> tilde^[n](b) is a homomorphism", "exact-evaluation");
  comm.emit(r, "[h~, a k~ a^-1] = Delta_{i+1}(phi_{i+1}([h,k]))", "exact-evaluation");
  r.finalize();
  return r;
}

VerificationReport check_scalar_transport(const ModelPtr& model, std::size_t L) {
  const TelescopeModel& m = *model;
  VerificationReport r;
  r.check_id = "scalar-transport";
  r.spec_id = m.id();
  r.level_from = 1;
  r.level_to = L;
  r.method = "exact-evaluation";
  if (!matrix_engine(m)) throw PreconditionError("scalar transport needs a matrix telescope");
  Tally t;
  std::size_t scalars = 0;
  for (std::size_t i = 1; i <= L; ++i) {
    const MatFq id = std::get<MatFq>(m.identity(i));
    const Field& f = id.field();
    for (unsigned lam = 1; lam < f.q(); ++lam) {
      MatFq s = MatFq::scalar(f, id.dim(), static_cast<std::uint8_t>(lam));
      if (s.det() != 1) continue;
      ++scalars;
      for (std::size_t j = i + 1; j <= L; ++j) {
        auto img = std::get<MatFq>(m.iota(s, i, j));
        auto v = is_scalar(img);
        t.record(v.has_value() && *v == lam, idx({i, j, lam}, "ijl"));
      }
    }
  }
  r.quantity("central scalars", std::to_string(scalars));
  t.emit(r, "iota maps scalars to the same scalar", "exact-evaluation");
  r.finalize();
  return r;
}

VerificationReport check_linear_noncommute(unsigned q, std::size_t instances, const VerifyOptions& opt) {
  const Field& f = Field::get(q);
  VerificationReport r;
  r.check_id = "linear-non-commute";
  r.spec_id = "F" + std::to_string(q);
  r.method = "exact-evaluation";
  Rng rng = Rng(opt.seed).split("linear-non-commute-" + std::to_string(q));
  auto random_sl = [&](std::size_t n) {
    MatFq m = MatFq::identity(f, n);
    for (std::size_t step = 0; step < 4 * n; ++step) {
      std::size_t y = rng.below(n), z = rng.below(n - 1);
      if (z >= y) ++z;
      auto c = static_cast<std::uint8_t>(1 + rng.below(q - 1));
      for (std::size_t j = 0; j < n; ++j) m.row(y)[j] = f.add(m.row(y)[j], f.mul(c, m.row(z)[j]));
    }
    return m;
  };
  Tally t;
  std::map<std::string, std::size_t> branches;
  std::size_t produced = 0;
  while (produced < instances) {
    std::size_t n = 3 + rng.below(4);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    std::size_t usize = 2 + rng.below(n - 2);
    std::vector<std::size_t> u(perm.begin(), perm.begin() + usize), w(perm.begin() + usize, perm.end());
    std::sort(u.begin(), u.end());
    std::sort(w.begin(), w.end());
    MatFq alpha = random_sl(n);
    if (produced % 3 == 1) {
      // alpha scalar on U, with a nonzero block from U to W: the harder branch.
      auto lam = static_cast<std::uint8_t>(1 + rng.below(q - 1));
      for (auto a : u) {
        for (std::size_t j = 0; j < n; ++j) alpha.set(j, a, 0);
        alpha.set(a, a, lam);
        for (auto b : w) alpha.set(b, a, static_cast<std::uint8_t>(rng.below(q)));
      }
      if (alpha.det() == 0) continue;
    }
    // Precondition: alpha restricted to U is not a scalar multiple of id_U.
    bool scalar_on_u = true;
    std::uint8_t lam0 = alpha.at(u[0], u[0]);
    for (auto a : u)
      for (std::size_t j = 0; j < n; ++j)
        if (alpha.at(j, a) != (j == a ? lam0 : 0)) scalar_on_u = false;
    if (scalar_on_u) continue;
    ++produced;
    std::string where = "instance " + std::to_string(produced - 1);
    try {
      NonCommutingTau res = find_noncommuting_tau(alpha, u, w);
      ++branches[res.branch];
      bool ok = res.tau.det() == 1;
      for (auto b : w)
        for (std::size_t j = 0; j < n; ++j)
          ok = ok && res.tau.at(b, j) == (b == j) && res.tau.at(j, b) == (b == j);
      ok = ok && !is_scalar(commutator(alpha, res.tau)).has_value();
      t.record(ok, where);
    } catch (const PreconditionError& e) {
      t.record(false, where + ": " + e.what());
    }
  }
  r.quantity("instances", std::to_string(instances));
  for (const auto& [b, c] : branches) r.quantity("branch " + b, std::to_string(c));
  t.emit(r, "tau in SL(U) with non-scalar commutator", "exact-evaluation");
  r.finalize();
  return r;
}

LazyElement random_generator_word(const ModelPtr& model, std::size_t length, Rng& rng) {
  LazyElement g(model);
  for (std::size_t k = 0; k < length; ++k) {
    LazyElement a = rng.coin() ? LazyElement::delta(model, 1, model->random_level_element(1, rng))
                               : LazyElement::tilde(model, 1, model->b_random(rng));
    g = g * (rng.coin() ? a : a.inverse());
  }
  return g;
}

}  // namespace telescopes
