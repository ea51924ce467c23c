#include "telescopes/permgroup.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <unordered_set>

namespace telescopes {

namespace {

void check_degrees(std::uint32_t degree, const std::vector<Perm>& gens) {
  for (const auto& g : gens)
    if (g.degree() != degree) throw PreconditionError("generator degree mismatch");
}

class ProductReplacement {
 public:
  ProductReplacement(const std::vector<Perm>& gens, Rng rng) : rng_(rng) {
    std::size_t n = std::max<std::size_t>(10, gens.size());
    for (std::size_t i = 0; i < n; ++i) slots_.push_back(gens[i % gens.size()]);
    acc_ = Perm(gens.front().degree());
    for (int i = 0; i < 60; ++i) next();
  }

  const Perm& next() {
    std::size_t n = slots_.size();
    std::size_t i = rng_.below(n);
    std::size_t j = rng_.below(n - 1);
    if (j >= i) ++j;
    slots_[i] = rng_.coin() ? compose(slots_[i], slots_[j]) : compose(slots_[j], slots_[i]);
    acc_ = compose(acc_, slots_[i]);
    return acc_;
  }

 private:
  Rng rng_;
  std::vector<Perm> slots_;
  Perm acc_;
};

std::vector<std::vector<std::uint32_t>> orbits_of(std::uint32_t degree,
                                                  const std::vector<Perm>& gens) {
  std::vector<char> seen(degree, 0);
  std::vector<std::vector<std::uint32_t>> out;
  for (std::uint32_t x = 0; x < degree; ++x) {
    if (seen[x]) continue;
    std::vector<std::uint32_t> orb{x};
    seen[x] = 1;
    for (std::size_t k = 0; k < orb.size(); ++k)
      for (const auto& g : gens) {
        auto y = g(orb[k]);
        if (!seen[y]) {
          seen[y] = 1;
          orb.push_back(y);
        }
      }
    out.push_back(std::move(orb));
  }
  return out;
}

}  // namespace

PermGroup PermGroup::build(std::uint32_t degree, const std::vector<Perm>& gens,
                           const BsgsOptions& opts) {
  if (degree > opts.degree_cap)
    throw CapExceeded("degree " + std::to_string(degree) + " exceeds cap " +
                      std::to_string(opts.degree_cap));
  check_degrees(degree, gens);
  PermGroup g;
  g.degree_ = degree;
  g.opts_ = opts;
  g.rng_ = Rng(opts.seed).split("bsgs");
  for (const auto& p : gens)
    if (!p.is_identity()) g.gens_.push_back(p);
  for (const auto& p : g.gens_) {
    std::size_t lvl;
    Perm h = g.sift(p, 0, &lvl);
    if (!h.is_identity()) g.add_strong(h, lvl);
  }
  g.complete();
  return g;
}

std::vector<std::uint32_t> PermGroup::base() const {
  std::vector<std::uint32_t> b;
  for (const auto& l : levels_) b.push_back(l.point);
  return b;
}

std::vector<std::size_t> PermGroup::fundamental_orbit_sizes() const {
  std::vector<std::size_t> s;
  for (const auto& l : levels_) s.push_back(l.orbit.size());
  return s;
}

BigInt PermGroup::order() const {
  BigInt n = 1;
  for (const auto& l : levels_) n *= static_cast<unsigned long>(l.orbit.size());
  return n;
}

Perm PermGroup::sift(Perm g, std::size_t from, std::size_t* stop) const {
  for (std::size_t i = from; i < levels_.size(); ++i) {
    const Level& l = levels_[i];
    auto k = l.where[g(l.point)];
    if (k < 0) {
      *stop = i;
      return g;
    }
    if (k > 0) g = compose(l.u_inv[static_cast<std::size_t>(k)], g);
  }
  *stop = levels_.size();
  return g;
}

bool PermGroup::contains(const Perm& g) const {
  if (g.degree() != degree_) return false;
  std::size_t lvl;
  return sift(g, 0, &lvl).is_identity();
}

void PermGroup::add_strong(const Perm& h, std::size_t level) {
  std::size_t idx = strong_.size();
  strong_.push_back(h);
  strong_inv_.push_back(inverse(h));
  if (level == levels_.size()) {
    Level l;
    auto sup = support_of(h);
    l.point = sup.front();
    l.where.assign(degree_, -1);
    l.where[l.point] = 0;
    l.orbit.push_back(l.point);
    l.u_inv.push_back(Perm(degree_));
    levels_.push_back(std::move(l));
  }
  for (std::size_t i = 0; i <= level; ++i) {
    levels_[i].gens.push_back(static_cast<std::uint32_t>(idx));
    grow_orbit(i, idx);
  }
}

void PermGroup::grow_orbit(std::size_t level, std::size_t new_gen) {
  Level& l = levels_[level];
  auto add = [&](std::uint32_t from_k, std::size_t s) {
    std::uint32_t y = strong_[s](l.orbit[from_k]);
    if (l.where[y] >= 0) return;
    l.where[y] = static_cast<std::int32_t>(l.orbit.size());
    l.orbit.push_back(y);
    l.u_inv.push_back(compose(l.u_inv[from_k], strong_inv_[s]));
  };
  std::size_t old = l.orbit.size();
  for (std::size_t k = 0; k < old; ++k) add(static_cast<std::uint32_t>(k), new_gen);
  for (std::size_t k = old; k < l.orbit.size(); ++k)
    for (auto s : l.gens) add(static_cast<std::uint32_t>(k), s);
}

void PermGroup::recompute_bound() {
  bound_ = 1;
  for (const auto& orb : orbits_of(degree_, gens_)) {
    if (orb.size() < 2) continue;
    std::vector<char> in(degree_, 0);
    for (auto x : orb) in[x] = 1;
    bool all_even = true;
    for (const auto& g : gens_) {
      std::size_t even_cycles = 0;
      for (const auto& c : g.cycles())
        if (in[c.front()] && c.size() % 2 == 0) ++even_cycles;
      if (even_cycles % 2) all_even = false;
    }
    BigInt f = factorial(static_cast<unsigned>(orb.size()));
    if (all_even) f /= 2;
    bound_ *= f;
  }
}

void PermGroup::complete() {
  if (gens_.empty()) return;
  recompute_bound();
  for (;;) {
    if (order() == bound_) return;
    ProductReplacement pr(gens_, rng_.split("pr" + std::to_string(strong_.size())));
    std::size_t streak = 0;
    while (streak < opts_.sift_streak) {
      std::size_t lvl;
      Perm h = sift(pr.next(), 0, &lvl);
      if (h.is_identity()) {
        ++streak;
        continue;
      }
      add_strong(h, lvl);
      streak = 0;
      if (order() == bound_) return;
    }
    if (!schreier_pass()) return;
  }
}

bool PermGroup::schreier_pass() {
  for (std::size_t i = levels_.size(); i-- > 0;) {
    // Copies: add_strong may reallocate the level vectors.
    std::vector<std::uint32_t> gens = levels_[i].gens;
    std::size_t orbit_size = levels_[i].orbit.size();
    for (std::size_t k = 0; k < orbit_size; ++k) {
      for (auto s : gens) {
        const Level& l = levels_[i];
        std::uint32_t gamma = l.orbit[k];
        std::uint32_t delta = strong_[s](gamma);
        Perm u_gamma = inverse(l.u_inv[k]);
        Perm g = compose(l.u_inv[static_cast<std::size_t>(l.where[delta])],
                         compose(strong_[s], u_gamma));
        std::size_t lvl;
        Perm h = sift(std::move(g), i + 1, &lvl);
        if (!h.is_identity()) {
          add_strong(h, lvl);
          return true;
        }
      }
    }
  }
  return false;
}

bool PermGroup::extend(const Perm& g) {
  if (g.degree() != degree_) throw PreconditionError("generator degree mismatch");
  if (contains(g)) return false;
  gens_.push_back(g);
  std::size_t lvl;
  Perm h = sift(g, 0, &lvl);
  add_strong(h, lvl);
  complete();
  return true;
}

bool PermGroup::extend_deferred(const Perm& g) {
  if (g.degree() != degree_) throw PreconditionError("generator degree mismatch");
  std::size_t lvl;
  Perm h = sift(g, 0, &lvl);
  if (h.is_identity()) return false;
  gens_.push_back(g);
  add_strong(h, lvl);
  return true;
}

Perm PermGroup::random_element(Rng& rng) const {
  Perm r(degree_);
  for (const auto& s : strong_)
    if (rng.coin()) r = compose(r, s);
  return r;
}

std::vector<std::uint32_t> PermGroup::orbit(std::uint32_t point) const {
  std::vector<char> seen(degree_, 0);
  std::vector<std::uint32_t> orb{point};
  seen[point] = 1;
  for (std::size_t k = 0; k < orb.size(); ++k)
    for (const auto& g : gens_) {
      auto y = g(orb[k]);
      if (!seen[y]) {
        seen[y] = 1;
        orb.push_back(y);
      }
    }
  return orb;
}

bool PermGroup::is_transitive() const {
  return degree_ <= 1 || orbit(0).size() == degree_;
}

PermGroup bsgs(const std::vector<Perm>& gens, const BsgsOptions& opts) {
  if (gens.empty()) throw PreconditionError("bsgs needs at least one generator");
  return PermGroup::build(gens.front().degree(), gens, opts);
}

PermGroup normal_closure(const std::vector<Perm>& h_gens,
                         const std::vector<Perm>& g_gens, const BsgsOptions& opts) {
  if (h_gens.empty() && g_gens.empty())
    throw PreconditionError("normal_closure needs a degree");
  std::uint32_t degree = h_gens.empty() ? g_gens.front().degree() : h_gens.front().degree();
  check_degrees(degree, h_gens);
  check_degrees(degree, g_gens);
  PermGroup n = PermGroup::build(degree, {}, opts);
  std::deque<Perm> todo(h_gens.begin(), h_gens.end());
  std::vector<Perm> g_inv;
  for (const auto& g : g_gens) g_inv.push_back(inverse(g));
  // Every generator added to N has its conjugates by G queued; the result
  // is closed once the queue drains.
  while (!todo.empty()) {
    Perm x = std::move(todo.front());
    todo.pop_front();
    if (!n.extend_deferred(x)) continue;
    for (std::size_t i = 0; i < g_gens.size(); ++i)
      todo.push_back(compose(g_inv[i], compose(x, g_gens[i])));
  }
  n.complete();
  return n;
}

JordanResult jordan_alt_test_detail(const std::vector<Perm>& gens,
                                    const JordanOptions& opts) {
  if (gens.empty()) throw PreconditionError("jordan_alt_test needs generators");
  std::uint32_t n = gens.front().degree();
  check_degrees(n, gens);
  for (const auto& g : gens)
    if (parity(g) == Parity::odd) throw PreconditionError("odd generator");
  JordanResult res;
  {
    std::vector<char> seen(n, 0);
    std::vector<std::uint32_t> orb{0};
    seen[0] = 1;
    for (std::size_t k = 0; k < orb.size(); ++k)
      for (const auto& g : gens)
        if (!seen[g(orb[k])]) {
          seen[g(orb[k])] = 1;
          orb.push_back(g(orb[k]));
        }
    res.transitive = orb.size() == n;
  }
  if (!res.transitive) return res;

  std::vector<std::uint32_t> primes;
  for (std::uint32_t p = n / 2 + 1; p + 3 <= n; ++p) {
    bool prime = p >= 2;
    for (std::uint32_t f = 2; f * f <= p && prime; ++f) prime = p % f != 0;
    if (prime && 2 * p > n) primes.push_back(p);
  }
  if (primes.empty()) return res;

  std::vector<Perm> letters(gens);
  for (const auto& g : gens) letters.push_back(inverse(g));
  Rng rng = Rng(opts.seed).split("jordan");
  for (std::size_t w = 0; w < opts.words; ++w) {
    std::vector<std::uint32_t> word;
    if (w < gens.size()) {
      word.push_back(static_cast<std::uint32_t>(w));
    } else {
      std::size_t len = 2 + rng.below(std::max<std::size_t>(opts.max_length, 2) - 1);
      for (std::size_t k = 0; k < len; ++k)
        word.push_back(static_cast<std::uint32_t>(rng.below(letters.size())));
    }
    Perm x(n);
    for (auto i : word) x = compose(x, letters[i]);
    std::vector<std::size_t> lengths;
    for (const auto& c : x.cycles()) lengths.push_back(c.size());
    for (auto p : primes) {
      std::size_t exact = 0, divisible = 0;
      for (auto len : lengths) {
        if (len == p) ++exact;
        if (len % p == 0) ++divisible;
      }
      if (exact == 1 && divisible == 1) {
        res.certified = true;
        res.prime = p;
        res.word_index = w;
        res.word = word;
        return res;
      }
    }
  }
  return res;
}

bool jordan_alt_test(const std::vector<Perm>& gens, const JordanOptions& opts) {
  return jordan_alt_test_detail(gens, opts).certified;
}

bool is_k_transitive(const PermGroup& g, unsigned k) {
  std::uint64_t n = g.degree();
  if (k == 0) return true;
  if (k > 4) throw PreconditionError("k must be at most 4");
  if (n < k) throw PreconditionError("degree smaller than k");
  std::uint64_t total = 1, space = 1;
  for (unsigned i = 0; i < k; ++i) {
    total *= n - i;
    space *= n;
  }
  if (space > (std::uint64_t{1} << 31)) throw CapExceeded("tuple space too large");
  auto encode = [&](const std::vector<std::uint32_t>& t) {
    std::uint64_t c = 0;
    for (auto x : t) c = c * n + x;
    return c;
  };
  std::vector<char> seen(space, 0);
  std::vector<std::uint32_t> start(k);
  std::iota(start.begin(), start.end(), 0u);
  std::vector<std::vector<std::uint32_t>> queue{start};
  seen[encode(start)] = 1;
  std::uint64_t count = 1;
  for (std::size_t q = 0; q < queue.size(); ++q) {
    for (const auto& s : g.generators()) {
      std::vector<std::uint32_t> t(k);
      for (unsigned i = 0; i < k; ++i) t[i] = s(queue[q][i]);
      auto c = encode(t);
      if (!seen[c]) {
        seen[c] = 1;
        ++count;
        queue.push_back(std::move(t));
      }
    }
  }
  return count == total;
}

}  // namespace telescopes
