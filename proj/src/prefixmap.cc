#include "telescopes/prefixmap.hpp"

#include <algorithm>
#include <numeric>

namespace telescopes {

namespace {

bool less_word(WordView a, WordView b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool is_prefix(WordView p, WordView w) {
  return p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin());
}

std::uint64_t suffix_count(const Alphabet& a, std::size_t from, std::size_t to) {
  std::uint64_t n = 1;
  for (std::size_t k = from; k < to; ++k)
    if (__builtin_mul_overflow(n, std::uint64_t{a.size_at(k)}, &n))
      throw CapExceeded("word count overflow");
  return n;
}

}  // namespace

void PrefixMap::push_rule(WordView p, WordView q) {
  off_.push_back(static_cast<std::uint32_t>(buf_.size()));
  len_.push_back(static_cast<std::uint16_t>(p.size()));
  buf_.insert(buf_.end(), p.begin(), p.end());
  buf_.insert(buf_.end(), q.begin(), q.end());
}

bool PrefixMap::rule_moves(std::size_t i) const {
  auto p = rule_prefix(i);
  auto q = rule_image(i);
  return !std::equal(p.begin(), p.end(), q.begin());
}

void PrefixMap::canonicalize() {
  PrefixMap out;
  out.buf_.reserve(buf_.size());
  for (std::size_t i = 0; i < rule_count(); ++i) {
    out.push_rule(rule_prefix(i), rule_image(i));
    for (;;) {
      std::size_t t = out.rule_count();
      std::size_t len = out.len_.back();
      if (len == 0) break;
      std::size_t n = alpha_.size_at(len - 1);
      if (t < n) break;
      std::size_t first = t - n;
      auto p0 = out.rule_prefix(first);
      auto q0 = out.rule_image(first);
      bool merge = true;
      for (std::size_t k = 0; k < n && merge; ++k) {
        std::size_t r = first + k;
        if (out.len_[r] != len) {
          merge = false;
          break;
        }
        auto p = out.rule_prefix(r);
        auto q = out.rule_image(r);
        merge = p[len - 1] == k && q[len - 1] == k &&
                std::equal(p.begin(), p.end() - 1, p0.begin()) &&
                std::equal(q.begin(), q.end() - 1, q0.begin());
      }
      if (!merge) break;
      Word p(p0.begin(), p0.end() - 1);
      Word q(q0.begin(), q0.end() - 1);
      out.buf_.resize(out.off_[first]);
      out.off_.resize(first);
      out.len_.resize(first);
      out.push_rule(p, q);
    }
  }
  buf_ = std::move(out.buf_);
  off_ = std::move(out.off_);
  len_ = std::move(out.len_);
}

PrefixMap PrefixMap::identity(const Alphabet& alphabet, std::size_t level) {
  PrefixMap m;
  m.alpha_ = alphabet;
  m.level_ = level;
  m.push_rule({}, {});
  return m;
}

PrefixMap PrefixMap::from_rules(const Alphabet& alphabet, std::size_t level,
                                std::vector<Rule> rules) {
  for (const auto& [p, q] : rules) {
    if (p.size() != q.size() || p.size() > level)
      throw PreconditionError("rule length mismatch");
    if (!alphabet.valid(p) || !alphabet.valid(q)) throw PreconditionError("letter out of range");
  }
  std::sort(rules.begin(), rules.end(),
            [](const Rule& a, const Rule& b) { return less_word(a.first, b.first); });
  PrefixMap m;
  m.alpha_ = alphabet;
  m.level_ = level;
  Word prefix;
  // Completes the partial rule set with identity rules on the gaps.
  auto fill = [&](auto&& self, std::size_t lo, std::size_t hi) -> void {
    if (lo == hi) {
      m.push_rule(prefix, prefix);
      return;
    }
    if (rules[lo].first.size() == prefix.size()) {
      if (hi - lo != 1) throw PreconditionError("rule domains overlap");
      m.push_rule(rules[lo].first, rules[lo].second);
      return;
    }
    std::size_t k = prefix.size();
    std::size_t i = lo;
    for (std::uint32_t x = 0; x < alphabet.size_at(k); ++x) {
      std::size_t j = i;
      while (j < hi && rules[j].first[k] == x) ++j;
      prefix.push_back(static_cast<Letter>(x));
      self(self, i, j);
      prefix.pop_back();
      i = j;
    }
  };
  fill(fill, 0, rules.size());
  m.check_bijective();
  m.canonicalize();
  return m;
}

void PrefixMap::check_bijective() const {
  std::vector<std::size_t> order(rule_count());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return less_word(rule_image(a), rule_image(b));
  });
  unsigned __int128 measure = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k && is_prefix(rule_image(order[k - 1]), rule_image(order[k])))
      throw PreconditionError("rule images overlap");
    measure += suffix_count(alpha_, len_[order[k]], level_);
  }
  if (measure != suffix_count(alpha_, 0, level_))
    throw PreconditionError("rule images do not cover the level");
}

PrefixMap PrefixMap::from_perm(const Alphabet& alphabet, std::size_t level,
                               const Perm& p) {
  std::uint64_t n = alphabet.count(level);
  if (p.degree() != n) throw PreconditionError("permutation degree does not match level");
  PrefixMap m;
  m.alpha_ = alphabet;
  m.level_ = level;
  for (std::uint64_t i = 0; i < n; ++i)
    m.push_rule(alphabet.unrank(i, level), alphabet.unrank(p(static_cast<std::uint32_t>(i)), level));
  m.canonicalize();
  return m;
}

std::size_t PrefixMap::covering_rule(WordView w) const {
  std::size_t lo = 0, hi = rule_count();
  // Largest i with prefix(i) <= w.
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (less_word(w, rule_prefix(mid))) hi = mid;
    else lo = mid + 1;
  }
  if (lo == 0) return static_cast<std::size_t>(-1);
  return is_prefix(rule_prefix(lo - 1), w) ? lo - 1 : static_cast<std::size_t>(-1);
}

std::pair<std::size_t, std::size_t> PrefixMap::extending_rules(WordView w) const {
  std::size_t lo = 0, hi = rule_count();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (less_word(w, rule_prefix(mid))) hi = mid;
    else lo = mid + 1;
  }
  std::size_t end = lo;
  while (end < rule_count() && is_prefix(w, rule_prefix(end))) ++end;
  return {lo, end};
}

Word PrefixMap::apply(WordView w) const {
  if (w.size() < level_) throw PreconditionError("word shorter than level");
  std::size_t i = covering_rule(w);
  auto q = rule_image(i);
  Word out(q.begin(), q.end());
  out.insert(out.end(), w.begin() + static_cast<std::ptrdiff_t>(q.size()), w.end());
  return out;
}

std::optional<Word> PrefixMap::prefix_image(WordView w) const {
  std::size_t i = covering_rule(w);
  if (i == static_cast<std::size_t>(-1)) return std::nullopt;
  WordView q = rule_image(i);
  Word out(q.begin(), q.end());
  out.insert(out.end(), w.begin() + static_cast<std::ptrdiff_t>(q.size()), w.end());
  return out;
}

PrefixMap PrefixMap::lift(std::size_t new_level) const {
  if (new_level < level_) throw PreconditionError("cannot lift to a lower level");
  PrefixMap m = *this;
  m.level_ = new_level;
  return m;
}

Perm PrefixMap::to_perm() const {
  std::uint64_t n = alpha_.count(level_);
  if (n > (std::uint64_t{1} << 31)) throw CapExceeded("level too large for explicit permutation");
  std::vector<std::uint32_t> img(n);
  for (std::size_t i = 0; i < rule_count(); ++i) {
    std::uint64_t m = suffix_count(alpha_, len_[i], level_);
    std::uint64_t src = alpha_.rank(rule_prefix(i)) * m;
    std::uint64_t dst = alpha_.rank(rule_image(i)) * m;
    for (std::uint64_t j = 0; j < m; ++j) img[src + j] = static_cast<std::uint32_t>(dst + j);
  }
  return Perm::unchecked(std::move(img));
}

bool PrefixMap::is_identity() const { return rule_count() == 1 && len_[0] == 0; }

std::uint64_t PrefixMap::moved_count() const {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < rule_count(); ++i)
    if (rule_moves(i)) c += suffix_count(alpha_, len_[i], level_);
  return c;
}

CylinderUnion PrefixMap::support(std::size_t at_level) const {
  if (at_level < level_) throw PreconditionError("support below level");
  CylinderUnion u;
  for (std::size_t i = 0; i < rule_count(); ++i)
    if (rule_moves(i)) u.push_back(CylinderSet::with_prefix(alpha_, rule_prefix(i), at_level));
  return u;
}

CylinderUnion PrefixMap::image(const CylinderSet& c) const {
  if (c.level() < level_) throw PreconditionError("cylinder below level");
  CylinderUnion out;
  for (std::size_t i = 0; i < rule_count(); ++i) {
    auto p = rule_prefix(i);
    bool hit = true;
    for (std::size_t k = 0; k < p.size() && hit; ++k) hit = c.constraint(k).contains(p[k]);
    if (!hit) continue;
    auto q = rule_image(i);
    std::vector<LetterSet> cs;
    for (std::size_t k = 0; k < c.level(); ++k)
      cs.push_back(k < q.size() ? LetterSet::singleton(alpha_.size_at(k), q[k]) : c.constraint(k));
    out.emplace_back(alpha_, std::move(cs));
  }
  return out;
}

std::string PrefixMap::format_rules() const {
  std::string s;
  for (std::size_t i = 0; i < rule_count(); ++i) {
    if (!rule_moves(i)) continue;
    if (!s.empty()) s += ", ";
    s += format_word(rule_prefix(i)) + "->" + format_word(rule_image(i));
  }
  return s.empty() ? "id" : s;
}

std::size_t PrefixMap::hash() const {
  std::size_t h = 0xcbf29ce484222325ULL ^ level_;
  for (auto l : len_) h = (h ^ l) * 0x100000001b3ULL;
  for (auto x : buf_) h = (h ^ x) * 0x100000001b3ULL;
  return h;
}

PrefixMap compose(const PrefixMap& a, const PrefixMap& b) {
  if (a.level_ != b.level_ || !(a.alpha_ == b.alpha_))
    throw PreconditionError("prefix maps on different levels");
  if (a.is_identity()) return b;
  if (b.is_identity()) return a;
  PrefixMap m;
  m.alpha_ = a.alpha_;
  m.level_ = a.level_;
  Word tmp_p, tmp_q;
  for (std::size_t i = 0; i < b.rule_count(); ++i) {
    auto p = b.rule_prefix(i);
    auto pi = b.rule_image(i);
    std::size_t j = a.covering_rule(pi);
    if (j != static_cast<std::size_t>(-1)) {
      auto q = a.rule_image(j);
      tmp_q.assign(q.begin(), q.end());
      tmp_q.insert(tmp_q.end(), pi.begin() + static_cast<std::ptrdiff_t>(q.size()), pi.end());
      m.push_rule(p, tmp_q);
      continue;
    }
    auto [lo, hi] = a.extending_rules(pi);
    for (std::size_t k = lo; k < hi; ++k) {
      auto ap = a.rule_prefix(k);
      tmp_p.assign(p.begin(), p.end());
      tmp_p.insert(tmp_p.end(), ap.begin() + static_cast<std::ptrdiff_t>(pi.size()), ap.end());
      m.push_rule(tmp_p, a.rule_image(k));
    }
  }
  m.canonicalize();
  return m;
}

PrefixMap inverse(const PrefixMap& a) {
  std::vector<std::size_t> order(a.rule_count());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return less_word(a.rule_image(x), a.rule_image(y));
  });
  PrefixMap m;
  m.alpha_ = a.alpha_;
  m.level_ = a.level_;
  for (auto i : order) m.push_rule(a.rule_image(i), a.rule_prefix(i));
  m.canonicalize();
  return m;
}

}  // namespace telescopes
