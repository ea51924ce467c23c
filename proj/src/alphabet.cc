#include "telescopes/alphabet.hpp"

#include <bit>
#include <cctype>

namespace telescopes {

Alphabet::Alphabet(std::uint32_t d) : rest_(d) {
  if (d == 0 || d > 65535) throw PreconditionError("alphabet size out of range");
}

Alphabet::Alphabet(std::vector<std::uint32_t> leading, std::uint32_t rest)
    : leading_(std::move(leading)), rest_(rest) {
  if (rest == 0 || rest > 65535) throw PreconditionError("alphabet size out of range");
  for (auto s : leading_)
    if (s == 0 || s > 65535) throw PreconditionError("alphabet size out of range");
  // A leading run equal to the rest size is redundant; drop it so that
  // equality compares the underlying sequence of sizes.
  while (!leading_.empty() && leading_.back() == rest_) leading_.pop_back();
}

std::uint64_t Alphabet::count(std::size_t level) const {
  std::uint64_t n = 1;
  for (std::size_t k = 0; k < level; ++k) {
    if (__builtin_mul_overflow(n, std::uint64_t{size_at(k)}, &n))
      throw CapExceeded("word count overflows at level " + std::to_string(level));
  }
  return n;
}

bool Alphabet::valid(WordView w) const {
  for (std::size_t k = 0; k < w.size(); ++k)
    if (w[k] >= size_at(k)) return false;
  return true;
}

std::uint64_t Alphabet::rank(WordView w) const {
  std::uint64_t r = 0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k] >= size_at(k)) throw PreconditionError("letter out of range");
    r = r * size_at(k) + w[k];
  }
  return r;
}

Word Alphabet::unrank(std::uint64_t index, std::size_t level) const {
  if (index >= count(level)) throw PreconditionError("index out of range");
  Word w(level);
  for (std::size_t k = level; k-- > 0;) {
    w[k] = static_cast<Letter>(index % size_at(k));
    index /= size_at(k);
  }
  return w;
}

std::string format_word(WordView w) {
  std::string s;
  for (Letter x : w) {
    s += 'x';
    s += std::to_string(unsigned{x} + 1);
  }
  return s;
}

std::string Alphabet::format(WordView w) const { return format_word(w); }

Word Alphabet::parse(std::string_view text) const {
  Word w;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != 'x') throw ParseError("expected 'x' in word", i);
    std::size_t j = ++i;
    unsigned long v = 0;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
      v = v * 10 + static_cast<unsigned>(text[j] - '0');
      if (v > 65536) throw ParseError("letter too large", i);
      ++j;
    }
    if (j == i) throw ParseError("expected letter number", i);
    if (v == 0 || v > size_at(w.size())) throw ParseError("letter out of range", i);
    w.push_back(static_cast<Letter>(v - 1));
    i = j;
  }
  return w;
}

std::uint64_t word_to_index(const AlphabetWord& w) {
  Alphabet a(w.d);
  Word z;
  z.reserve(w.letters.size());
  for (auto x : w.letters) {
    if (x < 1 || x > w.d) throw PreconditionError("letter out of range");
    z.push_back(static_cast<Letter>(x - 1));
  }
  return a.rank(z);
}

AlphabetWord index_to_word(std::uint64_t index, std::size_t level,
                           std::uint32_t d) {
  Word z = Alphabet(d).unrank(index, level);
  AlphabetWord w{{}, d};
  for (Letter x : z) w.letters.push_back(x + 1u);
  return w;
}

LetterSet LetterSet::none(std::uint32_t universe) {
  LetterSet s;
  s.universe_ = universe;
  s.bits_.assign((universe + 63) / 64, 0);
  return s;
}

LetterSet LetterSet::full(std::uint32_t universe) {
  LetterSet s = none(universe);
  for (std::uint32_t x = 0; x < universe; ++x) s.insert(static_cast<Letter>(x));
  return s;
}

LetterSet LetterSet::singleton(std::uint32_t universe, Letter x) {
  LetterSet s = none(universe);
  s.insert(x);
  return s;
}

LetterSet LetterSet::of(std::uint32_t universe, std::initializer_list<Letter> xs) {
  LetterSet s = none(universe);
  for (Letter x : xs) s.insert(x);
  return s;
}

LetterSet LetterSet::of(std::uint32_t universe, const std::vector<Letter>& xs) {
  LetterSet s = none(universe);
  for (Letter x : xs) s.insert(x);
  return s;
}

void LetterSet::insert(Letter x) {
  if (x >= universe_) throw PreconditionError("letter out of range");
  bits_[x >> 6] |= std::uint64_t{1} << (x & 63);
}

std::uint32_t LetterSet::count() const {
  std::uint32_t c = 0;
  for (auto b : bits_) c += static_cast<std::uint32_t>(std::popcount(b));
  return c;
}

std::optional<Letter> LetterSet::single() const {
  if (count() != 1) return std::nullopt;
  return letters().front();
}

std::vector<Letter> LetterSet::letters() const {
  std::vector<Letter> out;
  for (std::uint32_t x = 0; x < universe_; ++x)
    if (contains(static_cast<Letter>(x))) out.push_back(static_cast<Letter>(x));
  return out;
}

LetterSet operator&(const LetterSet& a, const LetterSet& b) {
  if (a.universe_ != b.universe_) throw PreconditionError("letter universe mismatch");
  LetterSet r = a;
  for (std::size_t i = 0; i < r.bits_.size(); ++i) r.bits_[i] &= b.bits_[i];
  return r;
}

CylinderSet::CylinderSet(Alphabet alphabet, std::vector<LetterSet> constraints)
    : alphabet_(std::move(alphabet)), constraints_(std::move(constraints)) {
  for (std::size_t k = 0; k < constraints_.size(); ++k) {
    if (constraints_[k].universe() != alphabet_.size_at(k))
      throw PreconditionError("constraint universe does not match alphabet");
    if (constraints_[k].empty()) throw PreconditionError("empty cylinder coordinate");
  }
}

CylinderSet CylinderSet::full(const Alphabet& alphabet, std::size_t level) {
  std::vector<LetterSet> cs;
  for (std::size_t k = 0; k < level; ++k) cs.push_back(LetterSet::full(alphabet.size_at(k)));
  return CylinderSet(alphabet, std::move(cs));
}

CylinderSet CylinderSet::with_prefix(const Alphabet& alphabet, WordView prefix,
                                     std::size_t level) {
  if (prefix.size() > level) throw PreconditionError("prefix longer than level");
  std::vector<LetterSet> cs;
  for (std::size_t k = 0; k < level; ++k) {
    cs.push_back(k < prefix.size() ? LetterSet::singleton(alphabet.size_at(k), prefix[k])
                                   : LetterSet::full(alphabet.size_at(k)));
  }
  return CylinderSet(alphabet, std::move(cs));
}

ConstraintKind CylinderSet::kind(std::size_t i) const {
  auto c = constraints_[i].count();
  if (c == 1) return ConstraintKind::singleton;
  if (c == constraints_[i].universe()) return ConstraintKind::full;
  return ConstraintKind::subset;
}

bool CylinderSet::contains(WordView w) const {
  if (w.size() != constraints_.size()) return false;
  for (std::size_t k = 0; k < w.size(); ++k)
    if (!constraints_[k].contains(w[k])) return false;
  return true;
}

BigInt CylinderSet::cardinality() const {
  BigInt n = 1;
  for (const auto& c : constraints_) n *= c.count();
  return n;
}

std::vector<Word> CylinderSet::enumerate(std::uint64_t cap) const {
  if (cardinality() > cap) throw CapExceeded("cylinder too large to enumerate");
  std::vector<std::vector<Letter>> opts;
  for (const auto& c : constraints_) opts.push_back(c.letters());
  std::vector<Word> out;
  Word w(level());
  std::vector<std::size_t> pos(level(), 0);
  if (level() == 0) return {Word{}};
  for (;;) {
    for (std::size_t k = 0; k < level(); ++k) w[k] = opts[k][pos[k]];
    out.push_back(w);
    std::size_t k = level();
    while (k > 0) {
      --k;
      if (++pos[k] < opts[k].size()) break;
      pos[k] = 0;
      if (k == 0) return out;
    }
  }
}

std::string CylinderSet::format() const {
  std::string s;
  for (std::size_t k = 0; k < constraints_.size(); ++k) {
    if (k) s += "x";
    if (kind(k) == ConstraintKind::full) {
      s += "X";
      continue;
    }
    s += "{";
    bool first = true;
    for (Letter x : constraints_[k].letters()) {
      if (!first) s += ",";
      first = false;
      s += "x" + std::to_string(unsigned{x} + 1);
    }
    s += "}";
  }
  return s.empty() ? "{()}" : s;
}

bool cylinder_disjoint(const CylinderSet& a, const CylinderSet& b) {
  if (a.level() != b.level()) throw PreconditionError("cylinder level mismatch");
  for (std::size_t k = 0; k < a.level(); ++k)
    if ((a.constraint(k) & b.constraint(k)).empty()) return true;
  return false;
}

std::optional<CylinderSet> cylinder_intersect(const CylinderSet& a,
                                              const CylinderSet& b) {
  if (cylinder_disjoint(a, b)) return std::nullopt;
  std::vector<LetterSet> cs;
  for (std::size_t k = 0; k < a.level(); ++k) cs.push_back(a.constraint(k) & b.constraint(k));
  return CylinderSet(a.alphabet(), std::move(cs));
}

CylinderSet cylinder_extend(const CylinderSet& a, std::size_t extra) {
  std::vector<LetterSet> cs = a.constraints();
  for (std::size_t k = 0; k < extra; ++k)
    cs.push_back(LetterSet::full(a.alphabet().size_at(a.level() + k)));
  return CylinderSet(a.alphabet(), std::move(cs));
}

bool unions_disjoint(const CylinderUnion& a, const CylinderUnion& b) {
  for (const auto& x : a)
    for (const auto& y : b)
      if (!cylinder_disjoint(x, y)) return false;
  return true;
}

bool union_contains(const CylinderUnion& u, WordView w) {
  for (const auto& c : u)
    if (c.contains(w)) return true;
  return false;
}

CylinderUnion union_extend(const CylinderUnion& u, std::size_t extra) {
  CylinderUnion out;
  out.reserve(u.size());
  for (const auto& c : u) out.push_back(cylinder_extend(c, extra));
  return out;
}

}  // namespace telescopes
