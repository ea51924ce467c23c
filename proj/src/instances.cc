#include "telescopes/instances.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace telescopes {

namespace {

constexpr std::uint64_t kExplicitWordCap = 2'000'000;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Word repeat(Letter x, std::size_t n) { return Word(n, x); }

Word concat(std::initializer_list<WordView> parts) {
  Word out;
  for (auto p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::uint64_t ipow(std::uint64_t b, std::size_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

std::optional<std::size_t> generator_index(std::string_view text, char tag) {
  if (text.size() < 2 || text[0] != tag) return std::nullopt;
  for (std::size_t i = 1; i < text.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
  return std::stoul(std::string(text.substr(1)));
}

// (w0 w1 w2) and a long cycle: together they generate Alt of the words.
std::vector<LevelElem> alternating_level_generators(const Alphabet& a, std::size_t len) {
  std::uint64_t n = a.count(len);
  if (n > kExplicitWordCap) throw CapExceeded("level has too many words for explicit generators");
  if (n < 3) return {};
  std::vector<PrefixMap::Rule> three;
  for (std::uint64_t i = 0; i < 3; ++i) three.emplace_back(a.unrank(i, len), a.unrank((i + 1) % 3, len));
  std::vector<PrefixMap::Rule> cyc;
  std::uint64_t start = (n % 2 == 1) ? 0 : 1;
  for (std::uint64_t i = start; i < n; ++i)
    cyc.emplace_back(a.unrank(i, len), a.unrank(i + 1 < n ? i + 1 : start, len));
  std::vector<LevelElem> out;
  out.push_back(PrefixMap::from_rules(a, len, std::move(three)));
  if (n > 3) out.push_back(PrefixMap::from_rules(a, len, std::move(cyc)));
  return out;
}

Perm alternating_cycle_gen(std::uint32_t n) {
  std::vector<std::uint32_t> pts;
  for (std::uint32_t i = (n % 2 == 1 ? 0 : 1); i < n; ++i) pts.push_back(i);
  return Perm::cycle(n, pts);
}

}  // namespace

Perm random_even_perm(std::uint32_t n, Rng& rng) {
  std::vector<std::uint32_t> img(n);
  std::iota(img.begin(), img.end(), 0u);
  for (std::uint32_t i = n; i > 1; --i) std::swap(img[i - 1], img[rng.below(i)]);
  Perm p = Perm::unchecked(img);
  if (n >= 2 && parity(p) == Parity::odd) {
    std::swap(img[0], img[1]);
    p = Perm::unchecked(std::move(img));
  }
  return p;
}

// ---------------------------------------------------------------- FiniteGroup

FiniteGroup FiniteGroup::from_generators(std::string name, const std::vector<Perm>& gens,
                                         std::size_t cap) {
  if (gens.empty()) throw PreconditionError("group needs at least one generator");
  std::uint32_t n = gens[0].degree();
  std::unordered_map<Perm, std::size_t, PermHash> seen;
  std::vector<Perm> elems{Perm(n)};
  seen.emplace(elems[0], 0);
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (const Perm& g : gens) {
      if (g.degree() != n) throw PreconditionError("generators of different degrees");
      Perm h = compose(g, elems[i]);
      if (seen.emplace(h, elems.size()).second) {
        elems.push_back(std::move(h));
        if (elems.size() > cap) throw CapExceeded("group larger than " + std::to_string(cap));
      }
    }
  }
  std::sort(elems.begin(), elems.end());
  FiniteGroup G;
  G.name_ = std::move(name);
  G.elements_ = std::move(elems);
  std::unordered_map<Perm, std::size_t, PermHash> index;
  for (std::size_t i = 0; i < G.elements_.size(); ++i) index.emplace(G.elements_[i], i);
  std::size_t s = G.elements_.size();
  G.mul_.resize(s * s);
  G.inv_.resize(s);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j)
      G.mul_[i * s + j] = static_cast<std::uint32_t>(index.at(compose(G.elements_[i], G.elements_[j])));
    G.inv_[i] = static_cast<std::uint32_t>(index.at(inverse(G.elements_[i])));
  }
  for (const Perm& g : gens) G.gens_.push_back(index.at(g));
  return G;
}

FiniteGroup FiniteGroup::builtin(std::string_view name) {
  if (name == "alt5")
    return from_generators("alt5", {Perm::cycle(5, {0, 1, 2}), Perm::cycle(5, {0, 1, 2, 3, 4})});
  if (name == "alt6")
    return from_generators("alt6", {Perm::cycle(6, {0, 1, 2}), Perm::cycle(6, {1, 2, 3, 4, 5})});
  if (name == "sl2_5") {
    // Action on the 24 nonzero vectors of F_5^2, vector (x, y) -> 5x + y - 1.
    auto act = [](int a, int b, int c, int e) {
      std::vector<std::uint32_t> img(24);
      for (int x = 0; x < 5; ++x)
        for (int y = 0; y < 5; ++y) {
          if (x == 0 && y == 0) continue;
          int nx = (a * x + b * y) % 5, ny = (c * x + e * y) % 5;
          img[5 * x + y - 1] = static_cast<std::uint32_t>(5 * nx + ny - 1);
        }
      return Perm(img);
    };
    return from_generators("sl2_5", {act(1, 1, 0, 1), act(1, 0, 1, 1)});
  }
  throw PreconditionError("unknown builtin group '" + std::string(name) + "'");
}

FiniteGroup FiniteGroup::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot read group file " + path);
  std::vector<std::string> lines;
  std::uint32_t degree = 0;
  for (std::string line; std::getline(in, line);) {
    std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    for (std::size_t i = 0; i < t.size();) {
      if (std::isdigit(static_cast<unsigned char>(t[i]))) {
        std::size_t j = i;
        while (j < t.size() && std::isdigit(static_cast<unsigned char>(t[j]))) ++j;
        degree = std::max<std::uint32_t>(degree, std::stoul(std::string(t.substr(i, j - i))));
        i = j;
      } else {
        ++i;
      }
    }
    lines.emplace_back(t);
  }
  if (lines.empty() || degree == 0) throw ParseError("group file has no generators", 0);
  auto lookup = [degree](std::string_view tok) -> std::optional<std::uint32_t> {
    if (tok.empty() || !std::all_of(tok.begin(), tok.end(), ::isdigit)) return std::nullopt;
    unsigned long v = std::stoul(std::string(tok));
    if (v < 1 || v > degree) return std::nullopt;
    return static_cast<std::uint32_t>(v - 1);
  };
  std::vector<Perm> gens;
  for (const auto& l : lines) gens.push_back(parse_cycles(l, degree, lookup));
  std::string name = path.substr(path.find_last_of('/') + 1);
  if (auto dot = name.find('.'); dot != std::string::npos) name.resize(dot);
  return from_generators(name, gens);
}

std::size_t FiniteGroup::index_of(const Perm& p) const {
  auto it = std::lower_bound(elements_.begin(), elements_.end(), p);
  if (it == elements_.end() || *it != p) throw PreconditionError("not an element of " + name_);
  return static_cast<std::size_t>(it - elements_.begin());
}

bool FiniteGroup::is_perfect() const {
  std::vector<std::size_t> comms;
  std::vector<char> in(size(), 0);
  for (std::size_t g = 0; g < size(); ++g)
    for (std::size_t h = 0; h < size(); ++h) {
      std::size_t c = mul(mul(g, h), mul(inv(g), inv(h)));
      if (!in[c]) {
        in[c] = 1;
        comms.push_back(c);
      }
    }
  std::vector<std::size_t> closure = comms;
  for (std::size_t i = 0; i < closure.size(); ++i)
    for (std::size_t c : comms) {
      std::size_t x = mul(closure[i], c);
      if (!in[x]) {
        in[x] = 1;
        closure.push_back(x);
      }
    }
  return closure.size() == size();
}

// ------------------------------------------------------------ SpinalPermModel

SpinalPermModel::SpinalPermModel(SpinalConfig cfg) : cfg_(std::move(cfg)) {
  for (auto [a, c] : cfg_.points) c_range_ = std::max<std::uint32_t>(c_range_, c + 1u);
  Letter amax = 0;
  for (auto [a, c] : cfg_.points) amax = std::max(amax, a);
  point_lookup_.assign((amax + 1u) * c_range_, 0);
  for (std::size_t i = 0; i < cfg_.points.size(); ++i) {
    auto [a, c] = cfg_.points[i];
    if (a == cfg_.prefix && cfg_.prefix == cfg_.spine)
      throw PreconditionError("B-points may not start with the spine letter");
    point_lookup_[a * c_range_ + c] = i + 1;
  }
  for (const Perm& g : cfg_.b_gens)
    if (g.degree() != cfg_.points.size()) throw PreconditionError("B generator of wrong degree");
}

std::size_t SpinalPermModel::point_index(Letter a, Letter c) const {
  std::size_t k = static_cast<std::size_t>(a) * c_range_ + c;
  if (c >= c_range_ || k >= point_lookup_.size() || point_lookup_[k] == 0)
    return static_cast<std::size_t>(-1);
  return point_lookup_[k] - 1;
}

bool SpinalPermModel::disjoint_fast_path() const {
  for (auto [a, c] : cfg_.points)
    if (a == cfg_.prefix) return false;
  return true;
}

LevelElem SpinalPermModel::identity(std::size_t level) const {
  return PrefixMap::identity(cfg_.alphabet, level);
}

LevelElem SpinalPermModel::iota(const LevelElem& x, std::size_t from, std::size_t to) const {
  if (from > to) throw PreconditionError("iota goes upwards");
  return std::get<PrefixMap>(x).lift(to);
}

void SpinalPermModel::line_rules(WordView v, std::size_t k, const Perm& p,
                                 std::vector<PrefixMap::Rule>& out) const {
  if (p.degree() != cfg_.points.size()) throw PreconditionError("B element of wrong degree");
  Word head = concat({v, repeat(cfg_.prefix, k - v.size() - 2)});
  for (std::uint32_t i = 0; i < p.degree(); ++i) {
    std::uint32_t j = p(i);
    if (i == j) continue;
    Word from = head, to = head;
    from.push_back(cfg_.points[i].first);
    from.push_back(cfg_.points[i].second);
    to.push_back(cfg_.points[j].first);
    to.push_back(cfg_.points[j].second);
    out.emplace_back(std::move(from), std::move(to));
  }
}

LevelElem SpinalPermModel::phi(std::size_t level, const BElem& b) const {
  if (level < 2) throw PreconditionError("phi_i needs i >= 2");
  std::vector<PrefixMap::Rule> rules;
  line_rules(Word{}, level, std::get<Perm>(b), rules);
  return PrefixMap::from_rules(cfg_.alphabet, level, std::move(rules));
}

LevelElem SpinalPermModel::alpha(std::size_t level) const {
  if (level < 1) throw PreconditionError("alpha_i needs i >= 1");
  Word base = repeat(cfg_.spine, level - 1);
  Word w[3] = {base, base, base};
  w[0].push_back(cfg_.y);
  w[1].push_back(cfg_.z);
  w[2].push_back(cfg_.spine);
  std::vector<PrefixMap::Rule> rules{{w[0], w[1]}, {w[1], w[2]}, {w[2], w[0]}};
  return PrefixMap::from_rules(cfg_.alphabet, level, std::move(rules));
}

std::vector<LevelElem> SpinalPermModel::level_generators(std::size_t level) const {
  return alternating_level_generators(cfg_.alphabet, level);
}

LevelElem SpinalPermModel::random_level_element(std::size_t level, Rng& rng) const {
  std::uint64_t n = cfg_.alphabet.count(level);
  if (n > kExplicitWordCap) throw CapExceeded("level too large for a random element");
  return PrefixMap::from_perm(cfg_.alphabet, level, random_even_perm(static_cast<std::uint32_t>(n), rng));
}

BigInt SpinalPermModel::level_order(std::size_t level) const {
  std::uint64_t n = cfg_.alphabet.count(level);
  if (n > 1'000'000) throw CapExceeded("level order too large to print");
  if (n < 2) return 1;
  return factorial(static_cast<unsigned>(n)) / 2;
}

BElem SpinalPermModel::b_identity() const {
  return Perm(static_cast<std::uint32_t>(cfg_.points.size()));
}

std::vector<BElem> SpinalPermModel::b_generators() const {
  return {cfg_.b_gens.begin(), cfg_.b_gens.end()};
}

BElem SpinalPermModel::b_random(Rng& rng) const { return cfg_.b_random(rng); }

LevelElem SpinalPermModel::tilde_level(std::size_t n, const BElem& b, std::size_t level) const {
  if (!disjoint_fast_path()) return TelescopeModel::tilde_level(n, b, level);
  std::vector<PrefixMap::Rule> rules;
  for (std::size_t k = std::max<std::size_t>(n + 1, 2); k <= level; ++k)
    line_rules(Word{}, k, std::get<Perm>(b), rules);
  return PrefixMap::from_rules(cfg_.alphabet, level, std::move(rules));
}

LevelElem SpinalPermModel::phi_directed(std::size_t m, std::size_t k, const DirectedElem& s) const {
  const auto* lf = std::get_if<LineFamily>(&s);
  if (!lf) throw PreconditionError("permutation telescopes take line families");
  if (lf->depth != m || k < m + 2) throw PreconditionError("phi^(m)_k needs k >= m+2");
  std::vector<PrefixMap::Rule> rules;
  for (const auto& [v, p] : lf->lines) {
    if (v.size() != m) throw PreconditionError("line of wrong depth");
    line_rules(v, k, p, rules);
  }
  return PrefixMap::from_rules(cfg_.alphabet, k, std::move(rules));
}

LevelElem SpinalPermModel::directed_level(std::size_t m, std::size_t n, const DirectedElem& s,
                                          std::size_t level) const {
  if (!disjoint_fast_path()) return TelescopeModel::directed_level(m, n, s, level);
  const auto* lf = std::get_if<LineFamily>(&s);
  if (!lf || lf->depth != m) throw PreconditionError("line family of wrong depth");
  std::vector<PrefixMap::Rule> rules;
  for (std::size_t k = std::max(n + 1, m + 2); k <= level; ++k)
    for (const auto& [v, p] : lf->lines) line_rules(v, k, p, rules);
  return PrefixMap::from_rules(cfg_.alphabet, level, std::move(rules));
}

LevelElem SpinalPermModel::epsilon_level(std::size_t level) const {
  if (cfg_.epsilon_letters.empty()) return TelescopeModel::epsilon_level(level);
  std::uint64_t n = cfg_.alphabet.count(level);
  if (n > kExplicitWordCap) throw CapExceeded("epsilon level too large");
  std::vector<PrefixMap::Rule> rules;
  for (std::uint64_t i = 0; i < n; ++i) {
    Word w = cfg_.alphabet.unrank(i, level);
    Word img = w;
    for (auto& x : img) x = cfg_.epsilon_letters[x];
    if (img != w) rules.emplace_back(std::move(w), std::move(img));
  }
  return PrefixMap::from_rules(cfg_.alphabet, level, std::move(rules));
}

std::optional<CylinderUnion> SpinalPermModel::b_support(std::size_t k, std::size_t m) const {
  if (k < 2 || m < k) throw PreconditionError("B_{k,m} needs 2 <= k <= m");
  std::vector<char> moved(cfg_.points.size(), 0);
  for (const Perm& g : cfg_.b_gens)
    for (auto x : support_of(g)) moved[x] = 1;
  // a -> set of c with (a, c) moved; a's with equal c-sets share a cylinder.
  std::map<Letter, std::vector<Letter>> by_a;
  for (std::size_t i = 0; i < moved.size(); ++i)
    if (moved[i]) by_a[cfg_.points[i].first].push_back(cfg_.points[i].second);
  std::map<std::vector<Letter>, std::vector<Letter>> by_cset;
  for (auto& [a, cs] : by_a) by_cset[cs].push_back(a);
  CylinderUnion out;
  const Alphabet& al = cfg_.alphabet;
  for (const auto& [cs, as] : by_cset) {
    std::vector<LetterSet> cons;
    for (std::size_t i = 0; i + 2 < k; ++i) cons.push_back(LetterSet::singleton(al.size_at(i), cfg_.prefix));
    cons.push_back(LetterSet::of(al.size_at(k - 2), as));
    cons.push_back(LetterSet::of(al.size_at(k - 1), cs));
    for (std::size_t i = k; i < m; ++i) cons.push_back(LetterSet::full(al.size_at(i)));
    out.emplace_back(al, std::move(cons));
  }
  return out;
}

std::optional<PrefixMap> SpinalPermModel::alpha_word_map(std::size_t level) const {
  return std::get<PrefixMap>(alpha(level));
}

std::string SpinalPermModel::format_b(const BElem& b) const {
  const Perm& p = std::get<Perm>(b);
  if (p.is_identity()) return "id";
  return format_cycles(p, [&](std::uint32_t i) {
    Word w{cfg_.points[i].first, cfg_.points[i].second};
    return format_word(w);
  });
}

BElem SpinalPermModel::parse_b(std::string_view text) const {
  text = trim(text);
  if (text == "id" || text == "1") return b_identity();
  if (text == "b") return cfg_.b_gens.at(0);
  if (auto k = generator_index(text, 'b')) {
    if (*k >= cfg_.b_gens.size()) throw ParseError("no B generator b" + std::to_string(*k), 0);
    return cfg_.b_gens[*k];
  }
  auto lookup = [&](std::string_view tok) -> std::optional<std::uint32_t> {
    Word w;
    try {
      w = Alphabet(std::vector<std::uint32_t>{}, 0xFFFF).parse(tok);
    } catch (const ParseError&) {
      return std::nullopt;
    }
    if (w.size() != 2) return std::nullopt;
    std::size_t i = point_index(w[0], w[1]);
    if (i == static_cast<std::size_t>(-1)) return std::nullopt;
    return static_cast<std::uint32_t>(i);
  };
  return parse_cycles(text, static_cast<std::uint32_t>(cfg_.points.size()), lookup);
}

std::vector<Word> SpinalPermModel::b_point_words() const {
  std::vector<Word> out;
  for (auto [a, c] : cfg_.points) out.push_back(Word{a, c});
  return out;
}

// ---------------------------------------------------------------- LinearModel

LinearModel::LinearModel(std::uint32_t d, unsigned q, std::size_t max_level)
    : d_(d), field_(&Field::get(q)), max_level_(max_level), alpha_(d) {
  if (d < 4) throw PreconditionError("E_d(F_q) needs d >= 4");
  if (max_level < 1) throw PreconditionError("max_level must be positive");
  if (ipow(d, max_level) > kMatrixDimCap)
    throw CapExceeded("level " + std::to_string(max_level) + " exceeds the matrix size cap");
}

std::string LinearModel::id() const {
  return "el-" + std::to_string(d_) + "-" + std::to_string(field_->q());
}

std::size_t LinearModel::dim(std::size_t level) const {
  if (level > max_level_) throw PreconditionError("level above max_level");
  return ipow(d_, level);
}

LevelElem LinearModel::identity(std::size_t level) const {
  return MatFq::identity(*field_, dim(level));
}

LevelElem LinearModel::iota(const LevelElem& x, std::size_t from, std::size_t to) const {
  if (from > to) throw PreconditionError("iota goes upwards");
  const MatFq& m = std::get<MatFq>(x);
  if (m.dim() != dim(from)) throw PreconditionError("matrix does not match level");
  return m.kron_identity(ipow(d_, to - from));
}

void LinearModel::place_block(MatFq& out, std::size_t m, std::size_t k, const MatFq& s,
                              std::size_t level) const {
  std::size_t w = 2 * d_;
  if (s.dim() != ipow(d_, m) * w) throw PreconditionError("block of wrong size");
  if (k < m + 2 || k > level) throw PreconditionError("block level out of range");
  std::uint64_t run = alpha_.rank(repeat(static_cast<Letter>(d_ - 1), k - m - 2));
  std::uint64_t gap = ipow(d_, k - m - 2);
  std::uint64_t tail = ipow(d_, level - k);
  auto idx = [&](std::size_t p) {
    std::size_t vr = p / w, rem = p % w;
    return ((vr * gap + run) * d_ * d_ + rem) * tail;
  };
  std::vector<std::size_t> pos(s.dim());
  for (std::size_t p = 0; p < s.dim(); ++p) pos[p] = idx(p);
  for (std::size_t p = 0; p < s.dim(); ++p)
    for (std::size_t r = 0; r < s.dim(); ++r) {
      std::uint8_t v = s.at(p, r);
      if (v == 0 && p != r) continue;
      for (std::uint64_t t = 0; t < tail; ++t) out.set(pos[p] + t, pos[r] + t, v);
    }
}

LevelElem LinearModel::phi(std::size_t level, const BElem& b) const {
  if (level < 2) throw PreconditionError("phi_i needs i >= 2");
  MatFq out = MatFq::identity(*field_, dim(level));
  place_block(out, 0, level, std::get<MatFq>(b), level);
  return out;
}

LevelElem LinearModel::alpha(std::size_t level) const {
  if (level < 1) throw PreconditionError("alpha_i needs i >= 1");
  Word y = repeat(static_cast<Letter>(d_ - 1), level - 1);
  y.push_back(static_cast<Letter>(d_ - 2));
  Word z = repeat(static_cast<Letter>(d_ - 1), level);
  return signed_perm(*field_, dim(level), alpha_.rank(y), alpha_.rank(z));
}

std::vector<LevelElem> LinearModel::level_generators(std::size_t level) const {
  std::size_t n = dim(level);
  std::vector<LevelElem> out;
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (auto r : field_->prime_basis()) {
      out.push_back(elementary(*field_, n, i, i + 1, r));
      out.push_back(elementary(*field_, n, i + 1, i, r));
    }
  return out;
}

std::vector<LevelElem> LinearModel::monomial_generators(std::size_t level) const {
  std::size_t n = dim(level);
  std::vector<LevelElem> out;
  for (std::size_t i = 0; i + 1 < n; ++i) out.push_back(signed_perm(*field_, n, i, i + 1));
  return out;
}

MatFq LinearModel::random_sl(std::size_t n, Rng& rng) const {
  MatFq m = MatFq::identity(*field_, n);
  if (n < 2) return m;
  // Left multiplication by e_{y,z}(r) adds r times row z to row y.
  for (std::size_t step = 0; step < 4 * n; ++step) {
    std::size_t y = rng.below(n), z = rng.below(n - 1);
    if (z >= y) ++z;
    auto r = static_cast<std::uint8_t>(1 + rng.below(field_->q() - 1));
    std::uint8_t* ry = m.row(y);
    const std::uint8_t* rz = m.row(z);
    for (std::size_t j = 0; j < n; ++j) ry[j] = field_->add(ry[j], field_->mul(r, rz[j]));
  }
  return m;
}

LevelElem LinearModel::random_level_element(std::size_t level, Rng& rng) const {
  return random_sl(dim(level), rng);
}

BigInt LinearModel::level_order(std::size_t level) const {
  std::size_t n = dim(level);
  BigInt q = field_->q();
  BigInt out = 1;
  for (std::size_t i = 0; i < n * (n - 1) / 2; ++i) out *= q;
  BigInt qi = q;
  for (std::size_t i = 2; i <= n; ++i) {
    qi *= q;
    out *= qi - 1;
  }
  return out;
}

BElem LinearModel::b_identity() const { return MatFq::identity(*field_, 2 * d_); }

std::vector<BElem> LinearModel::b_generators() const {
  std::size_t n = 2 * d_;
  std::vector<BElem> out;
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (auto r : field_->prime_basis()) {
      out.push_back(elementary(*field_, n, i, i + 1, r));
      out.push_back(elementary(*field_, n, i + 1, i, r));
    }
  return out;
}

BElem LinearModel::b_random(Rng& rng) const { return random_sl(2 * d_, rng); }

LevelElem LinearModel::tilde_level(std::size_t n, const BElem& b, std::size_t level) const {
  MatFq out = MatFq::identity(*field_, dim(level));
  for (std::size_t k = std::max<std::size_t>(n + 1, 2); k <= level; ++k)
    place_block(out, 0, k, std::get<MatFq>(b), level);
  return out;
}

LevelElem LinearModel::phi_directed(std::size_t m, std::size_t k, const DirectedElem& s) const {
  const auto* mat = std::get_if<MatFq>(&s);
  if (!mat) throw PreconditionError("matrix telescopes take matrix families");
  MatFq out = MatFq::identity(*field_, dim(k));
  place_block(out, m, k, *mat, k);
  return out;
}

LevelElem LinearModel::directed_level(std::size_t m, std::size_t n, const DirectedElem& s,
                                      std::size_t level) const {
  const auto* mat = std::get_if<MatFq>(&s);
  if (!mat) throw PreconditionError("matrix telescopes take matrix families");
  MatFq out = MatFq::identity(*field_, dim(level));
  for (std::size_t k = std::max(n + 1, m + 2); k <= level; ++k) place_block(out, m, k, *mat, level);
  return out;
}

std::optional<CylinderUnion> LinearModel::b_support(std::size_t k, std::size_t m) const {
  return CylinderUnion{el_support_z(d_, k, m)};
}

std::optional<PrefixMap> LinearModel::alpha_word_map(std::size_t level) const {
  Word y = repeat(static_cast<Letter>(d_ - 1), level - 1);
  y.push_back(static_cast<Letter>(d_ - 2));
  Word z = repeat(static_cast<Letter>(d_ - 1), level);
  return PrefixMap::from_rules(alpha_, level, {{y, z}, {z, y}});
}

std::string LinearModel::format_b(const BElem& b) const {
  std::string s = std::get<MatFq>(b).format();
  std::replace(s.begin(), s.end(), '\n', ';');
  if (!s.empty() && s.back() == ';') s.pop_back();
  return "[" + s + "]";
}

BElem LinearModel::parse_b(std::string_view text) const {
  text = trim(text);
  std::size_t n = 2 * d_;
  if (text == "id" || text == "1") return b_identity();
  auto gens = b_generators();
  if (text == "b") return gens.at(0);
  if (auto k = generator_index(text, 'b')) {
    if (*k >= gens.size()) throw ParseError("no B generator b" + std::to_string(*k), 0);
    return gens[*k];
  }
  if (!text.empty() && text.front() == '[' && text.back() == ']') {
    std::string body(text.substr(1, text.size() - 2));
    std::replace(body.begin(), body.end(), ';', '\n');
    MatFq m = MatFq::parse(body);
    if (m.dim() != n || &m.field() != field_) throw ParseError("B matrix of wrong shape", 0);
    if (m.det() != 1) throw ParseError("B matrix must have determinant 1", 0);
    return m;
  }
  if (text.rfind("e(", 0) == 0 && text.back() == ')') {
    std::string_view body = text.substr(2, text.size() - 3);
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= body.size(); ++i)
      if (i == body.size() || body[i] == ',') {
        parts.push_back(trim(body.substr(start, i - start)));
        start = i + 1;
      }
    if (parts.size() != 3) throw ParseError("e(u,v,r) takes three arguments", 0);
    auto index = [&](std::string_view w) {
      Word x = alpha_.parse(w);
      if (x.size() != 2 || x[0] > 1) throw ParseError("B index must be x1 or x2 followed by a letter", 0);
      return static_cast<std::size_t>(x[0]) * d_ + x[1];
    };
    long r = std::stol(std::string(parts[2]));
    if (r < 0 || r >= static_cast<long>(field_->q())) throw ParseError("coefficient out of range", 0);
    std::size_t u = index(parts[0]), v = index(parts[1]);
    if (u == v) throw ParseError("e(u,u,r) is not a transvection", 0);
    return elementary(*field_, n, u, v, static_cast<std::uint8_t>(r));
  }
  throw ParseError("unrecognized B element '" + std::string(text) + "'", 0);
}

std::vector<Word> LinearModel::b_point_words() const {
  std::vector<Word> out;
  for (Letter a = 0; a < 2; ++a)
    for (Letter c = 0; c < d_; ++c) out.push_back(Word{a, c});
  return out;
}

// -------------------------------------------------------------- QuotientModel

QuotientModel::QuotientModel(std::shared_ptr<const TelescopeModel> base) : base_(std::move(base)) {
  if (base_->engine() != Engine::matrix) throw PreconditionError("quotient needs a matrix telescope");
}

std::string QuotientModel::id() const {
  std::string b = base_->id();
  if (b.rfind("el-", 0) == 0) return "psl-" + b.substr(3);
  return b + "/Z";
}

BigInt QuotientModel::level_order(std::size_t level) const {
  MatFq id = std::get<MatFq>(base_->identity(level));
  unsigned q = id.field().q();
  std::size_t g = std::gcd<std::size_t, std::size_t>(id.dim(), q - 1);
  return base_->level_order(level) / BigInt(static_cast<unsigned long>(g));
}

bool QuotientModel::equal(const LevelElem& a, const LevelElem& b) const {
  return equal_mod_scalars(std::get<MatFq>(a), std::get<MatFq>(b));
}

std::string QuotientModel::format_level(const LevelElem& x, std::size_t l) const {
  return base_->format_level(normalize_scalar(std::get<MatFq>(x)), l);
}

std::shared_ptr<const QuotientModel> quotient_by_scalars(std::shared_ptr<const TelescopeModel> base) {
  auto qm = std::make_shared<const QuotientModel>(base);
  for (std::size_t i = 1; i < base->max_level(); ++i) {
    MatFq id = std::get<MatFq>(base->identity(i));
    const Field& f = id.field();
    for (unsigned lam = 1; lam < f.q(); ++lam) {
      auto l8 = static_cast<std::uint8_t>(lam);
      std::uint8_t pw = 1;
      for (std::size_t e = 0; e < id.dim(); ++e) pw = f.mul(pw, l8);
      if (pw != 1) continue;  // not central in SL
      LevelElem up = base->iota(MatFq::scalar(f, id.dim(), l8), i, i + 1);
      if (!is_scalar(std::get<MatFq>(up)))
        throw PreconditionError("transition map does not preserve scalars at level " + std::to_string(i));
    }
  }
  return qm;
}

// --------------------------------------------------------------- ShiftedModel

ShiftedModel::ShiftedModel(std::shared_ptr<const TelescopeModel> base, std::size_t n)
    : base_(std::move(base)), n_(n) {
  if (n_ >= base_->max_level()) throw PreconditionError("shift leaves no levels");
}

std::string ShiftedModel::id() const { return base_->id() + "+" + std::to_string(n_); }

ModelPtr shift(ModelPtr base, std::size_t n) {
  if (n == 0) return base;
  return std::make_shared<const ShiftedModel>(std::move(base), n);
}

// ------------------------------------------------------------------- ToyModel

ToyModel::ToyModel(std::size_t max_level) : max_level_(max_level), alpha_(5) {}

LevelElem ToyModel::identity(std::size_t level) const { return Perm(level % 2 == 0 ? 5u : 1u); }

LevelElem ToyModel::iota(const LevelElem& x, std::size_t from, std::size_t to) const {
  return from == to ? x : identity(to);
}

LevelElem ToyModel::phi(std::size_t level, const BElem& b) const {
  if (level % 2 == 1) return identity(level);
  return std::get<Perm>(b);
}

std::vector<LevelElem> ToyModel::level_generators(std::size_t level) const {
  if (level % 2 == 1) return {};
  return {Perm::cycle(5, {0, 1, 2}), Perm::cycle(5, {0, 1, 2, 3, 4})};
}

LevelElem ToyModel::random_level_element(std::size_t level, Rng& rng) const {
  if (level % 2 == 1) return identity(level);
  return random_even_perm(5, rng);
}

BigInt ToyModel::level_order(std::size_t level) const { return level % 2 == 0 ? 60 : 1; }

std::vector<BElem> ToyModel::b_generators() const {
  return {Perm::cycle(5, {0, 1, 2}), Perm::cycle(5, {0, 1, 2, 3, 4})};
}

BElem ToyModel::b_random(Rng& rng) const { return random_even_perm(5, rng); }

std::string ToyModel::format_b(const BElem& b) const {
  const Perm& p = std::get<Perm>(b);
  if (p.is_identity()) return "id";
  return format_cycles(p, [](std::uint32_t i) { return "#" + std::to_string(i); });
}

BElem ToyModel::parse_b(std::string_view text) const {
  text = trim(text);
  if (text == "id" || text == "1") return b_identity();
  return parse_cycles(text, 5, [](std::string_view) { return std::nullopt; });
}

// ------------------------------------------------------------------ builders

namespace {

SpinalConfig alt_config(const AltParams& p) {
  if (p.d < 5 || p.r < 2 || p.r + 3 > p.d) throw PreconditionError("alternating telescope needs d >= 5 and 2 <= r <= d-3");
  SpinalConfig c;
  c.id = "alt-" + std::to_string(p.d) + "-" + std::to_string(p.r);
  c.kind = "alt";
  c.alphabet = Alphabet(p.d);
  c.spine = c.prefix = static_cast<Letter>(p.d - 1);
  c.y = static_cast<Letter>(p.d - 3);
  c.z = static_cast<Letter>(p.d - 2);
  for (Letter a = 0; a < p.r; ++a)
    for (Letter x = 0; x < p.d; ++x) c.points.emplace_back(a, x);
  auto n = static_cast<std::uint32_t>(c.points.size());
  c.b_gens = {Perm::cycle(n, {0, 1, 2}), alternating_cycle_gen(n)};
  c.b_random = [n](Rng& rng) { return random_even_perm(n, rng); };
  // delta = (x1 x_d)(x2 x_(d-1))
  c.epsilon_letters.resize(p.d);
  std::iota(c.epsilon_letters.begin(), c.epsilon_letters.end(), Letter{0});
  std::swap(c.epsilon_letters[0], c.epsilon_letters[p.d - 1]);
  std::swap(c.epsilon_letters[1], c.epsilon_letters[p.d - 2]);
  c.max_level = p.max_level;
  return c;
}

}  // namespace

std::shared_ptr<const SpinalPermModel> build_alt(const AltParams& p) {
  return std::make_shared<const SpinalPermModel>(alt_config(p));
}

std::shared_ptr<const SpinalPermModel> build_alt_corrupted(const AltParams& p) {
  SpinalConfig c = alt_config(p);
  c.id += "-corrupted";
  c.kind = "alt-corrupted";
  c.prefix = 0;
  c.epsilon_letters.clear();
  return std::make_shared<const SpinalPermModel>(std::move(c));
}

std::shared_ptr<const LinearModel> build_el(std::uint32_t d, unsigned q, std::size_t max_level) {
  return std::make_shared<const LinearModel>(d, q, max_level);
}

std::shared_ptr<const QuotientModel> build_psl(std::uint32_t d, unsigned q, std::size_t max_level) {
  return quotient_by_scalars(build_el(d, q, max_level));
}

std::shared_ptr<const SpinalPermModel> build_embed(const EmbedParams& p) {
  const FiniteGroup& G = p.group;
  if (G.size() < 6) throw PreconditionError("H(G) needs |G| >= 6");
  if (!G.is_perfect()) throw PreconditionError(G.name() + " is not perfect");
  SpinalConfig c;
  c.id = "embed-" + G.name();
  c.kind = "embed";
  c.alphabet = Alphabet({6}, static_cast<std::uint32_t>(G.size()));
  c.spine = c.prefix = kEmbedO;
  c.y = kEmbedY;
  c.z = kEmbedZ;
  for (Letter a : {kEmbedDelta, kEmbedEps})
    for (Letter x : {kEmbedY, kEmbedZ, kEmbedO}) c.points.emplace_back(a, x);
  for (std::size_t x = 0; x < G.size(); ++x) c.points.emplace_back(kEmbedAlpha, static_cast<Letter>(x));
  auto n = static_cast<std::uint32_t>(c.points.size());
  auto regular = [&G, n](std::size_t g) {
    std::vector<std::uint32_t> img(n);
    std::iota(img.begin(), img.end(), 0u);
    for (std::size_t x = 0; x < G.size(); ++x) img[6 + x] = static_cast<std::uint32_t>(6 + G.mul(g, x));
    return Perm::unchecked(std::move(img));
  };
  c.b_gens = {Perm::cycle(n, {0, 1, 2}), Perm::cycle(n, {1, 2, 3, 4, 5})};
  for (std::size_t g : G.generators()) {
    Perm r = regular(g);
    if (parity(r) == Parity::odd) throw PreconditionError("left multiplication by a generator is odd");
    c.b_gens.push_back(r);
  }
  auto shared = std::make_shared<FiniteGroup>(G);
  c.b_random = [shared, n](Rng& rng) {
    Perm b0 = random_even_perm(6, rng);
    std::size_t g = rng.below(shared->size());
    std::vector<std::uint32_t> img(n);
    for (std::uint32_t i = 0; i < 6; ++i) img[i] = b0(i);
    for (std::size_t x = 0; x < shared->size(); ++x)
      img[6 + x] = static_cast<std::uint32_t>(6 + shared->mul(g, x));
    return Perm::unchecked(std::move(img));
  };
  c.max_level = p.max_level;
  return std::make_shared<const SpinalPermModel>(std::move(c));
}

std::shared_ptr<const ToyModel> build_toy(std::size_t max_level) {
  return std::make_shared<const ToyModel>(max_level);
}

Perm embed_group_element(const SpinalPermModel& embed, const FiniteGroup& g, std::size_t index) {
  auto n = static_cast<std::uint32_t>(embed.point_count());
  std::vector<std::uint32_t> img(n);
  std::iota(img.begin(), img.end(), 0u);
  for (std::size_t x = 0; x < g.size(); ++x) {
    std::size_t from = embed.point_index(kEmbedAlpha, static_cast<Letter>(x));
    std::size_t to = embed.point_index(kEmbedAlpha, static_cast<Letter>(g.mul(index, x)));
    if (from == static_cast<std::size_t>(-1) || to == static_cast<std::size_t>(-1))
      throw PreconditionError("group does not match the embedding telescope");
    img[from] = static_cast<std::uint32_t>(to);
  }
  return Perm::unchecked(std::move(img));
}

std::vector<LazyElement> directed_tree_embedding(
    const std::shared_ptr<const SpinalPermModel>& embed, const FiniteGroup& g) {
  std::vector<LazyElement> out;
  for (std::size_t i = 0; i < g.size(); ++i)
    out.push_back(LazyElement::tilde(embed, 1, embed_group_element(*embed, g, i)));
  return out;
}

std::vector<LazyElement> default_generators(const ModelPtr& model) {
  std::vector<LazyElement> out;
  for (auto& g : model->level_generators(1)) out.push_back(LazyElement::delta(model, 1, g));
  for (auto& b : model->b_generators()) out.push_back(LazyElement::tilde(model, 1, b));
  return out;
}

// ------------------------------------------------------------------ supports

CylinderSet alt_support(std::uint32_t d, std::uint32_t r, AltSupport kind, std::size_t i,
                        std::size_t j, std::size_t k) {
  Alphabet a(d);
  auto one = [d](Letter x) { return LetterSet::singleton(d, x); };
  const Letter o = static_cast<Letter>(d - 1);
  std::vector<Letter> prefix_letters;
  for (Letter x = 0; x < r; ++x) prefix_letters.push_back(x);
  std::vector<LetterSet> cons;
  auto full = [&](std::size_t n) {
    for (std::size_t t = 0; t < n; ++t) cons.push_back(LetterSet::full(d));
  };
  auto run = [&](std::size_t n) {
    for (std::size_t t = 0; t < n; ++t) cons.push_back(one(o));
  };
  switch (kind) {
    case AltSupport::B:
      if (i < 2 || j < i) throw PreconditionError("B support needs 2 <= i <= j");
      run(i - 2);
      cons.push_back(LetterSet::of(d, prefix_letters));
      full(j + 1 - i);
      break;
    case AltSupport::alpha:
      if (i < 1 || j < i) throw PreconditionError("alpha support needs 1 <= i <= j");
      run(i - 1);
      cons.push_back(LetterSet::of(d, {static_cast<Letter>(d - 3), static_cast<Letter>(d - 2), o}));
      full(j - i);
      break;
    case AltSupport::B_conj:
      if (i < 1 || j < i + 2 || k < j) throw PreconditionError("conjugated support needs i+2 <= j <= k");
      run(i - 1);
      cons.push_back(one(static_cast<Letter>(d - 2)));
      run(j - 2 - i);
      cons.push_back(LetterSet::of(d, prefix_letters));
      full(k + 1 - j);
      break;
  }
  return CylinderSet(a, std::move(cons));
}

CylinderSet el_support_z(std::uint32_t d, std::size_t n, std::size_t m) {
  if (n < 2 || m < n) throw PreconditionError("Z(n,m) needs 2 <= n <= m");
  std::vector<LetterSet> cons(n - 2, LetterSet::singleton(d, static_cast<Letter>(d - 1)));
  cons.push_back(LetterSet::of(d, {Letter{0}, Letter{1}}));
  for (std::size_t t = 0; t < m - n + 1; ++t) cons.push_back(LetterSet::full(d));
  return CylinderSet(Alphabet(d), std::move(cons));
}

CylinderSet el_support_zi(std::uint32_t d, std::size_t i, std::size_t k, std::size_t m) {
  if (i < 1 || k < i + 2 || m < k) throw PreconditionError("Z^(i)(k,m) needs i+2 <= k <= m");
  const auto o = LetterSet::singleton(d, static_cast<Letter>(d - 1));
  std::vector<LetterSet> cons(i - 1, o);
  cons.push_back(LetterSet::singleton(d, static_cast<Letter>(d - 2)));
  for (std::size_t t = 0; t < k - i - 2; ++t) cons.push_back(o);
  cons.push_back(LetterSet::of(d, {Letter{0}, Letter{1}}));
  for (std::size_t t = 0; t < m - k + 1; ++t) cons.push_back(LetterSet::full(d));
  return CylinderSet(Alphabet(d), std::move(cons));
}

}  // namespace telescopes
