#include "telescopes/telescope.hpp"

#include <algorithm>
#include <cctype>

namespace telescopes {

std::string engine_name(Engine e) {
  switch (e) {
    case Engine::permutation: return "permutation";
    case Engine::matrix: return "matrix";
    case Engine::matrix_mod_scalars: return "matrix-mod-scalars";
  }
  return "?";
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

LevelElem level_mul(const LevelElem& a, const LevelElem& b) {
  if (a.index() != b.index()) throw PreconditionError("level elements of different kinds");
  return std::visit(
      overloaded{[&](const PrefixMap& x) -> LevelElem { return compose(x, std::get<PrefixMap>(b)); },
                 [&](const MatFq& x) -> LevelElem { return x * std::get<MatFq>(b); },
                 [&](const Perm& x) -> LevelElem { return compose(x, std::get<Perm>(b)); }},
      a);
}

LevelElem level_inv(const LevelElem& a) {
  return std::visit(overloaded{[](const PrefixMap& x) -> LevelElem { return inverse(x); },
                               [](const MatFq& x) -> LevelElem { return x.inverse(); },
                               [](const Perm& x) -> LevelElem { return inverse(x); }},
                    a);
}

bool level_exact_equal(const LevelElem& a, const LevelElem& b) { return a == b; }

Perm level_to_perm(const LevelElem& a) {
  if (auto p = std::get_if<PrefixMap>(&a)) return p->to_perm();
  if (auto p = std::get_if<Perm>(&a)) return *p;
  throw PreconditionError("matrix has no permutation form");
}

BElem b_mul(const BElem& a, const BElem& b) {
  if (a.index() != b.index()) throw PreconditionError("B elements of different kinds");
  if (auto p = std::get_if<Perm>(&a)) return compose(*p, std::get<Perm>(b));
  return std::get<MatFq>(a) * std::get<MatFq>(b);
}

BElem b_inv(const BElem& a) {
  if (auto p = std::get_if<Perm>(&a)) return inverse(*p);
  return std::get<MatFq>(a).inverse();
}

bool b_is_identity(const BElem& a) {
  if (auto p = std::get_if<Perm>(&a)) return p->is_identity();
  return std::get<MatFq>(a).is_identity();
}

LevelElem TelescopeModel::tilde_level(std::size_t n, const BElem& b, std::size_t level) const {
  LevelElem acc = identity(level);
  for (std::size_t k = n + 1; k <= level; ++k) {
    if (k < 2) continue;
    acc = level_mul(acc, iota(phi(k, b), k, level));
  }
  return acc;
}

LevelElem TelescopeModel::phi_directed(std::size_t m, std::size_t k, const DirectedElem& s) const {
  if (m == 0) {
    if (auto lf = std::get_if<LineFamily>(&s)) {
      auto it = lf->lines.find(Word{});
      if (it == lf->lines.end()) return identity(k);
      return phi(k, it->second);
    }
  }
  throw PreconditionError("directed families are not available for " + id());
}

LevelElem TelescopeModel::directed_level(std::size_t m, std::size_t n, const DirectedElem& s,
                                         std::size_t level) const {
  LevelElem acc = identity(level);
  for (std::size_t k = std::max(n + 1, m + 2); k <= level; ++k)
    acc = level_mul(acc, iota(phi_directed(m, k, s), k, level));
  return acc;
}

LevelElem TelescopeModel::epsilon_level(std::size_t) const {
  throw PreconditionError("epsilon is not defined for " + id());
}

std::string TelescopeModel::format_level(const LevelElem& x, std::size_t level) const {
  if (auto p = std::get_if<PrefixMap>(&x)) {
    if (p->is_identity()) return "id";
    std::uint64_t count = alphabet().count(word_length(level));
    if (count <= 30000) {
      const Alphabet& a = alphabet();
      std::size_t len = word_length(level);
      return format_cycles(p->to_perm(), [&](std::uint32_t i) { return format_word(a.unrank(i, len)); });
    }
    return "{" + p->format_rules() + "}";
  }
  if (auto m = std::get_if<MatFq>(&x)) {
    std::string s = m->format();
    std::replace(s.begin(), s.end(), '\n', ';');
    if (!s.empty() && s.back() == ';') s.pop_back();
    return "[" + s + "]";
  }
  const Perm& p = std::get<Perm>(x);
  if (p.is_identity()) return "id";
  return format_cycles(p, [](std::uint32_t i) { return "#" + std::to_string(i); });
}

LevelElem TelescopeModel::parse_level(std::string_view text, std::size_t level) const {
  text = trim(text);
  if (text == "id" || text == "1") return identity(level);
  if (text == "a") return alpha(level);
  if (text.size() > 1 && text[0] == 'g' && std::all_of(text.begin() + 1, text.end(), ::isdigit)) {
    std::size_t k = std::stoul(std::string(text.substr(1)));
    auto gens = level_generators(level);
    if (k >= gens.size()) throw ParseError("no level generator g" + std::to_string(k), 0);
    return gens[k];
  }
  LevelElem id = identity(level);
  if (std::holds_alternative<MatFq>(id)) {
    const MatFq& idm = std::get<MatFq>(id);
    const Alphabet& a = alphabet();
    std::size_t len = word_length(level);
    auto word_index = [&](std::string_view w) -> std::size_t {
      Word x = a.parse(trim(w));
      if (x.size() != len) throw ParseError("word of wrong length", 0);
      return a.rank(x);
    };
    if (text.front() == '[' && text.back() == ']') {
      std::string body(text.substr(1, text.size() - 2));
      std::replace(body.begin(), body.end(), ';', '\n');
      MatFq m = MatFq::parse(body);
      if (m.dim() != idm.dim() || &m.field() != &idm.field())
        throw ParseError("matrix shape does not match level", 0);
      return m;
    }
    if ((text.rfind("e(", 0) == 0 || text.rfind("s(", 0) == 0) && text.back() == ')') {
      std::string_view body = text.substr(2, text.size() - 3);
      std::vector<std::string_view> parts;
      std::size_t start = 0;
      for (std::size_t i = 0; i <= body.size(); ++i)
        if (i == body.size() || body[i] == ',') {
          parts.push_back(body.substr(start, i - start));
          start = i + 1;
        }
      if (text[0] == 's') {
        if (parts.size() != 2) throw ParseError("s(u,v) takes two words", 0);
        return signed_perm(idm.field(), idm.dim(), word_index(parts[0]), word_index(parts[1]));
      }
      if (parts.size() != 3) throw ParseError("e(u,v,r) takes three arguments", 0);
      long r = std::stol(std::string(trim(parts[2])));
      if (r < 0 || r >= static_cast<long>(idm.field().q())) throw ParseError("coefficient out of range", 0);
      return elementary(idm.field(), idm.dim(), word_index(parts[0]), word_index(parts[1]),
                        static_cast<std::uint8_t>(r));
    }
    throw ParseError("unrecognized matrix element '" + std::string(text) + "'", 0);
  }
  if (std::holds_alternative<Perm>(id)) {
    const Perm& p = std::get<Perm>(id);
    return parse_cycles(text, p.degree(), [](std::string_view) { return std::nullopt; });
  }
  const Alphabet& a = alphabet();
  std::size_t len = word_length(level);
  if (text.front() == '{' && text.back() == '}') {
    std::string_view body = trim(text.substr(1, text.size() - 2));
    std::vector<PrefixMap::Rule> rules;
    if (body != "id") {
      std::size_t start = 0;
      for (std::size_t i = 0; i <= body.size(); ++i) {
        if (i < body.size() && body[i] != ',') continue;
        std::string_view r = trim(body.substr(start, i - start));
        std::size_t arrow = r.find("->");
        if (arrow == std::string_view::npos) throw ParseError("expected 'p->q' rule", start);
        rules.emplace_back(a.parse(trim(r.substr(0, arrow))), a.parse(trim(r.substr(arrow + 2))));
        start = i + 1;
      }
    }
    return PrefixMap::from_rules(a, len, std::move(rules));
  }
  // Cycle notation over words; built from sparse rules so that deep levels
  // stay cheap.
  std::vector<Word> names;
  std::map<Word, std::uint32_t> index;
  auto lookup = [&](std::string_view tok) -> std::optional<std::uint32_t> {
    Word w;
    try {
      w = a.parse(tok);
    } catch (const ParseError&) {
      return std::nullopt;
    }
    if (w.size() != len) return std::nullopt;
    auto [it, fresh] = index.emplace(w, static_cast<std::uint32_t>(names.size()));
    if (fresh) names.push_back(w);
    return it->second;
  };
  // Collect names first, then parse against the compact index set.
  std::size_t mentioned = 0;
  for (std::size_t i = 0; i < text.size();) {
    if (text[i] == 'x') {
      std::size_t j = i;
      while (j < text.size() && (text[j] == 'x' || std::isdigit(static_cast<unsigned char>(text[j])))) ++j;
      if (!lookup(text.substr(i, j - i))) throw ParseError("unknown word '" + std::string(text.substr(i, j - i)) + "'", i);
      ++mentioned;
      i = j;
    } else {
      ++i;
    }
  }
  (void)mentioned;
  Perm local = parse_cycles(text, static_cast<std::uint32_t>(names.size()), lookup);
  std::vector<PrefixMap::Rule> rules;
  for (std::uint32_t k = 0; k < local.degree(); ++k)
    if (local(k) != k) rules.emplace_back(names[k], names[local(k)]);
  PrefixMap m = PrefixMap::from_rules(a, len, std::move(rules));
  if (parity(local) == Parity::odd) throw ParseError("odd permutation is not in the level group", 0);
  return m;
}

std::string TelescopeModel::format_directed(const DirectedElem& s) const {
  if (auto lf = std::get_if<LineFamily>(&s)) {
    std::vector<Word> pts = b_point_words();
    std::string out = "{";
    bool first = true;
    for (const auto& [v, p] : lf->lines) {
      if (p.is_identity()) continue;
      if (!first) out += "; ";
      first = false;
      out += (v.empty() ? std::string("()") : format_word(v)) + ":";
      out += format_cycles(p, [&](std::uint32_t i) {
        return i < pts.size() ? format_word(pts[i]) : "#" + std::to_string(i);
      });
    }
    return out + "}";
  }
  std::string s2 = std::get<MatFq>(s).format();
  std::replace(s2.begin(), s2.end(), '\n', ';');
  if (!s2.empty() && s2.back() == ';') s2.pop_back();
  return "[" + s2 + "]";
}

}  // namespace telescopes
