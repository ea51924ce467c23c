#include "telescopes/perm.hpp"

#include <cctype>
#include <numeric>

#include "telescopes/kernels.hpp"

namespace telescopes {

Perm::Perm(std::uint32_t degree) : img_(degree) {
  std::iota(img_.begin(), img_.end(), 0u);
}

Perm::Perm(std::vector<std::uint32_t> images) : img_(std::move(images)) {
  std::vector<char> seen(img_.size(), 0);
  for (auto y : img_) {
    if (y >= img_.size() || seen[y]) throw PreconditionError("images do not form a bijection");
    seen[y] = 1;
  }
}

Perm Perm::from_cycles(std::uint32_t degree,
                       const std::vector<std::vector<std::uint32_t>>& cycles) {
  Perm p(degree);
  std::vector<char> used(degree, 0);
  for (const auto& c : cycles) {
    for (auto x : c) {
      if (x >= degree) throw PreconditionError("cycle point out of range");
      if (used[x]) throw PreconditionError("cycles are not disjoint");
      used[x] = 1;
    }
    for (std::size_t i = 0; i < c.size(); ++i) p.img_[c[i]] = c[(i + 1) % c.size()];
  }
  return p;
}

Perm Perm::unchecked(std::vector<std::uint32_t> images) {
  Perm p;
  p.img_ = std::move(images);
  return p;
}

Perm Perm::cycle(std::uint32_t degree, const std::vector<std::uint32_t>& pts) {
  return from_cycles(degree, {pts});
}

bool Perm::is_identity() const { return moved_count() == 0; }

std::size_t Perm::moved_count() const {
  return kernels::count_moved_u32(img_.data(), img_.size());
}

std::vector<std::vector<std::uint32_t>> Perm::cycles() const {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<char> seen(img_.size(), 0);
  for (std::uint32_t x = 0; x < degree(); ++x) {
    if (seen[x] || img_[x] == x) continue;
    std::vector<std::uint32_t> c;
    for (std::uint32_t y = x; !seen[y]; y = img_[y]) {
      seen[y] = 1;
      c.push_back(y);
    }
    out.push_back(std::move(c));
  }
  return out;
}

BigInt Perm::order() const {
  BigInt r = 1;
  for (const auto& c : cycles()) {
    BigInt len = static_cast<unsigned long>(c.size());
    mpz_lcm(r.get_mpz_t(), r.get_mpz_t(), len.get_mpz_t());
  }
  return r;
}

Perm compose(const Perm& a, const Perm& b) {
  if (a.degree() != b.degree()) throw PreconditionError("degree mismatch");
  std::vector<std::uint32_t> out(a.degree());
  kernels::gather_u32(a.images().data(), b.images().data(), out.data(), out.size());
  return Perm::unchecked(std::move(out));
}

Perm inverse(const Perm& a) {
  std::vector<std::uint32_t> img(a.degree());
  for (std::uint32_t x = 0; x < a.degree(); ++x) img[a(x)] = x;
  return Perm::unchecked(std::move(img));
}

Parity parity(const Perm& a) {
  std::size_t even_len = 0;
  for (const auto& c : a.cycles()) even_len += (c.size() % 2 == 0);
  return even_len % 2 ? Parity::odd : Parity::even;
}

std::vector<std::uint32_t> support_of(const Perm& a) {
  std::vector<std::uint32_t> s;
  for (std::uint32_t x = 0; x < a.degree(); ++x)
    if (a(x) != x) s.push_back(x);
  return s;
}

Perm power(const Perm& a, std::int64_t e) {
  Perm base = e < 0 ? inverse(a) : a;
  std::uint64_t n = e < 0 ? static_cast<std::uint64_t>(-(e + 1)) + 1 : static_cast<std::uint64_t>(e);
  Perm r(a.degree());
  while (n) {
    if (n & 1) r = compose(r, base);
    base = compose(base, base);
    n >>= 1;
  }
  return r;
}

Perm conjugate(const Perm& g, const Perm& h) {
  return compose(inverse(h), compose(g, h));
}

Perm commutator(const Perm& g, const Perm& h) {
  return compose(compose(g, h), compose(inverse(g), inverse(h)));
}

Perm direct_sum(const Perm& a, const Perm& b) {
  std::vector<std::uint32_t> img(a.images());
  for (auto y : b.images()) img.push_back(y + a.degree());
  return Perm(std::move(img));
}

std::string format_cycles(const Perm& p, const PointNamer& name) {
  auto cs = p.cycles();
  if (cs.empty()) return "()";
  std::string s;
  for (const auto& c : cs) {
    s += "(";
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) s += " ";
      s += name(c[i]);
    }
    s += ")";
  }
  return s;
}

Perm parse_cycles(std::string_view text, std::uint32_t degree,
                  const PointLookup& lookup) {
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip();
  if (text.substr(i) == "id") return Perm(degree);
  std::vector<std::vector<std::uint32_t>> cycles;
  std::vector<char> used(degree, 0);
  while (skip(), i < text.size()) {
    if (text[i] != '(') throw ParseError("expected '('", i);
    ++i;
    std::vector<std::uint32_t> c;
    for (;;) {
      skip();
      if (i >= text.size()) throw ParseError("unterminated cycle", i);
      if (text[i] == ')') {
        ++i;
        break;
      }
      std::size_t start = i;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
             text[i] != ')' && text[i] != '(' && text[i] != ',')
        ++i;
      std::string_view tok = text.substr(start, i - start);
      if (tok.empty()) throw ParseError("expected point", start);
      std::optional<std::uint32_t> pt;
      if (tok[0] == '#') {
        std::uint32_t v = 0;
        bool ok = tok.size() > 1;
        for (char ch : tok.substr(1)) {
          if (!std::isdigit(static_cast<unsigned char>(ch))) ok = false;
          else v = v * 10 + static_cast<std::uint32_t>(ch - '0');
        }
        if (ok) pt = v;
      } else {
        pt = lookup(tok);
      }
      if (!pt || *pt >= degree) throw ParseError("unknown point '" + std::string(tok) + "'", start);
      if (used[*pt]) throw ParseError("point repeated in cycles", start);
      used[*pt] = 1;
      c.push_back(*pt);
      skip();
      if (i < text.size() && text[i] == ',') ++i;
    }
    if (c.size() > 1) cycles.push_back(std::move(c));
  }
  return Perm::from_cycles(degree, cycles);
}

std::size_t PermHash::operator()(const Perm& p) const {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (auto y : p.images()) h = (h ^ y) * 0x100000001b3ULL;
  return h;
}

}  // namespace telescopes
