#include "telescopes/transvection.hpp"

#include <deque>
#include <functional>
#include <optional>

#include "telescopes/common.hpp"

namespace telescopes {

std::set<std::pair<std::size_t, std::size_t>> TransvectionClosure::positions() const {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> count;
  for (const auto& [key, node] : items) ++count[{std::get<0>(key), std::get<1>(key)}];
  std::set<std::pair<std::size_t, std::size_t>> out;
  for (const auto& [pos, c] : count)
    if (c == basis.size()) out.insert(pos);
  return out;
}

MatFq TransvectionClosure::replay(std::size_t node, const std::vector<MatFq>& gens,
                                  const std::vector<MatFq>& conjugators) const {
  std::map<std::size_t, MatFq> memo;
  std::function<MatFq(std::size_t)> eval = [&](std::size_t k) -> MatFq {
    if (auto it = memo.find(k); it != memo.end()) return it->second;
    const WitnessNode& w = nodes[k];
    MatFq m;
    switch (w.kind) {
      case WitnessNode::Kind::seed:
        m = MatFq::identity(*field, dim);
        for (auto [g, inv] : w.word) m = m * (inv ? gens.at(g).inverse() : gens.at(g));
        break;
      case WitnessNode::Kind::conjugate: {
        MatFq s = conjugators.at(w.conj);
        if (w.conj_inverse) s = s.inverse();
        m = s * eval(w.a) * s.inverse();
        if (w.invert) m = m.inverse();
        break;
      }
      case WitnessNode::Kind::commutator:
        m = commutator(eval(w.a), eval(w.b));
        break;
    }
    memo.emplace(k, m);
    return m;
  };
  return eval(node);
}

TransvectionClosure transvection_closure(const Field& f, std::size_t dim,
                                         const std::vector<SeedTransvection>& seeds,
                                         const std::vector<MatFq>& conjugators) {
  TransvectionClosure c;
  c.field = &f;
  c.dim = dim;
  c.basis = f.prime_basis();
  std::vector<char> is_basis(f.q(), 0);
  for (auto b : c.basis) is_basis[b] = 1;

  struct Mover {
    std::size_t conj;
    bool inverse;
    SignedPermData data;
  };
  std::vector<Mover> movers;
  for (std::size_t i = 0; i < conjugators.size(); ++i) {
    if (conjugators[i].dim() != dim) throw PreconditionError("conjugator dimension mismatch");
    auto d = as_signed_perm(conjugators[i]);
    if (!d) continue;
    movers.push_back({i, false, *d});
    auto di = as_signed_perm(conjugators[i].inverse());
    movers.push_back({i, true, *di});
  }

  std::deque<std::size_t> queue;
  // out_one[v]: w with an item (v, w, 1); into[v]: (u, a) with an item (u, v, a).
  std::vector<std::vector<std::size_t>> out_one(dim);
  std::vector<std::vector<std::pair<std::size_t, std::uint8_t>>> into(dim);
  auto add = [&](WitnessNode n) {
    auto key = std::make_tuple(n.u, n.v, n.r);
    if (c.items.count(key)) return;
    std::size_t id = c.nodes.size();
    c.nodes.push_back(std::move(n));
    c.items.emplace(key, id);
    queue.push_back(id);
  };
  for (const auto& s : seeds) {
    if (s.u >= dim || s.v >= dim || s.u == s.v) throw PreconditionError("bad seed position");
    if (s.r >= f.q() || !is_basis[s.r]) continue;
    WitnessNode n;
    n.kind = WitnessNode::Kind::seed;
    n.u = s.u;
    n.v = s.v;
    n.r = s.r;
    n.word = s.word;
    add(std::move(n));
  }
  auto item = [&](std::size_t u, std::size_t v, std::uint8_t r) -> std::optional<std::size_t> {
    auto it = c.items.find({u, v, r});
    if (it == c.items.end()) return std::nullopt;
    return it->second;
  };
  while (!queue.empty()) {
    std::size_t id = queue.front();
    queue.pop_front();
    const std::size_t u = c.nodes[id].u, v = c.nodes[id].v;
    const std::uint8_t r = c.nodes[id].r;
    into[v].emplace_back(u, r);
    if (r == 1) out_one[u].push_back(v);
    for (const auto& m : movers) {
      std::size_t tu = m.data.target[u], tv = m.data.target[v];
      std::uint8_t coef = f.mul(f.mul(m.data.sign[u], m.data.sign[v]), r);
      WitnessNode n;
      n.kind = WitnessNode::Kind::conjugate;
      n.u = tu;
      n.v = tv;
      n.r = r;
      n.conj = m.conj;
      n.conj_inverse = m.inverse;
      n.invert = coef != r;
      n.a = id;
      add(std::move(n));
    }
    // As left factor: (u, v, r) with (v, w, 1).
    for (std::size_t w : std::vector<std::size_t>(out_one[v])) {
      if (w == u) continue;
      WitnessNode n;
      n.kind = WitnessNode::Kind::commutator;
      n.u = u;
      n.v = w;
      n.r = r;
      n.a = id;
      n.b = *item(v, w, 1);
      add(std::move(n));
    }
    // As right factor: (x, u, a) with (u, v, 1).
    if (r == 1) {
      for (auto [x, a] : std::vector<std::pair<std::size_t, std::uint8_t>>(into[u])) {
        if (x == v) continue;
        WitnessNode n;
        n.kind = WitnessNode::Kind::commutator;
        n.u = x;
        n.v = v;
        n.r = a;
        n.a = *item(x, u, a);
        n.b = id;
        add(std::move(n));
      }
    }
  }
  return c;
}

}  // namespace telescopes
