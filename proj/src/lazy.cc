#include "telescopes/telescope.hpp"

namespace telescopes {

LevelElem AtomData::value(const TelescopeModel& m, std::size_t n, bool inv) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find({n, inv});
    if (it != cache_.end()) return it->second;
  }
  LevelElem v;
  if (inv) {
    v = level_inv(value(m, n, false));
  } else {
    switch (kind) {
      case AtomKind::delta: {
        const auto& w = std::get<LevelElem>(payload);
        v = n < level ? m.identity(n) : (n == level ? w : m.iota(w, level, n));
        break;
      }
      case AtomKind::one_hot:
        v = n == level ? std::get<LevelElem>(payload) : m.identity(n);
        break;
      case AtomKind::tilde:
        v = m.tilde_level(level, std::get<BElem>(payload), n);
        break;
      case AtomKind::directed:
        v = m.directed_level(depth, level, std::get<DirectedElem>(payload), n);
        break;
      case AtomKind::epsilon:
        v = m.epsilon_level(n);
        break;
    }
  }
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.emplace(std::make_pair(n, inv), std::move(v)).first->second;
}

bool AtomData::same(const AtomData& o) const {
  if (this == &o) return true;
  return kind == o.kind && level == o.level && depth == o.depth && payload == o.payload;
}

LazyElement::LazyElement(ModelPtr model)
    : model_(std::move(model)), cache_(std::make_shared<Cache>()) {
  if (!model_) throw PreconditionError("null telescope model");
}

LazyElement LazyElement::delta(ModelPtr model, std::size_t i, LevelElem omega) {
  if (i < 1 || i > model->max_level())
    throw PreconditionError("delta level " + std::to_string(i) + " out of range");
  LazyElement g(model);
  if (model->is_identity(omega, i)) return g;
  g.atoms_.push_back({std::make_shared<AtomData>(AtomKind::delta, i, 0, std::move(omega)), false});
  return g;
}

LazyElement LazyElement::one_hot(ModelPtr model, std::size_t i, LevelElem omega) {
  if (i < 1 || i > model->max_level())
    throw PreconditionError("one-hot level " + std::to_string(i) + " out of range");
  LazyElement g(model);
  if (model->is_identity(omega, i)) return g;
  g.atoms_.push_back({std::make_shared<AtomData>(AtomKind::one_hot, i, 0, std::move(omega)), false});
  return g;
}

LazyElement LazyElement::tilde(ModelPtr model, std::size_t n, BElem b) {
  if (n < 1) throw PreconditionError("tilde start must be at least 1");
  LazyElement g(model);
  if (b_is_identity(b)) return g;
  g.atoms_.push_back({std::make_shared<AtomData>(AtomKind::tilde, n, 0, std::move(b)), false});
  return g;
}

LazyElement LazyElement::directed(ModelPtr model, std::size_t m, std::size_t n, DirectedElem s) {
  if (n < m + 1) throw PreconditionError("directed start must be at least depth + 1");
  LazyElement g(model);
  if (auto lf = std::get_if<LineFamily>(&s)) {
    bool trivial = true;
    for (const auto& [v, p] : lf->lines) trivial = trivial && p.is_identity();
    if (trivial) return g;
  } else if (std::get<MatFq>(s).is_identity()) {
    return g;
  }
  g.atoms_.push_back({std::make_shared<AtomData>(AtomKind::directed, n, m, std::move(s)), false});
  return g;
}

LazyElement LazyElement::epsilon(ModelPtr model) {
  LazyElement g(model);
  g.atoms_.push_back({std::make_shared<AtomData>(AtomKind::epsilon, 0, 0, std::monostate{}), false});
  return g;
}

LazyElement LazyElement::operator*(const LazyElement& o) const {
  if (model_ != o.model_) throw PreconditionError("elements of different telescopes");
  LazyElement r(model_);
  r.atoms_ = atoms_;
  for (const Atom& a : o.atoms_) {
    if (!r.atoms_.empty()) {
      const Atom& last = r.atoms_.back();
      if (last.inverse != a.inverse && last.data->same(*a.data)) {
        r.atoms_.pop_back();
        continue;
      }
    }
    r.atoms_.push_back(a);
  }
  return r;
}

LazyElement LazyElement::inverse() const {
  LazyElement r(model_);
  r.atoms_.reserve(atoms_.size());
  for (auto it = atoms_.rbegin(); it != atoms_.rend(); ++it)
    r.atoms_.push_back({it->data, !it->inverse});
  return r;
}

LevelElem LazyElement::project(std::size_t n) const {
  if (n < 1 || n > model_->max_level())
    throw PreconditionError("level " + std::to_string(n) + " outside 1.." +
                            std::to_string(model_->max_level()));
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->levels.find(n);
    if (it != cache_->levels.end()) return it->second;
  }
  LevelElem acc = model_->identity(n);
  for (const Atom& a : atoms_) acc = level_mul(acc, a.data->value(*model_, n, a.inverse));
  std::lock_guard<std::mutex> lock(cache_->mu);
  return cache_->levels.emplace(n, std::move(acc)).first->second;
}

bool LazyElement::trivial_at(std::size_t n) const {
  return model_->is_identity(project(n), n);
}

bool equal_at(const LazyElement& g, const LazyElement& h, std::size_t n) {
  return g.model().equal(g.project(n), h.project(n));
}

bool equal_up_to(const LazyElement& g, const LazyElement& h, std::size_t n) {
  for (std::size_t j = 1; j <= n; ++j)
    if (!equal_at(g, h, j)) return false;
  return true;
}

LazyElement commutator(const LazyElement& g, const LazyElement& h) {
  return g * h * g.inverse() * h.inverse();
}

LazyElement conjugate(const LazyElement& g, const LazyElement& h) {
  return h.inverse() * g * h;
}

}  // namespace telescopes
