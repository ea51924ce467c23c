#include "telescopes/matfq.hpp"

#include <algorithm>
#include <sstream>

#include "telescopes/common.hpp"

namespace telescopes {

MatFq::MatFq(const Field& f, std::size_t n) : field_(&f), n_(n) {
  if (n > kMatrixDimCap) throw CapExceeded("matrix dimension " + std::to_string(n) + " exceeds cap");
  a_.assign(n * n, 0);
}

MatFq MatFq::identity(const Field& f, std::size_t n) { return scalar(f, n, 1); }

MatFq MatFq::scalar(const Field& f, std::size_t n, std::uint8_t lambda) {
  MatFq m(f, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, lambda);
  return m;
}

bool MatFq::is_identity() const {
  auto s = is_scalar(*this);
  return s && *s == 1;
}

MatFq operator*(const MatFq& a, const MatFq& b) {
  if (a.n_ != b.n_ || a.field_ != b.field_) throw PreconditionError("matrix shape mismatch");
  const Field& f = *a.field_;
  MatFq c(f, a.n_);
  for (std::size_t i = 0; i < a.n_; ++i) {
    std::uint8_t* out = c.row(i);
    const std::uint8_t* ai = a.row(i);
    for (std::size_t k = 0; k < a.n_; ++k) {
      if (!ai[k]) continue;
      kernels::gf_axpy(out, b.row(k), a.n_, f.mul_row(ai[k]), f.add_table(),
                       static_cast<std::uint8_t>(f.q()), static_cast<std::uint8_t>(f.p()),
                       f.add_mode());
    }
  }
  return c;
}

namespace {

// Row-reduces `m` (and `aug` alongside when given). Returns the determinant.
std::uint8_t eliminate(MatFq& m, MatFq* aug) {
  const Field& f = m.field();
  std::size_t n = m.dim();
  std::uint8_t det = 1;
  auto axpy = [&](MatFq& x, std::size_t dst, std::size_t src, std::uint8_t c) {
    kernels::gf_axpy(x.row(dst), x.row(src), n, f.mul_row(c), f.add_table(),
                     static_cast<std::uint8_t>(f.q()), static_cast<std::uint8_t>(f.p()),
                     f.add_mode());
  };
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && !m.at(piv, col)) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      std::swap_ranges(m.row(piv), m.row(piv) + n, m.row(col));
      if (aug) std::swap_ranges(aug->row(piv), aug->row(piv) + n, aug->row(col));
      det = f.neg(det);
    }
    std::uint8_t pv = m.at(col, col);
    det = f.mul(det, pv);
    std::uint8_t pinv = f.inv(pv);
    for (std::size_t j = 0; j < n; ++j) {
      m.set(col, j, f.mul(m.at(col, j), pinv));
      if (aug) aug->set(col, j, f.mul(aug->at(col, j), pinv));
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || !m.at(r, col)) continue;
      if (!aug && r < col) continue;
      std::uint8_t c = f.neg(m.at(r, col));
      axpy(m, r, col, c);
      if (aug) axpy(*aug, r, col, c);
    }
  }
  return det;
}

}  // namespace

std::uint8_t MatFq::det() const {
  MatFq m = *this;
  return eliminate(m, nullptr);
}

MatFq MatFq::inverse() const {
  MatFq m = *this;
  MatFq inv = identity(*field_, n_);
  if (!eliminate(m, &inv)) throw PreconditionError("singular matrix");
  return inv;
}

MatFq MatFq::kron_identity(std::size_t m) const {
  MatFq r(*field_, n_ * m);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) {
      std::uint8_t v = at(i, j);
      if (!v) continue;
      for (std::size_t s = 0; s < m; ++s) r.set(i * m + s, j * m + s, v);
    }
  return r;
}

MatFq MatFq::submatrix(const std::vector<std::size_t>& idx) const {
  MatFq r(*field_, idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) r.set(i, j, at(idx[i], idx[j]));
  return r;
}

std::string MatFq::format() const {
  std::ostringstream os;
  os << "q=" << field_->name() << " n=" << n_ << "\n";
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) os << (j ? " " : "") << unsigned{at(i, j)};
    os << "\n";
  }
  return os.str();
}

MatFq MatFq::parse(std::string_view text) {
  std::string s(text);
  std::istringstream is(s);
  std::string qtok, ntok;
  if (!(is >> qtok >> ntok) || qtok.rfind("q=", 0) != 0 || ntok.rfind("n=", 0) != 0)
    throw ParseError("expected header 'q=<p>^<e> n=<dim>'", 0);
  unsigned p = 0, e = 0;
  std::size_t n = 0;
  if (std::sscanf(qtok.c_str(), "q=%u^%u", &p, &e) != 2) throw ParseError("bad field header", 0);
  if (std::sscanf(ntok.c_str(), "n=%zu", &n) != 1) throw ParseError("bad dimension header", 0);
  unsigned q = 1;
  for (unsigned k = 0; k < e; ++k) q *= p;
  if (!Field::supported(q)) throw ParseError("unsupported field", 0);
  const Field& f = Field::get(q);
  if (f.p() != p) throw ParseError("unsupported field", 0);
  MatFq m(f, n);
  for (std::size_t i = 0; i < n * n; ++i) {
    long v;
    if (!(is >> v)) throw ParseError("missing matrix entry", static_cast<std::size_t>(is.tellg()));
    if (v < 0 || v >= static_cast<long>(q)) throw ParseError("entry out of range", 0);
    m.a_[i] = static_cast<std::uint8_t>(v);
  }
  std::string extra;
  if (is >> extra) throw ParseError("trailing matrix data", 0);
  return m;
}

std::size_t MatFq::hash() const {
  std::size_t h = 0xcbf29ce484222325ULL ^ n_;
  for (auto x : a_) h = (h ^ x) * 0x100000001b3ULL;
  return h;
}

MatFq elementary(const Field& f, std::size_t n, std::size_t y, std::size_t z,
                 std::uint8_t r) {
  if (y == z) throw PreconditionError("elementary matrix needs y != z");
  if (y >= n || z >= n) throw PreconditionError("index out of range");
  MatFq m = MatFq::identity(f, n);
  m.set(y, z, r);
  return m;
}

MatFq elementary(const Field& f, const Alphabet& a, WordView y, WordView z,
                 std::uint8_t r) {
  if (y.size() != z.size()) throw PreconditionError("words of different levels");
  return elementary(f, a.count(y.size()), a.rank(y), a.rank(z), r);
}

MatFq signed_perm(const Field& f, std::size_t n, std::size_t y, std::size_t z) {
  std::uint8_t m1 = f.neg(1);
  return elementary(f, n, y, z, m1) * elementary(f, n, z, y, 1) * elementary(f, n, y, z, m1);
}

MatFq signed_perm(const Field& f, const Alphabet& a, WordView y, WordView z) {
  if (y.size() != z.size()) throw PreconditionError("words of different levels");
  return signed_perm(f, a.count(y.size()), a.rank(y), a.rank(z));
}

std::vector<std::size_t> mat_support(const MatFq& m) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    bool touched = m.at(i, i) != 1;
    for (std::size_t j = 0; j < m.dim() && !touched; ++j)
      touched = j != i && (m.at(i, j) || m.at(j, i));
    if (touched) s.push_back(i);
  }
  return s;
}

std::optional<std::uint8_t> is_scalar(const MatFq& m) {
  if (m.dim() == 0) return std::uint8_t{1};
  std::uint8_t l = m.at(0, 0);
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j)
      if (m.at(i, j) != (i == j ? l : 0)) return std::nullopt;
  return l;
}

MatFq normalize_scalar(const MatFq& m) {
  const Field& f = m.field();
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j)
      if (m.at(i, j)) {
        std::uint8_t c = f.inv(m.at(i, j));
        MatFq r = m;
        for (std::size_t a = 0; a < m.dim(); ++a)
          for (std::size_t b = 0; b < m.dim(); ++b) r.set(a, b, f.mul(c, m.at(a, b)));
        return r;
      }
  return m;
}

bool equal_mod_scalars(const MatFq& a, const MatFq& b) {
  return normalize_scalar(a) == normalize_scalar(b);
}

MatFq commutator(const MatFq& g, const MatFq& h) {
  return g * h * g.inverse() * h.inverse();
}

MatFq conjugate(const MatFq& g, const MatFq& h) { return h.inverse() * g * h; }

MatFq direct_sum(const MatFq& a, const MatFq& b) {
  if (&a.field() != &b.field()) throw PreconditionError("field mismatch");
  MatFq r(a.field(), a.dim() + b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) r.set(i, j, a.at(i, j));
  for (std::size_t i = 0; i < b.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) r.set(a.dim() + i, a.dim() + j, b.at(i, j));
  return r;
}

std::optional<SignedPermData> as_signed_perm(const MatFq& m) {
  const Field& f = m.field();
  SignedPermData d;
  d.target.assign(m.dim(), 0);
  d.sign.assign(m.dim(), 0);
  std::vector<char> hit(m.dim(), 0);
  for (std::size_t y = 0; y < m.dim(); ++y) {
    std::size_t nz = 0;
    for (std::size_t i = 0; i < m.dim(); ++i) {
      std::uint8_t v = m.at(i, y);
      if (!v) continue;
      if (++nz > 1 || (v != 1 && v != f.neg(1))) return std::nullopt;
      d.target[y] = i;
      d.sign[y] = v;
    }
    if (nz != 1 || hit[d.target[y]]) return std::nullopt;
    hit[d.target[y]] = 1;
  }
  return d;
}

namespace {

using Mat2 = std::array<std::uint8_t, 4>;  // row-major 2x2

Mat2 mul2(const Field& f, const Mat2& a, const Mat2& b) {
  return {f.add(f.mul(a[0], b[0]), f.mul(a[1], b[2])), f.add(f.mul(a[0], b[1]), f.mul(a[1], b[3])),
          f.add(f.mul(a[2], b[0]), f.mul(a[3], b[2])), f.add(f.mul(a[2], b[1]), f.mul(a[3], b[3]))};
}

std::uint8_t det2(const Field& f, const Mat2& a) {
  return f.sub(f.mul(a[0], a[3]), f.mul(a[1], a[2]));
}

Mat2 inv2(const Field& f, const Mat2& a) {
  std::uint8_t di = f.inv(det2(f, a));
  return {f.mul(di, a[3]), f.mul(di, f.neg(a[1])), f.mul(di, f.neg(a[2])), f.mul(di, a[0])};
}

bool scalar_multiple2(const Field& f, const Mat2& x, const Mat2& a) {
  for (unsigned mu = 0; mu < f.q(); ++mu) {
    bool eq = true;
    for (int k = 0; k < 4 && eq; ++k) eq = x[k] == f.mul(static_cast<std::uint8_t>(mu), a[k]);
    if (eq) return true;
  }
  return false;
}

MatFq embed(const MatFq& alpha, std::size_t u1, std::size_t u2, const Mat2& t) {
  MatFq tau = MatFq::identity(alpha.field(), alpha.dim());
  tau.set(u1, u1, t[0]);
  tau.set(u1, u2, t[1]);
  tau.set(u2, u1, t[2]);
  tau.set(u2, u2, t[3]);
  return tau;
}

bool works(const MatFq& alpha, const MatFq& tau) {
  return !is_scalar(commutator(alpha, tau)).has_value();
}

}  // namespace

NonCommutingTau find_noncommuting_tau(const MatFq& alpha,
                                      const std::vector<std::size_t>& u,
                                      const std::vector<std::size_t>& w) {
  const Field& f = alpha.field();
  std::size_t n = alpha.dim();
  std::vector<char> in_u(n, 0), seen(n, 0);
  for (auto i : u) {
    if (i >= n || seen[i]) throw PreconditionError("U, W do not partition the index set");
    seen[i] = in_u[i] = 1;
  }
  for (auto i : w) {
    if (i >= n || seen[i]) throw PreconditionError("U, W do not partition the index set");
    seen[i] = 1;
  }
  if (u.size() + w.size() != n) throw PreconditionError("U, W do not partition the index set");
  if (u.size() < 2) throw PreconditionError("U needs at least two elements");

  // Reduce to a two-dimensional U' = span(e_u1, e_u2) on which alpha is
  // still not a scalar: either some e_i is not an eigenvector, or two
  // eigenvalues differ.
  std::optional<std::size_t> mover;
  for (auto i : u) {
    for (std::size_t j = 0; j < n && !mover; ++j)
      if (j != i && alpha.at(j, i)) mover = i;
    if (mover) break;
  }
  std::size_t u1, u2;
  if (mover) {
    u1 = *mover;
    u2 = u[0] == u1 ? u[1] : u[0];
  } else {
    std::optional<std::pair<std::size_t, std::size_t>> pair;
    for (auto i : u)
      if (alpha.at(i, i) != alpha.at(u[0], u[0])) {
        pair = {u[0], i};
        break;
      }
    if (!pair) throw PreconditionError("alpha acts as a scalar on U");
    u1 = pair->first;
    u2 = pair->second;
  }
  if (u1 > u2) std::swap(u1, u2);

  Mat2 a1{alpha.at(u1, u1), alpha.at(u1, u2), alpha.at(u2, u1), alpha.at(u2, u2)};
  const std::uint8_t m1 = f.neg(1);
  const Mat2 rot{0, m1, 1, 0};
  NonCommutingTau out;
  out.u1 = u1;
  out.u2 = u2;
  bool a1_scalar = a1[1] == 0 && a1[2] == 0 && a1[0] == a1[3];
  std::optional<Mat2> t1;
  if (!a1_scalar) {
    out.branch = "A1-nonscalar";
    for (const Mat2& cand : {Mat2{1, 1, 0, 1}, Mat2{1, 0, 1, 1}, rot}) {
      if (!scalar_multiple2(f, mul2(f, inv2(f, cand), mul2(f, a1, cand)), a1)) {
        t1 = cand;
        break;
      }
    }
  } else {
    // C: rows off U', columns (u1, u2). Its rank decides the branch.
    std::vector<std::pair<std::uint8_t, std::uint8_t>> c;
    for (std::size_t j = 0; j < n; ++j)
      if (j != u1 && j != u2 && (alpha.at(j, u1) || alpha.at(j, u2)))
        c.emplace_back(alpha.at(j, u1), alpha.at(j, u2));
    bool rank2 = false;
    for (std::size_t i = 0; i < c.size() && !rank2; ++i)
      for (std::size_t j = i + 1; j < c.size() && !rank2; ++j)
        rank2 = f.sub(f.mul(c[i].first, c[j].second), f.mul(c[i].second, c[j].first)) != 0;
    if (rank2) {
      out.branch = "C-rank-2";
      t1 = rot;
    } else {
      out.branch = "C-rank-1";
      // Kernel vector y of the rows of C, and x outside span(y).
      auto [c1, c2] = c.front();
      Mat2 basis;  // columns x, y
      std::uint8_t y1 = c2, y2 = f.neg(c1);
      std::uint8_t x1 = 1, x2 = 0;
      if (f.sub(f.mul(x1, y2), f.mul(x2, y1)) == 0) {
        x1 = 0;
        x2 = 1;
      }
      basis = {x1, y1, x2, y2};
      Mat2 image{y1, f.neg(x1), y2, f.neg(x2)};  // columns T1 x = y, T1 y = -x
      t1 = mul2(f, image, inv2(f, basis));
    }
  }
  if (t1) {
    out.tau = embed(alpha, u1, u2, *t1);
    if (works(alpha, out.tau)) return out;
  }
  // Not reached for valid input; kept so that a wrong case analysis shows
  // up as a labeled fallback instead of a wrong answer.
  out.branch += "+fallback";
  for (unsigned a = 0; a < f.q(); ++a)
    for (unsigned b = 0; b < f.q(); ++b)
      for (unsigned c = 0; c < f.q(); ++c)
        for (unsigned d = 0; d < f.q(); ++d) {
          Mat2 t{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
                 static_cast<std::uint8_t>(c), static_cast<std::uint8_t>(d)};
          if (det2(f, t) != 1) continue;
          out.tau = embed(alpha, u1, u2, t);
          if (works(alpha, out.tau)) return out;
        }
  throw std::logic_error("no non-commuting tau found");
}

}  // namespace telescopes
