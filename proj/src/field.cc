#include "telescopes/field.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "telescopes/common.hpp"

namespace telescopes {

namespace {

struct Shape {
  unsigned p, e;
  std::vector<unsigned> modulus;  // low-degree coefficients of the monic irreducible
};

Shape shape_of(unsigned q) {
  switch (q) {
    case 2: return {2, 1, {}};
    case 3: return {3, 1, {}};
    case 5: return {5, 1, {}};
    case 7: return {7, 1, {}};
    case 4: return {2, 2, {1, 1}};     // x^2 = x + 1
    case 8: return {2, 3, {1, 1, 0}};  // x^3 = x + 1
    case 9: return {3, 2, {2, 0}};     // x^2 = -1
    default: throw PreconditionError("unsupported field size " + std::to_string(q));
  }
}

}  // namespace

bool Field::supported(unsigned q) {
  return q == 2 || q == 3 || q == 4 || q == 5 || q == 7 || q == 8 || q == 9;
}

const Field& Field::get(unsigned q) {
  static std::mutex mu;
  static std::map<unsigned, std::unique_ptr<Field>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(q);
  if (it == cache.end()) it = cache.emplace(q, std::unique_ptr<Field>(new Field(q))).first;
  return *it->second;
}

Field::Field(unsigned q) : q_(q) {
  Shape s = shape_of(q);
  p_ = s.p;
  e_ = s.e;
  auto digits = [&](unsigned a) {
    std::vector<unsigned> d(e_);
    for (unsigned k = 0; k < e_; ++k, a /= p_) d[k] = a % p_;
    return d;
  };
  auto encode = [&](const std::vector<unsigned>& d) {
    unsigned a = 0;
    for (unsigned k = e_; k-- > 0;) a = a * p_ + d[k];
    return static_cast<std::uint8_t>(a);
  };
  add_.resize(q * q);
  mul_.resize(q * q);
  neg_.resize(q);
  inv_.assign(q, 0);
  for (unsigned a = 0; a < q; ++a) {
    auto da = digits(a);
    std::vector<unsigned> n(e_);
    for (unsigned k = 0; k < e_; ++k) n[k] = (p_ - da[k]) % p_;
    neg_[a] = encode(n);
    for (unsigned b = 0; b < q; ++b) {
      auto db = digits(b);
      std::vector<unsigned> sum(e_);
      for (unsigned k = 0; k < e_; ++k) sum[k] = (da[k] + db[k]) % p_;
      add_[a * q + b] = encode(sum);
      // Schoolbook product, then reduce x^k for k >= e with the modulus.
      std::vector<unsigned> prod(2 * e_, 0);
      for (unsigned i = 0; i < e_; ++i)
        for (unsigned j = 0; j < e_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
      for (unsigned k = 2 * e_ - 1; k >= e_ && k > 0; --k) {
        unsigned c = prod[k];
        if (!c) continue;
        prod[k] = 0;
        for (unsigned j = 0; j < e_; ++j)
          prod[k - e_ + j] = (prod[k - e_ + j] + c * s.modulus[j]) % p_;
      }
      prod.resize(e_);
      mul_[a * q + b] = encode(prod);
    }
  }
  for (unsigned a = 1; a < q; ++a)
    for (unsigned b = 1; b < q; ++b)
      if (mul_[a * q + b] == 1) inv_[a] = static_cast<std::uint8_t>(b);
  for (unsigned a = 1; a < q; ++a)
    if (!inv_[a]) throw std::logic_error("field table is not a field");
  mul_rows_.resize(q);
  for (unsigned a = 0; a < q; ++a) {
    mul_rows_[a].fill(0);
    for (unsigned b = 0; b < q; ++b) mul_rows_[a][b] = mul_[a * q + b];
  }
  if (p_ == 2) mode_ = kernels::GfAdd::xor_bits;
  else if (e_ == 1) mode_ = kernels::GfAdd::mod_prime;
  else mode_ = kernels::GfAdd::table;
}

std::string Field::name() const { return std::to_string(p_) + "^" + std::to_string(e_); }

std::uint8_t Field::inv(std::uint8_t a) const {
  if (a == 0 || a >= q_) throw PreconditionError("inverse of zero");
  return inv_[a];
}

std::uint8_t Field::from_int(long v) const {
  long r = v % static_cast<long>(p_);
  if (r < 0) r += p_;
  return static_cast<std::uint8_t>(r);
}

std::vector<std::uint8_t> Field::prime_basis() const {
  std::vector<std::uint8_t> b;
  unsigned x = 1;
  for (unsigned k = 0; k < e_; ++k, x *= p_) b.push_back(static_cast<std::uint8_t>(x));
  return b;
}

}  // namespace telescopes
