#include "telescopes/rng.hpp"

#include "telescopes/common.hpp"

namespace telescopes {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix(seed)) {}

Rng Rng::split(std::string_view label) const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return Rng(splitmix(seed_ ^ splitmix(h)));
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw PreconditionError("Rng::below: empty range");
  // Rejection sampling keeps the draw unbiased and independent of the
  // standard library's distribution implementation.
  std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  for (;;) {
    std::uint64_t x = engine_();
    if (x < limit) return x % n;
  }
}

BigInt factorial(unsigned n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

}  // namespace telescopes
