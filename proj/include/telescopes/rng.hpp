#ifndef TELESCOPES_RNG_HPP
#define TELESCOPES_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace telescopes {

// Seeded generator with labeled substreams. split("x") is a pure function of
// (seed, "x"), so subroutines draw from independent, reproducible streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 1);

  std::uint64_t seed() const { return seed_; }
  Rng split(std::string_view label) const;

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace telescopes

#endif
