#ifndef TELESCOPES_PERMGROUP_HPP
#define TELESCOPES_PERMGROUP_HPP

#include <cstdint>
#include <vector>

#include "telescopes/common.hpp"
#include "telescopes/perm.hpp"
#include "telescopes/rng.hpp"

namespace telescopes {

struct BsgsOptions {
  std::uint64_t seed = 1;
  std::uint32_t degree_cap = 30000;
  // Random phase ends after this many consecutive random elements sift to
  // the identity; a deterministic Schreier-generator pass then completes
  // the structure.
  std::size_t sift_streak = 48;
};

// Permutation group stored as a base with strong generators and explicit
// inverse transversals. Orders are exact.
//
// Construction is randomized Schreier-Sims seeded from BsgsOptions::seed.
// The product over generator orbits O of |Alt(O)| or |Sym(O)| bounds the
// order from above, and the computed order never exceeds the true order,
// so reaching the bound ends the run with an exact answer. Otherwise every
// Schreier generator is sifted before returning.
class PermGroup {
 public:
  PermGroup() = default;
  static PermGroup build(std::uint32_t degree, const std::vector<Perm>& gens,
                         const BsgsOptions& opts = {});

  std::uint32_t degree() const { return degree_; }
  const std::vector<Perm>& generators() const { return gens_; }
  std::vector<std::uint32_t> base() const;
  const std::vector<Perm>& strong_generators() const { return strong_; }
  std::vector<std::size_t> fundamental_orbit_sizes() const;
  BigInt order() const;
  // Upper bound from the orbit structure of the generators.
  const BigInt& order_bound() const { return bound_; }

  bool contains(const Perm& g) const;
  // Adds g as a generator. Returns false when g was already a member.
  bool extend(const Perm& g);
  // As extend, but membership is tested against the chain built so far and
  // the chain is left incomplete; complete() must follow before any query.
  bool extend_deferred(const Perm& g);
  void complete();

  // Random subproduct of the strong generators.
  Perm random_element(Rng& rng) const;
  std::vector<std::uint32_t> orbit(std::uint32_t point) const;
  bool is_transitive() const;

 private:
  struct Level {
    std::uint32_t point = 0;
    std::vector<std::uint32_t> gens;        // indices into strong_
    std::vector<std::int32_t> where;        // point -> index in orbit, or -1
    std::vector<std::uint32_t> orbit;
    std::vector<Perm> u_inv;                // u_inv[k](orbit[k]) = point
  };

  // Returns the residue and the level at which sifting stopped.
  Perm sift(Perm g, std::size_t from, std::size_t* stop) const;
  void add_strong(const Perm& h, std::size_t level);
  void grow_orbit(std::size_t level, std::size_t new_gen);
  void recompute_bound();
  bool schreier_pass();

  std::uint32_t degree_ = 0;
  std::vector<Perm> gens_;
  std::vector<Perm> strong_;
  std::vector<Perm> strong_inv_;
  std::vector<Level> levels_;
  BigInt bound_ = 1;
  BsgsOptions opts_;
  Rng rng_;
};

// Pre: non-empty list of equal-degree permutations.
PermGroup bsgs(const std::vector<Perm>& gens, const BsgsOptions& opts = {});

// Smallest subgroup containing h_gens and normalized by <g_gens>.
PermGroup normal_closure(const std::vector<Perm>& h_gens,
                         const std::vector<Perm>& g_gens,
                         const BsgsOptions& opts = {});

struct JordanOptions {
  std::uint64_t seed = 1;
  std::size_t words = 200;
  std::size_t max_length = 8;
};

struct JordanResult {
  bool certified = false;
  bool transitive = false;
  std::uint32_t prime = 0;       // length of the certified p-cycle
  std::size_t word_index = 0;    // which tried word produced it
  std::vector<std::uint32_t> word;  // generator indices (inverse = index + count)
};

// Certifies <gens> = Alt(n) via transitivity plus an element with a single
// cycle of prime length p, n/2 < p <= n-3, and no other cycle length divisible
// by p (a suitable power is then a p-cycle). A negative answer is
// inconclusive. Throws PreconditionError on an odd generator.
JordanResult jordan_alt_test_detail(const std::vector<Perm>& gens,
                                    const JordanOptions& opts = {});
bool jordan_alt_test(const std::vector<Perm>& gens, const JordanOptions& opts = {});

// Orbit count on ordered k-tuples of distinct points equals 1.
bool is_k_transitive(const PermGroup& g, unsigned k);

}  // namespace telescopes

#endif
