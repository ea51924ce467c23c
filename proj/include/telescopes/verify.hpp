#ifndef TELESCOPES_VERIFY_HPP
#define TELESCOPES_VERIFY_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "telescopes/instances.hpp"
#include "telescopes/permgroup.hpp"
#include "telescopes/report.hpp"
#include "telescopes/telescope.hpp"

namespace telescopes {

struct VerifyOptions {
  std::uint64_t seed = 1;
  std::uint32_t degree_cap = 30000;
  std::size_t matrix_dim_cap = 256;
  std::size_t exact_level = 4;   // sampled exact evaluation up to here
  std::size_t samples = 2;       // random B elements per sampled check
  std::size_t search_budget = 4000;
};

// [iota_{i,j}(B_i), B_j] = 1 for 2 <= i < j <= L.
VerificationReport check_commutator_axiom(const ModelPtr& model, std::size_t L,
                                          const VerifyOptions& opt = {});
// Conditions F1-F3 for all index combinations with levels <= L.
VerificationReport check_flexibility(const ModelPtr& model, std::size_t L,
                                     const VerifyOptions& opt = {});
// Omega_l is generated by the Omega_{l-1,l}-conjugates of B_l.
VerificationReport check_generation_axiom(const ModelPtr& model, std::size_t ell,
                                          const VerifyOptions& opt = {});

// Order of the group generated by the truncations of gens to levels
// from..to, acting on the disjoint union of the level word sets. Empty when
// the degree is over the cap or the engine is not a permutation engine.
std::optional<BigInt> truncated_order(const std::vector<LazyElement>& gens, std::size_t from,
                                      std::size_t to, const VerifyOptions& opt = {});
BigInt product_of_level_orders(const TelescopeModel& model, std::size_t from, std::size_t to);
VerificationReport check_frame_surjectivity(const ModelPtr& model, std::size_t from,
                                            std::size_t to, const std::vector<LazyElement>& gens,
                                            const VerifyOptions& opt = {});

// Smallest prime p with N/2 < p < 2N/3; 0 when there is none.
std::uint64_t nagura_prime(std::uint64_t N);

// The tilde recursion, the homomorphism b -> tilde^[n](b) and the
// commutator identity producing Delta_{i+1}(phi_{i+1}([h,k])), for
// `pairs` random pairs, every i <= imax, exactly at levels <= L.
VerificationReport check_telescope_identities(const ModelPtr& model, std::size_t L,
                                              std::size_t imax, std::size_t pairs,
                                              const VerifyOptions& opt = {});
// iota maps central scalars to scalars (matrix telescopes).
VerificationReport check_scalar_transport(const ModelPtr& model, std::size_t L);
// Randomized instances of the construction of a tau in SL(U) whose
// commutator with a given alpha is not scalar.
VerificationReport check_linear_noncommute(unsigned q, std::size_t instances,
                                           const VerifyOptions& opt = {});

// ---- two generators

struct TwoGenAlt {
  explicit TwoGenAlt(const ModelPtr& m) : a(m), b(m), c(m) {}
  std::size_t n = 0;
  std::uint64_t p = 0;
  Perm sigma1, sigma2;  // on the words of length n, by rank
  Perm omega;           // on the words of length n-1
  BElem tau1, tau2;
  LazyElement a, b, c;
  JordanResult jordan;
  VerificationReport certificate;
};
// Throws PreconditionError naming the violated constraint when no
// placement exists.
TwoGenAlt build_two_generators_alt(const std::shared_ptr<const SpinalPermModel>& model,
                                   const VerifyOptions& opt = {});
VerificationReport verify_two_generation(const LazyElement& a, const LazyElement& b,
                                         std::size_t from, std::size_t to,
                                         const VerifyOptions& opt = {});

struct TwoGenSl {
  std::size_t n = 0;
  std::uint64_t p = 0;
  MatFq A, B;   // (2,3)-pair of SL_5
  MatFq s, t;   // (2,3)-pair of B = SL_2d
  MatFq U, V;
  LevelElem omega1, omega2;
  std::optional<LazyElement> a, b;
  VerificationReport certificate;  // skipped(search) when no pair was found
};
TwoGenSl build_two_generators_sl(const std::shared_ptr<const LinearModel>& model,
                                 const VerifyOptions& opt = {});

// ---- consistency and the glued frame

struct Ratio {
  BigInt num, den;
  friend bool operator==(const Ratio&, const Ratio&) = default;
};
std::string format_ratio(const Ratio& r);

// Consistent level-i words: pi_j(g) maps w y to pi_i(g)(w) y for every
// i < j <= upto. upto defaults to max_level.
std::vector<char> consistent_points(const LazyElement& g, std::size_t i, std::size_t upto = 0);
Ratio cons_volume(const LazyElement& g, std::size_t i, std::size_t upto = 0);
// Moved level-i words over all level-i words.
Ratio support_volume(const LazyElement& g, std::size_t i);
// Level-i words that are both moved and consistent.
Ratio consistent_moved_volume(const LazyElement& g, std::size_t i, std::size_t upto = 0);
LazyElement epsilon_element(const ModelPtr& model);
// Consistency check depth used for products involving epsilon.
std::size_t epsilon_check_depth(const TelescopeModel& model, std::size_t i);

VerificationReport check_consistency_suite(const ModelPtr& model, std::size_t L,
                                           std::size_t pairs, const VerifyOptions& opt = {});
VerificationReport check_glued_frame(const ModelPtr& model, std::size_t L,
                                     std::size_t invariance_level, std::size_t samples,
                                     const VerifyOptions& opt = {});

// Random word of the given length over Delta_1 and tilde(1, .) atoms and
// their inverses.
LazyElement random_generator_word(const ModelPtr& model, std::size_t length, Rng& rng);

}  // namespace telescopes

#endif
