#ifndef TELESCOPES_NORMALFORM_HPP
#define TELESCOPES_NORMALFORM_HPP

#include <optional>
#include <string>
#include <vector>

#include "telescopes/instances.hpp"
#include "telescopes/telescope.hpp"

namespace telescopes {

// g = f * Delta_{m+1}(delta) * sigma~^[m+1] * Delta_{m+1}(eta), with f the
// product of the one-hot factors F(j, f[j-1]), j <= m. sigma is a line
// family (permutation telescopes) or a matrix on Y(m,0).
struct NormalForm {
  std::size_t m = 0;
  std::vector<LevelElem> f;
  LevelElem delta, eta;
  DirectedElem sigma;
};

// Follows the induction on the word length: atoms are prepended from the
// right end of the word. The permutation version takes Delta, one-hot and
// tilde atoms (raising m when an atom sits above it); the matrix version
// only Delta_1(.) and tilde(1, .). Anything else throws PreconditionError.
NormalForm weak_normal_form(const LazyElement& g);
NormalForm weak_normal_form_sl(const LazyElement& g);
LazyElement reassemble(const ModelPtr& model, const NormalForm& nf);
// Element grammar with F(level, elem) and Tm(m, n, sigma) atoms.
std::string format_normal_form(const ModelPtr& model, const NormalForm& nf);
bool sigma_trivial(const NormalForm& nf);

struct ConsistentPoint {
  std::size_t k = 0;
  Word w;
  std::string branch;      // which case of the case analysis produced w
  std::size_t checked_to = 0;  // consistency verified for levels k+1..checked_to
};

struct Membership {
  bool member = false;
  NormalForm nf;
  std::optional<ConsistentPoint> witness;  // set when member is false
};

// Decides g in the direct sum of the level groups.
Membership in_direct_sum(const LazyElement& g);
// Moved consistent point at level k <= m+3. Throws PreconditionError when g
// lies in the direct sum.
ConsistentPoint find_consistent_point(const LazyElement& g);
ConsistentPoint find_consistent_point(const LazyElement& g, const NormalForm& nf);
// pi_j(g)(w y) = pi_|w|(g)(w) y for |w| < j <= upto (0: max_level).
bool is_consistent_at(const LazyElement& g, WordView w, std::size_t upto = 0);

struct SimplicityWitness {
  std::size_t k = 0;
  Word w, v;               // consistent moved point and its image
  LevelElem tau;           // level k+1, supported in {w} x X
  LevelElem atom;          // expected value of the commutator at level k+1
  std::optional<LazyElement> commutator;  // [Delta_{k+1}(tau), g]
  bool verified = false;
  std::size_t verified_to = 0;
};
SimplicityWitness simplicity_witness(const LazyElement& g);
// The commutator equals Delta_{k+1}(atom), atom != 1, at all levels <= upto.
bool check_delta_atom(const LazyElement& c, std::size_t k, const LevelElem& atom, std::size_t upto);

// ---- matrix telescopes

// sigma = 1 and delta * eta scalar.
bool scalar_class(const NormalForm& nf);

struct SlWitness {
  std::size_t level = 0;
  std::string branch;
  MatFq tau;    // level `level`, already conjugated into the frame of g
  MatFq atom;   // pi_level of the commutator
  std::optional<LazyElement> commutator;  // [g, Delta_level(tau)]
  bool verified = false;
};
// Throws PreconditionError("scalar class") when g is a scalar modulo the
// direct sum, CapExceeded when the witness level is above max_level.
SlWitness sl_nonscalar_witness(const LazyElement& g, std::size_t search_budget = 200);

// ---- head word problem and germs

bool head_equal(const LazyElement& g, const LazyElement& h);

struct HeadFactor {
  BElem b;
  LevelElem omega;  // level n; the factor is (b~^[n+1])^Delta_n(omega)
};

// q = Delta_{n+1}(epsilon) * prod_i factor_i * Delta_{n+1}(eta) modulo the
// direct sum, with pairwise distinct base points omega_i^-1(o^n).
struct HeadNormalForm {
  std::size_t n = 0;
  LevelElem epsilon, eta;
  std::vector<HeadFactor> factors;
  std::size_t merges = 0;
};

HeadNormalForm head_normal_form(const LazyElement& g);
LazyElement reassemble_head(const ModelPtr& model, const HeadNormalForm& h);
Word head_base_point(const TelescopeModel& model, const HeadNormalForm& h, std::size_t i);

struct Germ {
  bool trivial = true;
  Word neighbourhood;  // U_v on which the statement is checked
  // conjugated B datum: germ of (b~^[start])^Delta_level(omega)
  std::optional<BElem> b;
  std::size_t start = 0;
  std::size_t omega_level = 0;
  std::optional<LevelElem> omega;
  bool verified = false;
  std::size_t verified_from = 0, verified_to = 0;
};
// xi = prefix o o o ...; throws PreconditionError when q moves xi and
// CapExceeded when the needed level exceeds max_level.
Germ germ_at(const LazyElement& q, const Word& prefix);

}  // namespace telescopes

#endif
