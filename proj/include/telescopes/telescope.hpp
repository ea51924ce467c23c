#ifndef TELESCOPES_TELESCOPE_HPP
#define TELESCOPES_TELESCOPE_HPP

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "telescopes/alphabet.hpp"
#include "telescopes/matfq.hpp"
#include "telescopes/perm.hpp"
#include "telescopes/prefixmap.hpp"
#include "telescopes/rng.hpp"

namespace telescopes {

enum class Engine { permutation, matrix, matrix_mod_scalars };
std::string engine_name(Engine e);

// Element of a level group Omega_i. Permutation telescopes use PrefixMap,
// matrix telescopes MatFq; Perm is for small hand-made examples.
using LevelElem = std::variant<PrefixMap, MatFq, Perm>;
// Element of B: a permutation of the B-points, or a matrix.
using BElem = std::variant<Perm, MatFq>;

// Element of the carrier of a depth-m directed family. For permutation
// telescopes a line family assigns to each v in X^m a permutation of the
// B-points (absent lines are trivial); for matrix telescopes it is a matrix
// on Y(m,0) = X^m x {x1,x2} x X, indexed (rank(v), a, c).
struct LineFamily {
  std::size_t depth = 0;
  std::map<Word, Perm> lines;
  friend bool operator==(const LineFamily&, const LineFamily&) = default;
};
using DirectedElem = std::variant<LineFamily, MatFq>;

LevelElem level_mul(const LevelElem& a, const LevelElem& b);
LevelElem level_inv(const LevelElem& a);
bool level_exact_equal(const LevelElem& a, const LevelElem& b);
// Explicit permutation of the level's words (PrefixMap or Perm).
Perm level_to_perm(const LevelElem& a);

BElem b_mul(const BElem& a, const BElem& b);
BElem b_inv(const BElem& a);
bool b_is_identity(const BElem& a);

// A B-telescope: level groups Omega_i with transition maps iota_{i,j},
// homomorphisms phi_i: B -> Omega_i (i >= 2) and flexibility witnesses
// alpha_i. Immutable once built.
class TelescopeModel {
 public:
  virtual ~TelescopeModel() = default;

  virtual std::string id() const = 0;
  virtual std::string kind() const = 0;
  virtual Engine engine() const = 0;
  virtual std::size_t max_level() const = 0;
  virtual std::size_t kappa() const { return 2; }
  virtual const Alphabet& alphabet() const = 0;
  // Length of the words indexing level i (differs from i after a shift).
  virtual std::size_t word_length(std::size_t level) const { return level; }

  virtual LevelElem identity(std::size_t level) const = 0;
  virtual LevelElem iota(const LevelElem& x, std::size_t from, std::size_t to) const = 0;
  virtual LevelElem phi(std::size_t level, const BElem& b) const = 0;
  virtual LevelElem alpha(std::size_t level) const = 0;
  virtual std::vector<LevelElem> level_generators(std::size_t level) const = 0;
  virtual LevelElem random_level_element(std::size_t level, Rng& rng) const = 0;
  virtual BigInt level_order(std::size_t level) const = 0;

  virtual BElem b_identity() const = 0;
  virtual std::vector<BElem> b_generators() const = 0;
  virtual BElem b_random(Rng& rng) const = 0;

  // Equality in Omega_i (up to scalars for quotient telescopes).
  virtual bool equal(const LevelElem& a, const LevelElem& b) const {
    return level_exact_equal(a, b);
  }
  bool is_identity(const LevelElem& a, std::size_t level) const {
    return equal(a, identity(level));
  }

  // pi_level of tilde^[n](b); the default multiplies the factors.
  virtual LevelElem tilde_level(std::size_t n, const BElem& b, std::size_t level) const;
  // phi^(m)_k: carrier of the depth-m family -> Omega_k, k >= m+2.
  virtual LevelElem phi_directed(std::size_t m, std::size_t k, const DirectedElem& s) const;
  virtual LevelElem directed_level(std::size_t m, std::size_t n, const DirectedElem& s,
                                   std::size_t level) const;
  // The letterwise element epsilon of the counterexample construction.
  virtual LevelElem epsilon_level(std::size_t level) const;

  // Support of B_{k,m} as cylinders at level m; absent when the model has
  // no cylinder description.
  virtual std::optional<CylinderUnion> b_support(std::size_t k, std::size_t m) const {
    (void)k, (void)m;
    return std::nullopt;
  }
  // Permutation of the words underlying alpha_i (for matrices: the signed
  // permutation forgetting signs).
  virtual std::optional<PrefixMap> alpha_word_map(std::size_t level) const {
    (void)level;
    return std::nullopt;
  }
  // Monomial generators of Omega_i for transvection closures.
  virtual std::vector<LevelElem> monomial_generators(std::size_t level) const {
    (void)level;
    return {};
  }

  // Text forms. Level elements: cycle notation over words (or a matrix in
  // brackets); names "id", "a" (alpha_i), "g<k>" (k-th level generator).
  // B elements: "id", "b", "b<k>", cycle notation over B-point words.
  virtual std::string format_level(const LevelElem& x, std::size_t level) const;
  virtual LevelElem parse_level(std::string_view text, std::size_t level) const;
  virtual std::string format_b(const BElem& b) const = 0;
  virtual BElem parse_b(std::string_view text) const = 0;
  virtual std::string format_directed(const DirectedElem& s) const;

  // B-points as words of length 2 (permutation telescopes).
  virtual std::vector<Word> b_point_words() const { return {}; }
};

using ModelPtr = std::shared_ptr<const TelescopeModel>;

// Lazy element of the product of all Omega_i: a formal word in atoms, each
// evaluated at any level on demand.
enum class AtomKind { delta, tilde, one_hot, directed, epsilon };

class AtomData {
 public:
  AtomKind kind;
  std::size_t level = 0;  // delta/one_hot: i; tilde/directed: start n
  std::size_t depth = 0;  // directed: m
  std::variant<std::monostate, LevelElem, BElem, DirectedElem> payload;

  AtomData(AtomKind k, std::size_t lvl, std::size_t dep,
           std::variant<std::monostate, LevelElem, BElem, DirectedElem> p)
      : kind(k), level(lvl), depth(dep), payload(std::move(p)) {}

  // pi_n of the atom, memoized; inverse selects the inverse element.
  LevelElem value(const TelescopeModel& m, std::size_t n, bool inverse) const;
  bool same(const AtomData& o) const;

 private:
  mutable std::mutex mu_;
  mutable std::map<std::pair<std::size_t, bool>, LevelElem> cache_;
};

struct Atom {
  std::shared_ptr<const AtomData> data;
  bool inverse = false;
};

class LazyElement {
 public:
  explicit LazyElement(ModelPtr model);  // identity
  static LazyElement delta(ModelPtr model, std::size_t i, LevelElem omega);
  static LazyElement tilde(ModelPtr model, std::size_t n, BElem b);
  static LazyElement one_hot(ModelPtr model, std::size_t i, LevelElem omega);
  static LazyElement directed(ModelPtr model, std::size_t m, std::size_t n, DirectedElem s);
  static LazyElement epsilon(ModelPtr model);

  const TelescopeModel& model() const { return *model_; }
  const ModelPtr& model_ptr() const { return model_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t length() const { return atoms_.size(); }

  // Concatenation with free cancellation of adjacent inverse atoms.
  LazyElement operator*(const LazyElement& o) const;
  LazyElement inverse() const;

  // pi_n; memoized per element. Throws PreconditionError above max_level.
  LevelElem project(std::size_t n) const;
  bool trivial_at(std::size_t n) const;

 private:
  struct Cache {
    std::mutex mu;
    std::map<std::size_t, LevelElem> levels;
  };
  ModelPtr model_;
  std::vector<Atom> atoms_;
  std::shared_ptr<Cache> cache_;
};

// pi_j(g) = pi_j(h) for all j <= n.
bool equal_up_to(const LazyElement& g, const LazyElement& h, std::size_t n);
bool equal_at(const LazyElement& g, const LazyElement& h, std::size_t n);
LazyElement commutator(const LazyElement& g, const LazyElement& h);  // g h g^-1 h^-1
LazyElement conjugate(const LazyElement& g, const LazyElement& h);   // h^-1 g h

// Grammar:
//   expr   := factor { "*" factor }
//   factor := atom [ "^-1" ]
//   atom   := "D(" level "," level-elem ")" | "T(" level "," b-elem ")"
//           | "F(" level "," level-elem ")" | "E" | "1" | "(" expr ")"
// Throws ParseError with a byte position.
LazyElement parse_element(const ModelPtr& model, std::string_view text);
// Inverse of parse_element; directed atoms print as Tm(m,n,sigma).
std::string format_element(const LazyElement& g);

}  // namespace telescopes

#endif
