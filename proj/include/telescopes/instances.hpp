#ifndef TELESCOPES_INSTANCES_HPP
#define TELESCOPES_INSTANCES_HPP

#include <memory>
#include <string>
#include <vector>

#include "telescopes/field.hpp"
#include "telescopes/telescope.hpp"

namespace telescopes {

// Finite group given by permutation generators, with its elements listed in
// a fixed order (sorted by image array, so the identity comes first).
class FiniteGroup {
 public:
  static FiniteGroup from_generators(std::string name, const std::vector<Perm>& gens,
                                     std::size_t cap = 5000);
  // "alt5", "alt6" or "sl2_5".
  static FiniteGroup builtin(std::string_view name);
  // One permutation per line in cycle notation over points 1..n, e.g.
  // "(1 2 3)(4 5)". The degree is the largest point mentioned.
  static FiniteGroup from_file(const std::string& path);

  const std::string& name() const { return name_; }
  std::size_t size() const { return elements_.size(); }
  const Perm& element(std::size_t i) const { return elements_[i]; }
  std::size_t mul(std::size_t g, std::size_t h) const { return mul_[g * size() + h]; }
  std::size_t inv(std::size_t g) const { return inv_[g]; }
  const std::vector<std::size_t>& generators() const { return gens_; }
  std::size_t index_of(const Perm& p) const;
  // The subgroup generated by all commutators is the whole group.
  bool is_perfect() const;

 private:
  std::string name_;
  std::vector<Perm> elements_;
  std::vector<std::uint32_t> mul_;
  std::vector<std::uint32_t> inv_;
  std::vector<std::size_t> gens_;
};

// Data of a permutation telescope whose B-points are pairs (a, c) placed
// behind a run of `prefix` letters: phi_k(b) acts on prefix^(k-2) a c.
struct SpinalConfig {
  std::string id;
  std::string kind;
  Alphabet alphabet;
  Letter spine = 0;    // o: direction of the tree, used by alpha and actions
  Letter prefix = 0;   // run letter in phi_k; equals spine except in controls
  Letter y = 0, z = 0;  // alpha_i = (o^(i-1) y, o^(i-1) z, o^i)
  std::vector<std::pair<Letter, Letter>> points;
  std::vector<Perm> b_gens;
  std::function<Perm(Rng&)> b_random;
  std::vector<Letter> epsilon_letters;  // letterwise delta, empty if none
  std::size_t max_level = 6;
};

class SpinalPermModel : public TelescopeModel {
 public:
  explicit SpinalPermModel(SpinalConfig cfg);

  std::string id() const override { return cfg_.id; }
  std::string kind() const override { return cfg_.kind; }
  Engine engine() const override { return Engine::permutation; }
  std::size_t max_level() const override { return cfg_.max_level; }
  const Alphabet& alphabet() const override { return cfg_.alphabet; }

  LevelElem identity(std::size_t level) const override;
  LevelElem iota(const LevelElem& x, std::size_t from, std::size_t to) const override;
  LevelElem phi(std::size_t level, const BElem& b) const override;
  LevelElem alpha(std::size_t level) const override;
  std::vector<LevelElem> level_generators(std::size_t level) const override;
  LevelElem random_level_element(std::size_t level, Rng& rng) const override;
  BigInt level_order(std::size_t level) const override;

  BElem b_identity() const override;
  std::vector<BElem> b_generators() const override;
  BElem b_random(Rng& rng) const override;

  LevelElem tilde_level(std::size_t n, const BElem& b, std::size_t level) const override;
  LevelElem phi_directed(std::size_t m, std::size_t k, const DirectedElem& s) const override;
  LevelElem directed_level(std::size_t m, std::size_t n, const DirectedElem& s,
                           std::size_t level) const override;
  LevelElem epsilon_level(std::size_t level) const override;

  std::optional<CylinderUnion> b_support(std::size_t k, std::size_t m) const override;
  std::optional<PrefixMap> alpha_word_map(std::size_t level) const override;

  std::string format_b(const BElem& b) const override;
  BElem parse_b(std::string_view text) const override;
  std::vector<Word> b_point_words() const override;

  const SpinalConfig& config() const { return cfg_; }
  std::size_t point_count() const { return cfg_.points.size(); }
  // Index of the B-point (a, c), or npos.
  std::size_t point_index(Letter a, Letter c) const;
  bool has_epsilon() const { return !cfg_.epsilon_letters.empty(); }

 private:
  // Moved rules of phi^(m)_k for one line v.
  void line_rules(WordView v, std::size_t k, const Perm& p,
                  std::vector<PrefixMap::Rule>& out) const;
  bool disjoint_fast_path() const;

  SpinalConfig cfg_;
  std::vector<std::size_t> point_lookup_;  // a * |X| + c -> index + 1
  std::uint32_t c_range_ = 0;
};

// E_d(F_q): Omega_n = SL over the words of length n, B = SL over {x1,x2} x X.
class LinearModel : public TelescopeModel {
 public:
  LinearModel(std::uint32_t d, unsigned q, std::size_t max_level);

  std::string id() const override;
  std::string kind() const override { return "el"; }
  Engine engine() const override { return Engine::matrix; }
  std::size_t max_level() const override { return max_level_; }
  const Alphabet& alphabet() const override { return alpha_; }

  LevelElem identity(std::size_t level) const override;
  LevelElem iota(const LevelElem& x, std::size_t from, std::size_t to) const override;
  LevelElem phi(std::size_t level, const BElem& b) const override;
  LevelElem alpha(std::size_t level) const override;
  std::vector<LevelElem> level_generators(std::size_t level) const override;
  LevelElem random_level_element(std::size_t level, Rng& rng) const override;
  BigInt level_order(std::size_t level) const override;

  BElem b_identity() const override;
  std::vector<BElem> b_generators() const override;
  BElem b_random(Rng& rng) const override;

  LevelElem tilde_level(std::size_t n, const BElem& b, std::size_t level) const override;
  LevelElem phi_directed(std::size_t m, std::size_t k, const DirectedElem& s) const override;
  LevelElem directed_level(std::size_t m, std::size_t n, const DirectedElem& s,
                           std::size_t level) const override;

  std::optional<CylinderUnion> b_support(std::size_t k, std::size_t m) const override;
  std::optional<PrefixMap> alpha_word_map(std::size_t level) const override;
  std::vector<LevelElem> monomial_generators(std::size_t level) const override;

  std::string format_b(const BElem& b) const override;
  BElem parse_b(std::string_view text) const override;
  std::vector<Word> b_point_words() const override;

  const Field& field() const { return *field_; }
  std::uint32_t d() const { return d_; }
  std::size_t dim(std::size_t level) const;
  // Random product of elementary matrices of the given size.
  MatFq random_sl(std::size_t n, Rng& rng) const;

 private:
  // Adds the block of s placed on Y(m, k-m-2), lifted to `level`.
  void place_block(MatFq& out, std::size_t m, std::size_t k, const MatFq& s,
                   std::size_t level) const;

  std::uint32_t d_;
  const Field* field_;
  std::size_t max_level_;
  Alphabet alpha_;
};

// Omega_i / M_i for the scalar subgroups of a matrix telescope.
class QuotientModel : public TelescopeModel {
 public:
  explicit QuotientModel(std::shared_ptr<const TelescopeModel> base);

  std::string id() const override;
  std::string kind() const override { return "psl"; }
  Engine engine() const override { return Engine::matrix_mod_scalars; }
  std::size_t max_level() const override { return base_->max_level(); }
  std::size_t kappa() const override { return base_->kappa(); }
  const Alphabet& alphabet() const override { return base_->alphabet(); }

  LevelElem identity(std::size_t l) const override { return base_->identity(l); }
  LevelElem iota(const LevelElem& x, std::size_t f, std::size_t t) const override {
    return base_->iota(x, f, t);
  }
  LevelElem phi(std::size_t l, const BElem& b) const override { return base_->phi(l, b); }
  LevelElem alpha(std::size_t l) const override { return base_->alpha(l); }
  std::vector<LevelElem> level_generators(std::size_t l) const override {
    return base_->level_generators(l);
  }
  LevelElem random_level_element(std::size_t l, Rng& rng) const override {
    return base_->random_level_element(l, rng);
  }
  BigInt level_order(std::size_t level) const override;

  BElem b_identity() const override { return base_->b_identity(); }
  std::vector<BElem> b_generators() const override { return base_->b_generators(); }
  BElem b_random(Rng& rng) const override { return base_->b_random(rng); }

  bool equal(const LevelElem& a, const LevelElem& b) const override;

  LevelElem tilde_level(std::size_t n, const BElem& b, std::size_t l) const override {
    return base_->tilde_level(n, b, l);
  }
  LevelElem phi_directed(std::size_t m, std::size_t k, const DirectedElem& s) const override {
    return base_->phi_directed(m, k, s);
  }
  LevelElem directed_level(std::size_t m, std::size_t n, const DirectedElem& s,
                           std::size_t l) const override {
    return base_->directed_level(m, n, s, l);
  }
  std::optional<CylinderUnion> b_support(std::size_t k, std::size_t m) const override {
    return base_->b_support(k, m);
  }
  std::optional<PrefixMap> alpha_word_map(std::size_t l) const override {
    return base_->alpha_word_map(l);
  }
  std::vector<LevelElem> monomial_generators(std::size_t l) const override {
    return base_->monomial_generators(l);
  }
  std::string format_level(const LevelElem& x, std::size_t l) const override;
  LevelElem parse_level(std::string_view t, std::size_t l) const override {
    return base_->parse_level(t, l);
  }
  std::string format_b(const BElem& b) const override { return base_->format_b(b); }
  BElem parse_b(std::string_view t) const override { return base_->parse_b(t); }
  std::vector<Word> b_point_words() const override { return base_->b_point_words(); }

  const TelescopeModel& base() const { return *base_; }

 private:
  std::shared_ptr<const TelescopeModel> base_;
};

// S_{+n}: level i of the result is level i+n of the base.
class ShiftedModel : public TelescopeModel {
 public:
  ShiftedModel(std::shared_ptr<const TelescopeModel> base, std::size_t n);

  std::string id() const override;
  std::string kind() const override { return base_->kind(); }
  Engine engine() const override { return base_->engine(); }
  std::size_t max_level() const override { return base_->max_level() - n_; }
  std::size_t kappa() const override { return base_->kappa(); }
  const Alphabet& alphabet() const override { return base_->alphabet(); }
  std::size_t word_length(std::size_t l) const override { return base_->word_length(l + n_); }

  LevelElem identity(std::size_t l) const override { return base_->identity(l + n_); }
  LevelElem iota(const LevelElem& x, std::size_t f, std::size_t t) const override {
    return base_->iota(x, f + n_, t + n_);
  }
  LevelElem phi(std::size_t l, const BElem& b) const override { return base_->phi(l + n_, b); }
  LevelElem alpha(std::size_t l) const override { return base_->alpha(l + n_); }
  std::vector<LevelElem> level_generators(std::size_t l) const override {
    return base_->level_generators(l + n_);
  }
  LevelElem random_level_element(std::size_t l, Rng& rng) const override {
    return base_->random_level_element(l + n_, rng);
  }
  BigInt level_order(std::size_t l) const override { return base_->level_order(l + n_); }

  BElem b_identity() const override { return base_->b_identity(); }
  std::vector<BElem> b_generators() const override { return base_->b_generators(); }
  BElem b_random(Rng& rng) const override { return base_->b_random(rng); }
  bool equal(const LevelElem& a, const LevelElem& b) const override { return base_->equal(a, b); }

  LevelElem tilde_level(std::size_t n, const BElem& b, std::size_t l) const override {
    return base_->tilde_level(n + n_, b, l + n_);
  }
  LevelElem epsilon_level(std::size_t l) const override { return base_->epsilon_level(l + n_); }
  std::optional<CylinderUnion> b_support(std::size_t k, std::size_t m) const override {
    return base_->b_support(k + n_, m + n_);
  }
  std::optional<PrefixMap> alpha_word_map(std::size_t l) const override {
    return base_->alpha_word_map(l + n_);
  }
  std::vector<LevelElem> monomial_generators(std::size_t l) const override {
    return base_->monomial_generators(l + n_);
  }
  std::string format_level(const LevelElem& x, std::size_t l) const override {
    return base_->format_level(x, l + n_);
  }
  LevelElem parse_level(std::string_view t, std::size_t l) const override {
    return base_->parse_level(t, l + n_);
  }
  std::string format_b(const BElem& b) const override { return base_->format_b(b); }
  BElem parse_b(std::string_view t) const override { return base_->parse_b(t); }
  std::vector<Word> b_point_words() const override { return base_->b_point_words(); }

 private:
  std::shared_ptr<const TelescopeModel> base_;
  std::size_t n_;
};

// The non-flexible example: Omega_i = Alt(5) for even i, trivial for odd i,
// trivial transition maps, phi_j the identity on even levels.
class ToyModel : public TelescopeModel {
 public:
  explicit ToyModel(std::size_t max_level);

  std::string id() const override { return "toy-alternating"; }
  std::string kind() const override { return "toy"; }
  Engine engine() const override { return Engine::permutation; }
  std::size_t max_level() const override { return max_level_; }
  const Alphabet& alphabet() const override { return alpha_; }

  LevelElem identity(std::size_t level) const override;
  LevelElem iota(const LevelElem& x, std::size_t from, std::size_t to) const override;
  LevelElem phi(std::size_t level, const BElem& b) const override;
  LevelElem alpha(std::size_t level) const override { return identity(level); }
  std::vector<LevelElem> level_generators(std::size_t level) const override;
  LevelElem random_level_element(std::size_t level, Rng& rng) const override;
  BigInt level_order(std::size_t level) const override;

  BElem b_identity() const override { return Perm(5); }
  std::vector<BElem> b_generators() const override;
  BElem b_random(Rng& rng) const override;

  std::string format_b(const BElem& b) const override;
  BElem parse_b(std::string_view text) const override;

 private:
  std::size_t max_level_;
  Alphabet alpha_;
};

struct AltParams {
  std::uint32_t d = 5;
  std::uint32_t r = 2;
  std::size_t max_level = 12;
};

std::shared_ptr<const SpinalPermModel> build_alt(const AltParams& p);
// Negative control: phi_k(b) sits behind x1^(k-2) instead of x_d^(k-2).
std::shared_ptr<const SpinalPermModel> build_alt_corrupted(const AltParams& p);
std::shared_ptr<const LinearModel> build_el(std::uint32_t d, unsigned q, std::size_t max_level = 4);
// Checks iota(Z_i) in Z_j on the generators of the centres first.
std::shared_ptr<const QuotientModel> quotient_by_scalars(std::shared_ptr<const TelescopeModel> base);
std::shared_ptr<const QuotientModel> build_psl(std::uint32_t d, unsigned q, std::size_t max_level = 4);
ModelPtr shift(ModelPtr base, std::size_t n);

struct EmbedParams {
  FiniteGroup group;
  std::size_t max_level = 4;
};
// H(G) with N_i = 1, X_1 of size 6 and X_i = G; the letters o, alpha, delta,
// epsilon, y, z are the first six letters of every coordinate.
std::shared_ptr<const SpinalPermModel> build_embed(const EmbedParams& p);
std::shared_ptr<const ToyModel> build_toy(std::size_t max_level = 6);

// Letter indices of the embedding telescope.
inline constexpr Letter kEmbedO = 0, kEmbedAlpha = 1, kEmbedDelta = 2, kEmbedEps = 3,
                        kEmbedY = 4, kEmbedZ = 5;

enum class AltSupport { B, alpha, B_conj };
// Support cylinders of the alternating telescope:
//   B(i, j):        {x_d^(i-2)} x {x1..xr} x X^(j+1-i),       j >= i >= 2
//   alpha(i, j):    {x_d^(i-1)} x {x_(d-2), x_(d-1), x_d} x X^(j-i), j >= i
//   B_conj(i,j,k):  {x_d^(i-1) x_(d-1) x_d^(j-2-i)} x {x1..xr} x X^(k+1-j),
//                   k >= j >= i+2
CylinderSet alt_support(std::uint32_t d, std::uint32_t r, AltSupport kind, std::size_t i,
                        std::size_t j, std::size_t k = 0);
// Z(n, m) = {x_d^(n-2) x_t v : t in {1,2}, v in X^(m-n+1)}
CylinderSet el_support_z(std::uint32_t d, std::size_t n, std::size_t m);
// Z^(i)(k, m) = {x_d^(i-1) x_(d-1) x_d^(k-i-2) x_t v}
CylinderSet el_support_zi(std::uint32_t d, std::size_t i, std::size_t k, std::size_t m);

// For each element g of G: tilde(1, (1, g)) in H(G).
std::vector<LazyElement> directed_tree_embedding(
    const std::shared_ptr<const SpinalPermModel>& embed, const FiniteGroup& g);
// B-element (1, g) of H(G).
Perm embed_group_element(const SpinalPermModel& embed, const FiniteGroup& g, std::size_t index);

// Delta_1 of the level-1 generators followed by tilde(1, .) of the B
// generators.
std::vector<LazyElement> default_generators(const ModelPtr& model);

// Uniform random even permutation.
Perm random_even_perm(std::uint32_t n, Rng& rng);

}  // namespace telescopes

#endif
