#ifndef TELESCOPES_ACTION_HPP
#define TELESCOPES_ACTION_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "telescopes/report.hpp"
#include "telescopes/telescope.hpp"
#include "telescopes/verify.hpp"

namespace telescopes {

// Point of X_oo = lim X_i, where X_i -> X_(i+1) appends the spine letter o.
// Stored canonically: no trailing o.
struct LimitPoint {
  std::size_t level = 0;
  Word w;
  friend bool operator==(const LimitPoint&, const LimitPoint&) = default;
};

Letter spine_letter(const TelescopeModel& model);
LimitPoint canonical(const TelescopeModel& model, WordView w);
// Representative of x at level j >= x.level.
Word at_level(const TelescopeModel& model, const LimitPoint& x, std::size_t j);
// "w@i"; the word uses the alphabet's letter names.
std::string format_limit(const TelescopeModel& model, const LimitPoint& x);
LimitPoint parse_limit(const TelescopeModel& model, std::string_view text);

// Level from which pi_t(g) acts on [x] independently of t: per Delta_j atom
// max(i, j), per tilde or directed atom max(i, start) + kappa, per one-hot
// atom j + 1, composed from the right end of the word.
std::size_t stabilization_level(const LazyElement& g, std::size_t i);

struct LimitAction {
  LimitPoint point;
  std::size_t t = 0;
  std::size_t checked_to = 0;  // images agree at t..checked_to
};
// Throws CapExceeded ("level budget exceeded") when t > max_level, and
// std::logic_error when the images at t+1, t+2 disagree.
LimitAction act_limit(const LazyElement& g, const LimitPoint& x);

struct CantorPoint {
  Word prefix;
  bool eventually_o = true;  // tail o o o ..., otherwise unspecified
};
std::string format_cantor(const TelescopeModel& model, const CantorPoint& p);
CantorPoint parse_cantor(const TelescopeModel& model, std::string_view text);

struct CantorImage {
  Word prefix;               // first stable_len letters of g.xi
  std::size_t stable_len = 0;
  bool complete = false;     // stable_len == out_len
  std::string status;        // "ok", "partial" or "insufficient prefix"
};
// Needs the B-supports to avoid o in the second to last letter.
CantorImage act_cantor_prefix(const LazyElement& g, const CantorPoint& xi, std::size_t out_len);

// counts[l-1] = number of v in X^l on whose cylinder g does not act as a
// prefix replacement, checked at levels l+1..max_level. Needs
// L + 2 <= max_level: the block behind v = o^l first shows at level l+2.
std::vector<std::uint64_t> bounded_type_profile(const LazyElement& g, std::size_t L);

// Delta_L atom moving xs[j] to ys[j]; level groups must contain Alt(X^L).
struct TransitivityWitness {
  std::size_t level = 0;
  LevelElem omega;
};
TransitivityWitness transitivity_witness(const ModelPtr& model, const std::vector<LimitPoint>& xs,
                                         const std::vector<LimitPoint>& ys);
VerificationReport check_transitivity_limit(const ModelPtr& model, std::size_t k, std::size_t samples,
                                            const VerifyOptions& opt = {});

// B_(i+n) fixes every line spanned by F[X^i x {x3}^n], n >= 2, i+n <= L.
VerificationReport check_projective_action(const ModelPtr& model, std::size_t L);

}  // namespace telescopes

#endif
