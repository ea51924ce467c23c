#ifndef TELESCOPES_TRANSVECTION_HPP
#define TELESCOPES_TRANSVECTION_HPP

#include <cstdint>
#include <map>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "telescopes/matfq.hpp"

namespace telescopes {

// Word over a generator list: (index, inverted).
using GenWord = std::vector<std::pair<std::size_t, bool>>;

struct SeedTransvection {
  std::size_t u = 0, v = 0;
  std::uint8_t r = 1;
  GenWord word;  // multiplies out to e_{u,v}(r)
};

// Derivation of one elementary matrix e_{u,v}(r).
struct WitnessNode {
  enum class Kind { seed, conjugate, commutator };
  Kind kind = Kind::seed;
  std::size_t u = 0, v = 0;
  std::uint8_t r = 1;
  GenWord word;                 // seed
  std::size_t conj = 0;         // conjugate: s X s^-1 with s = conjugators[conj]
  bool conj_inverse = false;    //   or with s^-1
  bool invert = false;          //   then inverted
  std::size_t a = 0, b = 0;     // conjugate uses a; commutator is [a, b]
};

struct TransvectionClosure {
  const Field* field = nullptr;
  std::size_t dim = 0;
  std::vector<std::uint8_t> basis;  // F_p-basis of F_q that items range over
  std::vector<WitnessNode> nodes;
  std::map<std::tuple<std::size_t, std::size_t, std::uint8_t>, std::size_t> items;

  // Positions (u, v) holding an item for every basis coefficient, so that
  // e_{u,v}(r) is certified for all r.
  std::set<std::pair<std::size_t, std::size_t>> positions() const;
  bool covers_all() const { return positions().size() == dim * (dim - 1); }
  // Multiplies the derivation out.
  MatFq replay(std::size_t node, const std::vector<MatFq>& gens,
               const std::vector<MatFq>& conjugators) const;
};

// Closes the seed items under conjugation by the signed-permutation
// conjugators (others are ignored) and [e_{u,v}(a), e_{v,w}(1)] = e_{u,w}(a).
// Seeds whose coefficient is not a basis element are ignored. The work queue
// is FIFO, so the result is deterministic.
TransvectionClosure transvection_closure(const Field& f, std::size_t dim,
                                         const std::vector<SeedTransvection>& seeds,
                                         const std::vector<MatFq>& conjugators);

}  // namespace telescopes

#endif
