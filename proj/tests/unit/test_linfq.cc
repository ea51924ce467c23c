#include "doctest.h"

#include <numeric>

#include "telescopes/field.hpp"
#include "telescopes/matfq.hpp"
#include "telescopes/rng.hpp"
#include "telescopes/transvection.hpp"

using namespace telescopes;

namespace {

MatFq random_matrix(const Field& f, std::size_t n, Rng& rng) {
  MatFq m(f, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m.set(i, j, static_cast<std::uint8_t>(rng.below(f.q())));
  return m;
}

MatFq random_invertible(const Field& f, std::size_t n, Rng& rng) {
  for (;;) {
    MatFq m = random_matrix(f, n, rng);
    if (m.det() != 0) return m;
  }
}

}  // namespace

TEST_CASE("field axioms hold exhaustively") {
  for (unsigned q : {2u, 3u, 4u, 5u, 7u, 8u, 9u}) {
    const Field& f = Field::get(q);
    CHECK(f.q() == q);
    unsigned pe = 1;
    for (unsigned k = 0; k < f.e(); ++k) pe *= f.p();
    CHECK(pe == q);
    for (unsigned a = 0; a < q; ++a) {
      auto x = static_cast<std::uint8_t>(a);
      CHECK(f.add(x, f.neg(x)) == 0);
      if (x) CHECK(f.mul(x, f.inv(x)) == 1);
      for (unsigned b = 0; b < q; ++b)
        for (unsigned c = 0; c < q; ++c) {
          auto y = static_cast<std::uint8_t>(b), z = static_cast<std::uint8_t>(c);
          CHECK(f.mul(x, f.add(y, z)) == f.add(f.mul(x, y), f.mul(x, z)));
          CHECK(f.mul(x, f.mul(y, z)) == f.mul(f.mul(x, y), z));
        }
    }
    // the multiplicative group is cyclic
    bool generator = false;
    for (unsigned g = 1; g < q && !generator; ++g) {
      std::uint8_t x = 1;
      unsigned ord = 0;
      do {
        x = f.mul(x, static_cast<std::uint8_t>(g));
        ++ord;
      } while (x != 1);
      generator = ord == q - 1;
    }
    CHECK(generator);
    CHECK(f.from_int(static_cast<long>(f.p())) == 0);
    CHECK(f.prime_basis().size() == f.e());
  }
  CHECK_FALSE(Field::supported(6));
  CHECK_THROWS_AS(Field::get(6), PreconditionError);
  CHECK_THROWS(Field::get(5).inv(0));
}

TEST_CASE("matrix arithmetic") {
  Rng rng(61);
  for (unsigned q : {2u, 3u, 4u}) {
    const Field& f = Field::get(q);
    for (int t = 0; t < 20; ++t) {
      std::size_t n = 1 + rng.below(6);
      MatFq a = random_invertible(f, n, rng), b = random_invertible(f, n, rng);
      CHECK((a * a.inverse()).is_identity());
      CHECK((a * b).det() == f.mul(a.det(), b.det()));
      CHECK(commutator(a, b) == a * b * a.inverse() * b.inverse());
      CHECK(conjugate(a, b) == b.inverse() * a * b);
      CHECK((a * b).kron_identity(3) == a.kron_identity(3) * b.kron_identity(3));
      CHECK(MatFq::parse(a.format()) == a);
      CHECK(equal_mod_scalars(a, a * MatFq::scalar(f, n, q - 1 ? static_cast<std::uint8_t>(q - 1) : 1)));
      MatFq s = direct_sum(a, b);
      CHECK(s.dim() == 2 * n);
      CHECK(s.det() == f.mul(a.det(), b.det()));
    }
    MatFq zero(f, 3);
    CHECK_THROWS_AS(zero.inverse(), PreconditionError);
  }
}

TEST_CASE("elementary and signed permutation matrices") {
  const Field& f = Field::get(5);
  MatFq e = elementary(f, 4, 1, 3, 2);
  CHECK(e.det() == 1);
  CHECK(e.at(1, 3) == 2);
  CHECK(mat_support(e) == std::vector<std::size_t>{1, 3});
  MatFq s = signed_perm(f, 4, 0, 2);
  CHECK(s.det() == 1);
  auto sp = as_signed_perm(s);
  REQUIRE(sp.has_value());
  CHECK(sp->target[0] == 2);
  CHECK(sp->target[2] == 0);
  CHECK_FALSE(as_signed_perm(e).has_value());
  CHECK(is_scalar(MatFq::scalar(f, 4, 3)) == std::uint8_t{3});
  CHECK_FALSE(is_scalar(e).has_value());
  MatFq n = normalize_scalar(MatFq::scalar(f, 3, 4) * e.submatrix({0, 1, 3}));
  CHECK(n.at(0, 0) == 1);
}

TEST_CASE("non-commuting tau on random instances") {
  Rng rng(62);
  for (unsigned q : {2u, 3u, 5u}) {
    const Field& f = Field::get(q);
    int built = 0;
    for (int t = 0; t < 60; ++t) {
      std::size_t n = 3 + rng.below(4);
      MatFq alpha = random_invertible(f, n, rng);
      std::size_t cut = 2 + rng.below(n - 2);
      std::vector<std::size_t> u(cut), w;
      std::iota(u.begin(), u.end(), std::size_t{0});
      for (std::size_t i = cut; i < n; ++i) w.push_back(i);
      try {
        NonCommutingTau r = find_noncommuting_tau(alpha, u, w);
        ++built;
        CHECK(r.tau.det() == 1);
        for (auto i : mat_support(r.tau)) CHECK(i < cut);
        CHECK_FALSE(is_scalar(commutator(alpha, r.tau)).has_value());
      } catch (const PreconditionError&) {
        // alpha acts on U as one scalar; check that this is so
        bool scalar_on_u = true;
        std::uint8_t lam = alpha.at(u[0], u[0]);
        for (auto i : u)
          for (std::size_t r = 0; r < n; ++r)
            if (alpha.at(r, i) != (r == i ? lam : 0)) scalar_on_u = false;
        CHECK(scalar_on_u);
      }
    }
    CHECK(built > 50);
  }
  const Field& f = Field::get(3);
  CHECK_THROWS_AS(find_noncommuting_tau(MatFq::identity(f, 4), {0, 1}, {2, 3}), PreconditionError);
}

TEST_CASE("transvection closure of SL_n generators") {
  for (unsigned q : {2u, 4u}) {
    const Field& f = Field::get(q);
    const std::size_t n = 4;
    std::vector<MatFq> gens;
    std::vector<SeedTransvection> seeds;
    for (std::uint8_t b : f.prime_basis()) {
      SeedTransvection s;
      s.u = 0;
      s.v = 1;
      s.r = b;
      s.word = {{gens.size(), false}};
      gens.push_back(elementary(f, n, 0, 1, b));
      seeds.push_back(s);
    }
    std::vector<MatFq> conj{signed_perm(f, n, 0, 1), signed_perm(f, n, 1, 2), signed_perm(f, n, 2, 3)};
    TransvectionClosure tc = transvection_closure(f, n, seeds, conj);
    CHECK(tc.covers_all());
    CHECK(tc.positions().size() == n * (n - 1));
    for (const auto& [key, node] : tc.items) {
      auto [u, v, c] = key;
      CHECK(tc.replay(node, gens, conj) == elementary(f, n, u, v, c));
    }
    // without conjugators only the seed position is certified
    CHECK(transvection_closure(f, n, seeds, {}).positions().size() == 1);
  }
}
