#include "doctest.h"

#include <numeric>
#include <vector>

#include "telescopes/field.hpp"
#include "telescopes/kernels.hpp"
#include "telescopes/rng.hpp"

using namespace telescopes;
namespace k = telescopes::kernels;

// Lengths around the 8-lane boundary and a long tail.
static const std::size_t kLengths[] = {0, 1, 7, 8, 9, 15, 16, 17, 31, 33, 100, 1027};

TEST_CASE("gather and moved count: scalar and avx2 agree") {
  if (!k::avx2_supported()) {
    MESSAGE("no AVX2 on this host; only the scalar kernels run");
    return;
  }
  Rng rng(31);
  for (std::size_t n : kLengths) {
    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    std::vector<std::uint32_t> table(n), a(n), b(n);
    for (auto& t : table) t = static_cast<std::uint32_t>(rng.next());
    k::scalar::gather_u32(table.data(), perm.data(), a.data(), n);
    k::avx2::gather_u32(table.data(), perm.data(), b.data(), n);
    CHECK(a == b);
    for (std::size_t i = 0; i < n; ++i) CHECK(a[i] == table[perm[i]]);
    std::size_t moved = 0;
    for (std::size_t i = 0; i < n; ++i) moved += perm[i] != i;
    CHECK(k::scalar::count_moved_u32(perm.data(), n) == moved);
    CHECK(k::avx2::count_moved_u32(perm.data(), n) == moved);
  }
}

TEST_CASE("gf_axpy: scalar and avx2 agree with the field tables") {
  Rng rng(32);
  for (unsigned q : {2u, 3u, 4u, 5u, 7u, 8u, 9u}) {
    const Field& f = Field::get(q);
    for (std::size_t n : kLengths) {
      std::vector<std::uint8_t> src(n), dst(n);
      for (auto& x : src) x = static_cast<std::uint8_t>(rng.below(q));
      for (auto& x : dst) x = static_cast<std::uint8_t>(rng.below(q));
      std::uint8_t c = static_cast<std::uint8_t>(rng.below(q));
      std::vector<std::uint8_t> want = dst, s = dst, v = dst;
      for (std::size_t i = 0; i < n; ++i) want[i] = f.add(dst[i], f.mul(c, src[i]));
      k::scalar::gf_axpy(s.data(), src.data(), n, f.mul_row(c), f.add_table(),
                         static_cast<std::uint8_t>(q), static_cast<std::uint8_t>(f.p()), f.add_mode());
      CHECK(s == want);
      if (k::avx2_supported()) {
        k::avx2::gf_axpy(v.data(), src.data(), n, f.mul_row(c), f.add_table(),
                         static_cast<std::uint8_t>(q), static_cast<std::uint8_t>(f.p()), f.add_mode());
        CHECK(v == want);
      }
    }
  }
}

TEST_CASE("dispatch switches and falls back") {
  k::Isa before = k::active_isa();
  CHECK(k::select_isa(k::Isa::scalar) == k::Isa::scalar);
  CHECK(k::active_isa() == k::Isa::scalar);
  std::vector<std::uint32_t> id{0, 1, 2, 5, 4, 3};
  CHECK(k::count_moved_u32(id.data(), id.size()) == 2);
  k::Isa got = k::select_isa(k::Isa::avx2);
  CHECK(got == (k::avx2_supported() ? k::Isa::avx2 : k::Isa::scalar));
  CHECK(k::count_moved_u32(id.data(), id.size()) == 2);
  k::select_isa(before);
}
