#include "telescopes/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define TELESCOPES_AVX2 __attribute__((target("avx2")))
#endif

namespace telescopes::kernels::avx2 {

#ifdef TELESCOPES_AVX2

TELESCOPES_AVX2
void gather_u32(const std::uint32_t* table, const std::uint32_t* idx,
                std::uint32_t* out, std::size_t n) {
  std::size_t i = 0;
  const int* base = reinterpret_cast<const int*>(table);
  for (; i + 8 <= n; i += 8) {
    __m256i ix = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(idx + i));
    __m256i v = _mm256_i32gather_epi32(base, ix, 4);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), v);
  }
  for (; i < n; ++i) out[i] = table[idx[i]];
}

TELESCOPES_AVX2
std::size_t count_moved_u32(const std::uint32_t* img, std::size_t n) {
  std::size_t c = 0, i = 0;
  __m256i iota = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
  const __m256i eight = _mm256_set1_epi32(8);
  for (; i + 8 <= n; i += 8) {
    __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(img + i));
    int eq = _mm256_movemask_ps(_mm256_castsi256_ps(_mm256_cmpeq_epi32(v, iota)));
    c += 8 - __builtin_popcount(static_cast<unsigned>(eq));
    iota = _mm256_add_epi32(iota, eight);
  }
  for (; i < n; ++i) c += img[i] != i;
  return c;
}

TELESCOPES_AVX2
void gf_axpy(std::uint8_t* dst, const std::uint8_t* src, std::size_t n,
             const std::uint8_t* mul_row, const std::uint8_t* add_table,
             std::uint8_t q, std::uint8_t p, GfAdd mode) {
  if (mode == GfAdd::table) {
    scalar::gf_axpy(dst, src, n, mul_row, add_table, q, p, mode);
    return;
  }
  __m128i row128 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(mul_row));
  __m256i row = _mm256_broadcastsi128_si256(row128);
  __m256i pv = _mm256_set1_epi8(static_cast<char>(p));
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
    __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
    __m256i prod = _mm256_shuffle_epi8(row, s);
    __m256i r;
    if (mode == GfAdd::xor_bits) {
      r = _mm256_xor_si256(d, prod);
    } else {
      // Both summands are below p <= 7, so t < 2p and wrapping t - p is
      // larger than t exactly when t < p.
      __m256i t = _mm256_add_epi8(d, prod);
      r = _mm256_min_epu8(t, _mm256_sub_epi8(t, pv));
    }
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), r);
  }
  scalar::gf_axpy(dst + i, src + i, n - i, mul_row, add_table, q, p, mode);
}

#else

void gather_u32(const std::uint32_t* table, const std::uint32_t* idx,
                std::uint32_t* out, std::size_t n) {
  scalar::gather_u32(table, idx, out, n);
}
std::size_t count_moved_u32(const std::uint32_t* img, std::size_t n) {
  return scalar::count_moved_u32(img, n);
}
void gf_axpy(std::uint8_t* dst, const std::uint8_t* src, std::size_t n,
             const std::uint8_t* mul_row, const std::uint8_t* add_table,
             std::uint8_t q, std::uint8_t p, GfAdd mode) {
  scalar::gf_axpy(dst, src, n, mul_row, add_table, q, p, mode);
}

#endif

}  // namespace telescopes::kernels::avx2
