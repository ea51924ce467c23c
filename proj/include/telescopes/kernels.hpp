#ifndef TELESCOPES_KERNELS_HPP
#define TELESCOPES_KERNELS_HPP

#include <cstddef>
#include <cstdint>

// Hot loops shared by the permutation and matrix engines. Each kernel has a
// scalar reference and an AVX2 variant; the variant is picked once at
// startup from CPUID. Setting TELESCOPES_ISA=scalar forces the reference.
namespace telescopes::kernels {

enum class Isa { scalar, avx2 };

bool avx2_supported();
Isa active_isa();
// Switches the dispatch target. Requests for an unsupported ISA fall back
// to scalar. Returns the ISA actually selected.
Isa select_isa(Isa want);

// How field elements add in gf_axpy.
enum class GfAdd : std::uint8_t {
  xor_bits,   // characteristic 2, elements are bit vectors
  mod_prime,  // prime field, elements are residues
  table,      // general, via an addition table
};

// out[i] = table[idx[i]]
void gather_u32(const std::uint32_t* table, const std::uint32_t* idx,
                std::uint32_t* out, std::size_t n);
// Number of i with img[i] != i.
std::size_t count_moved_u32(const std::uint32_t* img, std::size_t n);
// dst[i] = dst[i] + mul_row[src[i]] over GF(q). mul_row has 16 entries,
// add_table is q*q (only read in GfAdd::table mode), p is the
// characteristic (read in GfAdd::mod_prime mode).
void gf_axpy(std::uint8_t* dst, const std::uint8_t* src, std::size_t n,
             const std::uint8_t* mul_row, const std::uint8_t* add_table,
             std::uint8_t q, std::uint8_t p, GfAdd mode);

namespace scalar {
void gather_u32(const std::uint32_t*, const std::uint32_t*, std::uint32_t*,
                std::size_t);
std::size_t count_moved_u32(const std::uint32_t*, std::size_t);
void gf_axpy(std::uint8_t*, const std::uint8_t*, std::size_t,
             const std::uint8_t*, const std::uint8_t*, std::uint8_t,
             std::uint8_t, GfAdd);
}  // namespace scalar

namespace avx2 {
void gather_u32(const std::uint32_t*, const std::uint32_t*, std::uint32_t*,
                std::size_t);
std::size_t count_moved_u32(const std::uint32_t*, std::size_t);
void gf_axpy(std::uint8_t*, const std::uint8_t*, std::size_t,
             const std::uint8_t*, const std::uint8_t*, std::uint8_t,
             std::uint8_t, GfAdd);
}  // namespace avx2

}  // namespace telescopes::kernels

#endif
