#include "telescopes/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace telescopes::kernels {

namespace scalar {

void gather_u32(const std::uint32_t* table, const std::uint32_t* idx,
                std::uint32_t* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = table[idx[i]];
}

std::size_t count_moved_u32(const std::uint32_t* img, std::size_t n) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += img[i] != i;
  return c;
}

void gf_axpy(std::uint8_t* dst, const std::uint8_t* src, std::size_t n,
             const std::uint8_t* mul_row, const std::uint8_t* add_table,
             std::uint8_t q, std::uint8_t p, GfAdd mode) {
  switch (mode) {
    case GfAdd::xor_bits:
      for (std::size_t i = 0; i < n; ++i) dst[i] ^= mul_row[src[i]];
      break;
    case GfAdd::mod_prime:
      for (std::size_t i = 0; i < n; ++i) {
        unsigned t = dst[i] + mul_row[src[i]];
        dst[i] = static_cast<std::uint8_t>(t >= p ? t - p : t);
      }
      break;
    case GfAdd::table:
      for (std::size_t i = 0; i < n; ++i)
        dst[i] = add_table[dst[i] * q + mul_row[src[i]]];
      break;
  }
}

}  // namespace scalar

namespace {

struct Dispatch {
  Isa isa;
  void (*gather)(const std::uint32_t*, const std::uint32_t*, std::uint32_t*,
                 std::size_t);
  std::size_t (*moved)(const std::uint32_t*, std::size_t);
  void (*axpy)(std::uint8_t*, const std::uint8_t*, std::size_t,
               const std::uint8_t*, const std::uint8_t*, std::uint8_t,
               std::uint8_t, GfAdd);
};

const Dispatch kScalar{Isa::scalar, scalar::gather_u32,
                       scalar::count_moved_u32, scalar::gf_axpy};
const Dispatch kAvx2{Isa::avx2, avx2::gather_u32, avx2::count_moved_u32,
                     avx2::gf_axpy};

const Dispatch* initial_dispatch() {
  const char* env = std::getenv("TELESCOPES_ISA");
  if (env && std::strcmp(env, "scalar") == 0) return &kScalar;
  return avx2_supported() ? &kAvx2 : &kScalar;
}

std::atomic<const Dispatch*>& current() {
  static std::atomic<const Dispatch*> d{initial_dispatch()};
  return d;
}

}  // namespace

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() { return current().load()->isa; }

Isa select_isa(Isa want) {
  const Dispatch* d =
      (want == Isa::avx2 && avx2_supported()) ? &kAvx2 : &kScalar;
  current().store(d);
  return d->isa;
}

void gather_u32(const std::uint32_t* table, const std::uint32_t* idx,
                std::uint32_t* out, std::size_t n) {
  current().load(std::memory_order_relaxed)->gather(table, idx, out, n);
}

std::size_t count_moved_u32(const std::uint32_t* img, std::size_t n) {
  return current().load(std::memory_order_relaxed)->moved(img, n);
}

void gf_axpy(std::uint8_t* dst, const std::uint8_t* src, std::size_t n,
             const std::uint8_t* mul_row, const std::uint8_t* add_table,
             std::uint8_t q, std::uint8_t p, GfAdd mode) {
  current().load(std::memory_order_relaxed)
      ->axpy(dst, src, n, mul_row, add_table, q, p, mode);
}

}  // namespace telescopes::kernels
