#include <bit>

#include "bipsize/kernels.hpp"

namespace bipsize::kernels {
namespace {

std::uint64_t popcount_scalar(const std::uint64_t* a, std::size_t words) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < words; ++i) total += std::popcount(a[i]);
  return total;
}

std::uint64_t popcount_and_scalar(const std::uint64_t* a, const std::uint64_t* b,
                                  std::size_t words) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < words; ++i) total += std::popcount(a[i] & b[i]);
  return total;
}

std::uint64_t popcount_andnot_scalar(const std::uint64_t* a, const std::uint64_t* b,
                                     std::size_t words) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < words; ++i) total += std::popcount(a[i] & ~b[i]);
  return total;
}

std::uint64_t popcount_xor_scalar(const std::uint64_t* a, const std::uint64_t* b,
                                  std::size_t words) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < words; ++i) total += std::popcount(a[i] ^ b[i]);
  return total;
}

std::uint64_t popcount_andnot2_scalar(const std::uint64_t* a, const std::uint64_t* b,
                                      const std::uint64_t* c, std::size_t words) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < words; ++i) total += std::popcount(a[i] & ~b[i] & ~c[i]);
  return total;
}

void or_shifted_scalar(std::uint64_t* dst, const std::uint64_t* src, std::size_t words,
                       std::size_t shift) {
  const std::size_t word_shift = shift / 64;
  const unsigned bit_shift = static_cast<unsigned>(shift % 64);
  if (word_shift >= words) return;
  if (bit_shift == 0) {
    for (std::size_t i = word_shift; i < words; ++i) dst[i] |= src[i - word_shift];
    return;
  }
  dst[word_shift] |= src[0] << bit_shift;
  for (std::size_t i = word_shift + 1; i < words; ++i) {
    dst[i] |= (src[i - word_shift] << bit_shift) | (src[i - word_shift - 1] >> (64 - bit_shift));
  }
}

void blend_shifted_scalar(double* out, const double* in, std::size_t len, std::size_t shift,
                          double keep, double move) {
  const std::size_t head = shift < len ? shift : len;
  for (std::size_t i = 0; i < head; ++i) out[i] = keep * in[i];
  for (std::size_t i = head; i < len; ++i) {
    const double kept = keep * in[i];
    const double moved = move * in[i - shift];
    out[i] = kept + moved;
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{
      Isa::Scalar,          popcount_scalar,         popcount_and_scalar,
      popcount_andnot_scalar, popcount_xor_scalar,   popcount_andnot2_scalar,
      or_shifted_scalar,    blend_shifted_scalar,
  };
  return table;
}

}  // namespace bipsize::kernels
