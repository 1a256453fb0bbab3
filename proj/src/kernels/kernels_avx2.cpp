// AVX2 variants. This file is compiled with -mavx2 -mpopcnt and must only be
// entered after a CPUID check (see dispatch.cpp).

#include "bipsize/kernels.hpp"

#if defined(BIPSIZE_HAVE_AVX2)

#include <immintrin.h>

#include <bit>

namespace bipsize::kernels {
namespace {

// Nibble-lookup popcount (Mula), accumulated per 64-bit lane with vpsadbw.
inline __m256i popcount_lanes(__m256i v) {
  const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,  //
                                          0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  const __m256i counts =
      _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo), _mm256_shuffle_epi8(lookup, hi));
  return _mm256_sad_epu8(counts, _mm256_setzero_si256());
}

inline std::uint64_t horizontal_sum(__m256i acc) {
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

inline __m256i load(const std::uint64_t* p) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

template <class Combine, class Tail>
std::uint64_t reduce_words(std::size_t words, Combine combine, Tail tail) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= words; i += 4) acc = _mm256_add_epi64(acc, popcount_lanes(combine(i)));
  std::uint64_t total = horizontal_sum(acc);
  for (; i < words; ++i) total += static_cast<std::uint64_t>(std::popcount(tail(i)));
  return total;
}

std::uint64_t popcount_avx2(const std::uint64_t* a, std::size_t words) {
  return reduce_words(
      words, [&](std::size_t i) { return load(a + i); }, [&](std::size_t i) { return a[i]; });
}

std::uint64_t popcount_and_avx2(const std::uint64_t* a, const std::uint64_t* b,
                                std::size_t words) {
  return reduce_words(
      words, [&](std::size_t i) { return _mm256_and_si256(load(a + i), load(b + i)); },
      [&](std::size_t i) { return a[i] & b[i]; });
}

std::uint64_t popcount_andnot_avx2(const std::uint64_t* a, const std::uint64_t* b,
                                   std::size_t words) {
  // _mm256_andnot_si256(x, y) computes ~x & y.
  return reduce_words(
      words, [&](std::size_t i) { return _mm256_andnot_si256(load(b + i), load(a + i)); },
      [&](std::size_t i) { return a[i] & ~b[i]; });
}

std::uint64_t popcount_xor_avx2(const std::uint64_t* a, const std::uint64_t* b,
                                std::size_t words) {
  return reduce_words(
      words, [&](std::size_t i) { return _mm256_xor_si256(load(a + i), load(b + i)); },
      [&](std::size_t i) { return a[i] ^ b[i]; });
}

std::uint64_t popcount_andnot2_avx2(const std::uint64_t* a, const std::uint64_t* b,
                                    const std::uint64_t* c, std::size_t words) {
  return reduce_words(
      words,
      [&](std::size_t i) {
        return _mm256_andnot_si256(_mm256_or_si256(load(b + i), load(c + i)), load(a + i));
      },
      [&](std::size_t i) { return a[i] & ~b[i] & ~c[i]; });
}

void or_shifted_avx2(std::uint64_t* dst, const std::uint64_t* src, std::size_t words,
                     std::size_t shift) {
  const std::size_t word_shift = shift / 64;
  const unsigned bit_shift = static_cast<unsigned>(shift % 64);
  if (word_shift >= words) return;
  std::size_t i = word_shift;
  if (bit_shift == 0) {
    for (; i + 4 <= words; i += 4) {
      const __m256i d = load(dst + i);
      _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i),
                          _mm256_or_si256(d, load(src + i - word_shift)));
    }
    for (; i < words; ++i) dst[i] |= src[i - word_shift];
    return;
  }
  dst[i] |= src[0] << bit_shift;
  ++i;
  const __m128i left = _mm_cvtsi32_si128(static_cast<int>(bit_shift));
  const __m128i right = _mm_cvtsi32_si128(static_cast<int>(64 - bit_shift));
  for (; i + 4 <= words; i += 4) {
    const __m256i cur = load(src + i - word_shift);
    const __m256i prev = load(src + i - word_shift - 1);
    const __m256i merged = _mm256_or_si256(_mm256_sll_epi64(cur, left), _mm256_srl_epi64(prev, right));
    const __m256i d = load(dst + i);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_or_si256(d, merged));
  }
  for (; i < words; ++i) {
    dst[i] |= (src[i - word_shift] << bit_shift) | (src[i - word_shift - 1] >> (64 - bit_shift));
  }
}

void blend_shifted_avx2(double* out, const double* in, std::size_t len, std::size_t shift,
                        double keep, double move) {
  const std::size_t head = shift < len ? shift : len;
  for (std::size_t i = 0; i < head; ++i) out[i] = keep * in[i];
  const __m256d keep_v = _mm256_set1_pd(keep);
  const __m256d move_v = _mm256_set1_pd(move);
  std::size_t i = head;
  for (; i + 4 <= len; i += 4) {
    // Separate multiply and add so rounding matches the scalar reference.
    const __m256d kept = _mm256_mul_pd(keep_v, _mm256_loadu_pd(in + i));
    const __m256d moved = _mm256_mul_pd(move_v, _mm256_loadu_pd(in + i - shift));
    _mm256_storeu_pd(out + i, _mm256_add_pd(kept, moved));
  }
  for (; i < len; ++i) {
    const double kept = keep * in[i];
    const double moved = move * in[i - shift];
    out[i] = kept + moved;
  }
}

}  // namespace

const KernelTable* avx2_table_impl() {
  static const KernelTable table{
      Isa::Avx2,          popcount_avx2,       popcount_and_avx2,     popcount_andnot_avx2,
      popcount_xor_avx2,  popcount_andnot2_avx2, or_shifted_avx2,     blend_shifted_avx2,
  };
  return &table;
}

}  // namespace bipsize::kernels

#endif  // BIPSIZE_HAVE_AVX2
