#pragma once

// Data-parallel inner loops shared by every module.
//
// Each kernel has a portable scalar reference and, on x86-64, an AVX2
// variant compiled in its own translation unit. The variant is picked once
// at runtime from CPUID; tests force each table in turn and require
// bit-identical results.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace bipsize::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;

  // |a|
  std::uint64_t (*popcount)(const std::uint64_t* a, std::size_t words);
  // |a & b|
  std::uint64_t (*popcount_and)(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
  // |a & ~b|
  std::uint64_t (*popcount_andnot)(const std::uint64_t* a, const std::uint64_t* b,
                                   std::size_t words);
  // |a ^ b|
  std::uint64_t (*popcount_xor)(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
  // |a & ~b & ~c|
  std::uint64_t (*popcount_andnot2)(const std::uint64_t* a, const std::uint64_t* b,
                                    const std::uint64_t* c, std::size_t words);

  // dst |= (src << shift), bits shifted past the last word are dropped.
  // dst and src must not alias.
  void (*or_shifted)(std::uint64_t* dst, const std::uint64_t* src, std::size_t words,
                     std::size_t shift);

  // out[i] = keep * in[i] + move * in[i - shift]   (in[j] = 0 for j < 0)
  // One Bernoulli step of a lattice distribution. out and in must not alias.
  void (*blend_shifted)(double* out, const double* in, std::size_t len, std::size_t shift,
                        double keep, double move);
};

const KernelTable& scalar_table();

/// Null when the build or the CPU lacks AVX2.
const KernelTable* avx2_table();

bool cpu_supports(Isa isa);

/// Table used by the library. Defaults to the widest supported ISA; the
/// BIPSIZE_ISA environment variable ("scalar" or "avx2") overrides it.
const KernelTable& active();

/// Forces a table for the rest of the process. Throws std::invalid_argument
/// when the ISA is unavailable.
void select(Isa isa);

}  // namespace bipsize::kernels
