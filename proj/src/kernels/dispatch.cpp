#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "bipsize/kernels.hpp"

namespace bipsize::kernels {

#if defined(BIPSIZE_HAVE_AVX2)
const KernelTable* avx2_table_impl();
#endif

namespace {

std::atomic<const KernelTable*> g_selected{nullptr};

const KernelTable* pick_default() {
  if (const char* env = std::getenv("BIPSIZE_ISA")) {
    const std::string wanted(env);
    if (wanted == "scalar") return &scalar_table();
    if (wanted == "avx2" && avx2_table() != nullptr) return avx2_table();
  }
  if (const KernelTable* wide = avx2_table()) return wide;
  return &scalar_table();
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(BIPSIZE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* avx2_table() {
#if defined(BIPSIZE_HAVE_AVX2)
  if (cpu_supports(Isa::Avx2)) return avx2_table_impl();
#endif
  return nullptr;
}

const KernelTable& active() {
  const KernelTable* table = g_selected.load(std::memory_order_acquire);
  if (table == nullptr) {
    table = pick_default();
    const KernelTable* expected = nullptr;
    if (!g_selected.compare_exchange_strong(expected, table, std::memory_order_acq_rel)) {
      table = expected;
    }
  }
  return *table;
}

void select(Isa isa) {
  const KernelTable* table = isa == Isa::Scalar ? &scalar_table() : avx2_table();
  if (table == nullptr) {
    throw std::invalid_argument("kernel ISA unavailable: " + std::string(isa_name(isa)));
  }
  g_selected.store(table, std::memory_order_release);
}

}  // namespace bipsize::kernels
