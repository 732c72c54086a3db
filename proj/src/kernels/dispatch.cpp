#include <atomic>
#include <cstdlib>
#include <string_view>

#include "permtherm/kernels/kernels.hpp"

namespace permtherm::kernels {

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

const KernelTable* initial_table() {
  const KernelTable* avx2 = (avx2_table() != nullptr && cpu_supports_avx2()) ? avx2_table() : nullptr;
  if (const char* env = std::getenv("PERMTHERM_KERNELS")) {
    if (std::string_view(env) == "scalar") return &scalar_table();
  }
  return avx2 != nullptr ? avx2 : &scalar_table();
}

std::atomic<const KernelTable*>& selected() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

const KernelTable& active() { return *selected().load(std::memory_order_relaxed); }

bool set_backend(Backend backend) {
  if (backend == Backend::Scalar) {
    selected().store(&scalar_table());
    return true;
  }
  if (avx2_table() == nullptr || !cpu_supports_avx2()) return false;
  selected().store(avx2_table());
  return true;
}

const char* to_string(Backend backend) {
  return backend == Backend::Scalar ? "scalar" : "avx2";
}

}  // namespace permtherm::kernels
