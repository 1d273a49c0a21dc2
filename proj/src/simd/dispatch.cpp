#include <cstdlib>
#include <stdexcept>
#include <string>

#include "rollsim/simd/force_kernels.hpp"

namespace rollsim::simd {

std::vector<const KernelTable*> available_kernels() {
  std::vector<const KernelTable*> out{&scalar_kernels()};
  if (const auto* k = avx2_kernels()) out.push_back(k);
  if (const auto* k = neon_kernels()) out.push_back(k);
  return out;
}

const KernelTable& kernels_by_name(const std::string& name) {
  if (name == "auto") return *available_kernels().back();
  for (const auto* k : available_kernels())
    if (name == k->name) return *k;
  throw std::invalid_argument("simd: kernel set '" + name + "' is not available on this machine");
}

const KernelTable& active_kernels() {
  static const KernelTable& chosen = [] () -> const KernelTable& {
    const char* env = std::getenv("ROLLSIM_SIMD");
    return kernels_by_name(env && *env ? env : "auto");
  }();
  return chosen;
}

}  // namespace rollsim::simd
