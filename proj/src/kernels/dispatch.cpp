#include <cstdlib>
#include <string_view>

#include "fgraph/kernels/kernels.hpp"

namespace fgraph::kernels {

#if defined(FGRAPH_HAVE_AVX2)
namespace avx2 {
const KernelTable& table();
}
#endif

const KernelTable* avx2Kernels() {
#if defined(FGRAPH_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2::table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& selected = [] () -> const KernelTable& {
    const char* forced = std::getenv("FGRAPH_KERNELS");
    if (forced != nullptr && std::string_view(forced) == "scalar") return scalarKernels();
    if (const KernelTable* t = avx2Kernels()) return *t;
    return scalarKernels();
  }();
  return selected;
}

}  // namespace fgraph::kernels
