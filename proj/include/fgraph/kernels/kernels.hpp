#pragma once

// Dense vector kernels used by the sparse solvers. Each kernel has a scalar
// reference implementation and, on x86-64, an AVX2/FMA variant. The variant
// is selected once at runtime from CPU features; FGRAPH_KERNELS=scalar in the
// environment forces the reference path.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace fgraph::kernels {

using Index = std::ptrdiff_t;

struct KernelTable {
  std::string_view name;
  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y = x + b * y
  void (*xpby)(const double* x, double b, double* y, std::size_t n);
  // sum_i values[i] * x[idx[i]]
  double (*gatherDot)(const double* values, const Index* idx, const double* x, std::size_t n);
};

const KernelTable& scalarKernels();
// Null when the build has no AVX2 variant or the CPU lacks AVX2/FMA.
const KernelTable* avx2Kernels();
// Kernel set in use for this process.
const KernelTable& active();

inline double dot(const double* x, const double* y, std::size_t n) { return active().dot(x, y, n); }
inline void axpy(double a, const double* x, double* y, std::size_t n) { active().axpy(a, x, y, n); }
inline void xpby(const double* x, double b, double* y, std::size_t n) { active().xpby(x, b, y, n); }
inline double gatherDot(const double* values, const Index* idx, const double* x, std::size_t n) {
  return active().gatherDot(values, idx, x, n);
}

}  // namespace fgraph::kernels
