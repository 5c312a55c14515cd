#include "fgraph/kernels/kernels.hpp"

namespace fgraph::kernels {

namespace {

double dotScalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpyScalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void xpbyScalar(const double* x, double b, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + b * y[i];
}

double gatherDotScalar(const double* values, const Index* idx, const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += values[i] * x[idx[i]];
  return s;
}

}  // namespace

const KernelTable& scalarKernels() {
  static const KernelTable table{"scalar", &dotScalar, &axpyScalar, &xpbyScalar, &gatherDotScalar};
  return table;
}

}  // namespace fgraph::kernels
