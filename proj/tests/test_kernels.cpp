#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <string_view>
#include <vector>

#include "fgraph/kernels/kernels.hpp"

using namespace fgraph::kernels;

namespace {

std::vector<double> randomData(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

// Bound on the rounding difference between two summation orders.
double dotTolerance(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] * y[i]);
  return 4.0 * static_cast<double>(x.size() + 1) * 1.2e-16 * s + 1e-300;
}

class Equivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    simd_ = avx2Kernels();
    if (simd_ == nullptr) GTEST_SKIP() << "no SIMD kernel set on this machine";
  }
  const KernelTable* simd_ = nullptr;
  const KernelTable& ref_ = scalarKernels();
};

}  // namespace

TEST(Kernels, ScalarReference) {
  const std::vector<double> x{1, 2, 3}, y{4, 5, 6};
  EXPECT_EQ(scalarKernels().dot(x.data(), y.data(), 3), 32.0);
  std::vector<double> z = y;
  scalarKernels().axpy(2.0, x.data(), z.data(), 3);
  EXPECT_EQ(z, (std::vector<double>{6, 9, 12}));
  z = y;
  scalarKernels().xpby(x.data(), -1.0, z.data(), 3);
  EXPECT_EQ(z, (std::vector<double>{-3, -3, -3}));
  const std::vector<Index> idx{2, 0};
  EXPECT_EQ(scalarKernels().gatherDot(x.data(), idx.data(), y.data(), 2), 6.0 + 2 * 4.0);
  EXPECT_EQ(scalarKernels().dot(x.data(), y.data(), 0), 0.0);
}

TEST(Kernels, ActiveSelection) {
  const char* forced = std::getenv("FGRAPH_KERNELS");
  if (forced != nullptr && std::string_view(forced) == "scalar") {
    EXPECT_EQ(&active(), &scalarKernels());
  } else if (const KernelTable* simd = avx2Kernels()) {
    EXPECT_EQ(&active(), simd);
  } else {
    EXPECT_EQ(&active(), &scalarKernels());
  }
  EXPECT_FALSE(active().name.empty());
}

TEST_F(Equivalence, Dot) {
  std::mt19937_64 rng(71);
  for (std::size_t n = 0; n <= 37; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      const auto x = randomData(rng, n), y = randomData(rng, n);
      EXPECT_NEAR(simd_->dot(x.data(), y.data(), n), ref_.dot(x.data(), y.data(), n), dotTolerance(x, y))
          << "n=" << n;
    }
  }
}

TEST_F(Equivalence, AxpyAndXpby) {
  std::mt19937_64 rng(72);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (std::size_t n = 0; n <= 37; ++n) {
    const auto x = randomData(rng, n), y = randomData(rng, n);
    const double a = u(rng);
    std::vector<double> r = y, s = y;
    ref_.axpy(a, x.data(), r.data(), n);
    simd_->axpy(a, x.data(), s.data(), n);
    // FMA rounds once, the reference twice.
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(r[i], s[i], 4e-16 * (std::abs(a * x[i]) + std::abs(y[i])));

    r = y;
    s = y;
    ref_.xpby(x.data(), a, r.data(), n);
    simd_->xpby(x.data(), a, s.data(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(r[i], s[i], 4e-16 * (std::abs(a * y[i]) + std::abs(x[i])));
  }
}

TEST_F(Equivalence, GatherDot) {
  std::mt19937_64 rng(73);
  const auto x = randomData(rng, 200);
  std::uniform_int_distribution<Index> pick(0, 199);
  for (std::size_t n = 0; n <= 37; ++n) {
    const auto vals = randomData(rng, n);
    std::vector<Index> idx(n);
    for (Index& i : idx) i = pick(rng);
    std::vector<double> gathered(n);
    for (std::size_t i = 0; i < n; ++i) gathered[i] = x[static_cast<std::size_t>(idx[i])];
    EXPECT_NEAR(simd_->gatherDot(vals.data(), idx.data(), x.data(), n),
                ref_.gatherDot(vals.data(), idx.data(), x.data(), n), dotTolerance(vals, gathered))
        << "n=" << n;
  }
}

TEST_F(Equivalence, UnalignedOffsets) {
  std::mt19937_64 rng(74);
  const auto x = randomData(rng, 64), y = randomData(rng, 64);
  for (std::size_t off = 0; off < 4; ++off) {
    const std::size_t n = 64 - off;
    const std::vector<double> xs(x.begin() + static_cast<std::ptrdiff_t>(off), x.end());
    const std::vector<double> ys(y.begin() + static_cast<std::ptrdiff_t>(off), y.end());
    EXPECT_NEAR(simd_->dot(x.data() + off, y.data() + off, n), ref_.dot(x.data() + off, y.data() + off, n),
                dotTolerance(xs, ys));
  }
}
