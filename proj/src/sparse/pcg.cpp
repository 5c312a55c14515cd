#include "fgraph/sparse/pcg.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Cholesky>

#include "fgraph/errors.hpp"
#include "fgraph/kernels/kernels.hpp"

namespace fgraph::sparse {

namespace {

class BlockJacobi {
 public:
  BlockJacobi(const CscMatrix& h, std::span<const Index> offsets) {
    if (offsets.empty()) {
      offsets_.resize(static_cast<std::size_t>(h.cols) + 1);
      std::iota(offsets_.begin(), offsets_.end(), Index{0});
    } else {
      offsets_.assign(offsets.begin(), offsets.end());
    }
    if (offsets_.front() != 0 || offsets_.back() != h.cols) {
      throw ContractViolation("preconditioner blocks must partition the matrix");
    }
    inverses_.reserve(offsets_.size() - 1);
    for (std::size_t b = 0; b + 1 < offsets_.size(); ++b) {
      const Index c0 = offsets_[b];
      const Index w = offsets_[b + 1] - c0;
      Eigen::MatrixXd block(w, w);
      for (Index c = 0; c < w; ++c) {
        for (Index r = 0; r < w; ++r) block(r, c) = h.coeff(c0 + r, c0 + c);
      }
      Eigen::LLT<Eigen::MatrixXd> llt(block);
      if (llt.info() != Eigen::Success) {
        throw IndefiniteMatrixError(static_cast<std::size_t>(c0), block(0, 0));
      }
      inverses_.push_back(llt.solve(Eigen::MatrixXd::Identity(w, w)));
    }
  }

  void apply(const Eigen::VectorXd& r, Eigen::VectorXd& z) const {
    for (std::size_t b = 0; b < inverses_.size(); ++b) {
      const Index c0 = offsets_[b];
      const Index w = offsets_[b + 1] - c0;
      z.segment(c0, w).noalias() = inverses_[b] * r.segment(c0, w);
    }
  }

 private:
  std::vector<Index> offsets_;
  std::vector<Eigen::MatrixXd> inverses_;
};

}  // namespace

PcgResult pcgSolve(const CscMatrix& h, const Eigen::VectorXd& g, const PcgOptions& options,
                   std::span<const Index> block_offsets) {
  if (h.rows != h.cols || g.size() != h.cols) throw ContractViolation("pcg: size mismatch");
  const auto n = static_cast<std::size_t>(h.cols);
  PcgResult result;
  result.x = Eigen::VectorXd::Zero(h.cols);
  const double gnorm = g.norm();
  if (gnorm == 0.0) {
    result.converged = true;
    return result;
  }

  const BlockJacobi precond(h, block_offsets);
  Eigen::VectorXd r = g;
  Eigen::VectorXd z(h.cols);
  precond.apply(r, z);
  Eigen::VectorXd p = z;
  double rz = kernels::dot(r.data(), z.data(), n);

  for (int it = 1; it <= options.max_iterations; ++it) {
    const Eigen::VectorXd hp = symmetricMultiply(h, p);
    const double php = kernels::dot(p.data(), hp.data(), n);
    if (!(php > 0.0)) throw IndefiniteMatrixError(0, php);
    const double alpha = rz / php;
    kernels::axpy(alpha, p.data(), result.x.data(), n);
    kernels::axpy(-alpha, hp.data(), r.data(), n);
    result.iterations = it;
    result.relative_residual = std::sqrt(kernels::dot(r.data(), r.data(), n)) / gnorm;
    if (result.relative_residual <= options.tolerance) {
      result.converged = true;
      return result;
    }
    precond.apply(r, z);
    const double rz_next = kernels::dot(r.data(), z.data(), n);
    const double beta = rz_next / rz;
    rz = rz_next;
    kernels::xpby(z.data(), beta, p.data(), n);  // p = z + beta p
  }
  return result;
}

}  // namespace fgraph::sparse
