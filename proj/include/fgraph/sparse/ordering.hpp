#pragma once

#include <span>
#include <vector>

#include "fgraph/sparse/csc.hpp"

namespace fgraph::sparse {

// Permutations map new position -> old index: perm[new] = old.
struct BlockOrdering {
  std::vector<Index> block_perm;
  std::vector<Index> scalar_perm;
};

// Approximate minimum degree on the quotient graph of variable blocks.
// Blocks are never split; degrees are weighted by block size and ties go to
// the lowest block index, so the result is deterministic. `block_offsets`
// partitions the columns of the symmetric pattern `h` (blocks + 1 entries).
BlockOrdering amdOrdering(const CscMatrix& h, std::span<const Index> block_offsets);

// Scalar variant: every column is its own block.
std::vector<Index> amdOrdering(const CscMatrix& h);

std::vector<Index> expandBlockPermutation(std::span<const Index> block_perm,
                                          std::span<const Index> block_offsets);

std::vector<Index> inversePermutation(std::span<const Index> perm);

// Throws ContractViolation unless perm is a permutation of 0..n-1.
void checkPermutation(std::span<const Index> perm, Index n);

}  // namespace fgraph::sparse
