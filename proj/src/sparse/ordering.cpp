#include "fgraph/sparse/ordering.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "fgraph/errors.hpp"

namespace fgraph::sparse {

namespace {

// Minimum degree on the quotient graph. Variables carry a weight (block
// size); eliminated variables become elements whose member lists stand in
// for the cliques they would create. Degrees use the approximate external
// degree bound
//   d_i = |A_i| + |L_p \ i| + sum_{e in E_i, e != p} |L_e \ L_p|
// capped by the exact-degree bounds, all weighted.
class QuotientGraph {
 public:
  QuotientGraph(std::vector<std::vector<Index>> adjacency, std::vector<Index> weight)
      : n_(static_cast<Index>(adjacency.size())),
        var_adj_(std::move(adjacency)),
        elem_adj_(static_cast<std::size_t>(n_)),
        members_(static_cast<std::size_t>(n_)),
        weight_(std::move(weight)),
        degree_(static_cast<std::size_t>(n_), 0),
        eliminated_(static_cast<std::size_t>(n_), false),
        element_alive_(static_cast<std::size_t>(n_), false),
        mark_(static_cast<std::size_t>(n_), -1),
        wcount_(static_cast<std::size_t>(n_), -1),
        wstamp_(static_cast<std::size_t>(n_), -1) {
    remaining_weight_ = std::accumulate(weight_.begin(), weight_.end(), Index{0});
    for (Index i = 0; i < n_; ++i) {
      Index d = 0;
      for (Index j : var_adj_[i]) d += weight_[j];
      degree_[i] = d;
      queue_.emplace(d, i);
    }
  }

  std::vector<Index> order() {
    std::vector<Index> out;
    out.reserve(static_cast<std::size_t>(n_));
    for (Index step = 0; step < n_; ++step) {
      const Index p = queue_.begin()->second;
      queue_.erase(queue_.begin());
      eliminate(p, step);
      out.push_back(p);
    }
    return out;
  }

 private:
  void eliminate(Index p, Index stamp) {
    eliminated_[p] = true;
    remaining_weight_ -= weight_[p];

    // L_p = (A_p U (U_{e in E_p} L_e)) \ {p}, uneliminated only.
    std::vector<Index> lp;
    mark_[p] = stamp;
    auto take = [&](Index v) {
      if (!eliminated_[v] && mark_[v] != stamp) {
        mark_[v] = stamp;
        lp.push_back(v);
      }
    };
    for (Index v : var_adj_[p]) take(v);
    for (Index e : elem_adj_[p]) {
      for (Index v : members_[e]) take(v);
      element_alive_[e] = false;  // absorbed into p
      members_[e].clear();
      members_[e].shrink_to_fit();
    }
    std::sort(lp.begin(), lp.end());
    var_adj_[p].clear();
    var_adj_[p].shrink_to_fit();
    elem_adj_[p].clear();
    elem_adj_[p].shrink_to_fit();

    Index lp_weight = 0;
    for (Index v : lp) lp_weight += weight_[v];

    // |L_e \ L_p| for every live element touching L_p.
    for (Index i : lp) {
      for (Index e : elem_adj_[i]) {
        if (!element_alive_[e]) continue;
        if (wstamp_[e] != stamp) {
          wstamp_[e] = stamp;
          Index w = 0;
          for (Index v : members_[e]) {
            if (!eliminated_[v]) w += weight_[v];
          }
          wcount_[e] = w;
        }
        wcount_[e] -= weight_[i];
      }
    }
    // Elements entirely inside L_p carry no extra information.
    for (Index i : lp) {
      for (Index e : elem_adj_[i]) {
        if (element_alive_[e] && wstamp_[e] == stamp && wcount_[e] <= 0) {
          element_alive_[e] = false;
          members_[e].clear();
          members_[e].shrink_to_fit();
        }
      }
    }

    for (Index i : lp) {
      auto& ei = elem_adj_[i];
      ei.erase(std::remove_if(ei.begin(), ei.end(),
                              [&](Index e) { return !element_alive_[e] || e == p; }),
               ei.end());
      auto& ai = var_adj_[i];
      ai.erase(std::remove_if(ai.begin(), ai.end(),
                              [&](Index v) { return eliminated_[v] || mark_[v] == stamp; }),
               ai.end());

      Index d = lp_weight - weight_[i];
      for (Index v : ai) d += weight_[v];
      for (Index e : ei) d += wcount_[e] > 0 ? wcount_[e] : 0;
      ei.push_back(p);

      d = std::min({d, remaining_weight_ - weight_[i], degree_[i] + lp_weight - weight_[i]});
      d = std::max<Index>(d, 0);
      if (d != degree_[i]) {
        queue_.erase({degree_[i], i});
        degree_[i] = d;
        queue_.emplace(d, i);
      }
    }
    members_[p] = std::move(lp);
    element_alive_[p] = true;
  }

  Index n_;
  std::vector<std::vector<Index>> var_adj_;
  std::vector<std::vector<Index>> elem_adj_;
  std::vector<std::vector<Index>> members_;
  std::vector<Index> weight_;
  std::vector<Index> degree_;
  std::vector<bool> eliminated_;
  std::vector<bool> element_alive_;
  std::vector<Index> mark_;
  std::vector<Index> wcount_;
  std::vector<Index> wstamp_;
  std::set<std::pair<Index, Index>> queue_;
  Index remaining_weight_ = 0;
};

}  // namespace

BlockOrdering amdOrdering(const CscMatrix& h, std::span<const Index> block_offsets) {
  if (h.rows != h.cols) throw ContractViolation("ordering needs a square matrix");
  if (block_offsets.empty() || block_offsets.front() != 0 || block_offsets.back() != h.cols) {
    throw ContractViolation("block offsets must partition the matrix columns");
  }
  const Index nb = static_cast<Index>(block_offsets.size()) - 1;
  std::vector<Index> block_of(static_cast<std::size_t>(h.cols));
  std::vector<Index> weight(static_cast<std::size_t>(nb));
  for (Index b = 0; b < nb; ++b) {
    if (block_offsets[b + 1] <= block_offsets[b]) throw ContractViolation("empty block");
    weight[b] = block_offsets[b + 1] - block_offsets[b];
    for (Index c = block_offsets[b]; c < block_offsets[b + 1]; ++c) block_of[c] = b;
  }

  std::vector<std::vector<Index>> adj(static_cast<std::size_t>(nb));
  for (Index c = 0; c < h.cols; ++c) {
    const Index bc = block_of[c];
    for (Index p = h.col_ptr[c]; p < h.col_ptr[c + 1]; ++p) {
      const Index br = block_of[h.row_idx[p]];
      if (br != bc) {
        adj[bc].push_back(br);
        adj[br].push_back(bc);
      }
    }
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }

  BlockOrdering out;
  out.block_perm = QuotientGraph(std::move(adj), std::move(weight)).order();
  out.scalar_perm = expandBlockPermutation(out.block_perm, block_offsets);
  return out;
}

std::vector<Index> amdOrdering(const CscMatrix& h) {
  std::vector<Index> offsets(static_cast<std::size_t>(h.cols) + 1);
  std::iota(offsets.begin(), offsets.end(), Index{0});
  return amdOrdering(h, offsets).scalar_perm;
}

std::vector<Index> expandBlockPermutation(std::span<const Index> block_perm,
                                          std::span<const Index> block_offsets) {
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(block_offsets.back()));
  for (Index b : block_perm) {
    for (Index c = block_offsets[b]; c < block_offsets[b + 1]; ++c) out.push_back(c);
  }
  return out;
}

std::vector<Index> inversePermutation(std::span<const Index> perm) {
  std::vector<Index> inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = static_cast<Index>(i);
  return inv;
}

void checkPermutation(std::span<const Index> perm, Index n) {
  if (static_cast<Index>(perm.size()) != n) {
    throw ContractViolation("permutation has " + std::to_string(perm.size()) +
                            " entries, expected " + std::to_string(n));
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (Index v : perm) {
    if (v < 0 || v >= n || seen[v]) throw ContractViolation("not a permutation");
    seen[v] = true;
  }
}

}  // namespace fgraph::sparse
