#ifndef SPECSUM_WALKER_HPP
#define SPECSUM_WALKER_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "specsum/oracle.hpp"
#include "specsum/types.hpp"

namespace specsum {

struct WalkOptions {
  // false: depth-first path expansion, cost O(d * s^d) worst case.
  // true:  dynamic program over (vertex, remaining depth), cost O(N * d * s);
  //        worthwhile once s^d outgrows the dimension.
  bool memoize = false;
};

struct WalkValue {
  cplx value = 0.0;
  std::uint64_t query_count = 0;  // oracle entries returned while computing it
};

struct PowerDiagonal {
  // values[l] = Re A^l(i,i) for l = 0..d; the imaginary residue is discarded
  // after the Hermitian reality check.
  std::vector<double> values;
  std::uint64_t query_count = 0;
};

// A^d(i,j) by summing weighted length-d walks from i to j.
WalkValue power_entry(const MatrixOracle& m, std::size_t d, std::size_t i, std::size_t j,
                      const WalkOptions& opt = {});

// All of A^0(i,i), ..., A^d(i,i) in one traversal.
PowerDiagonal diagonal_powers(const MatrixOracle& m, std::size_t d, std::size_t i,
                              const WalkOptions& opt = {});

// (A*B)(i,j) from row i of A and column j of B.
WalkValue product_entry(const MatrixOracle& a, const MatrixOracle& b, std::size_t i,
                        std::size_t j);

// (M_1 * M_2 * ... * M_d)(i,j) by walking the chain; each step branches over
// the row of the current factor, so the guard uses the largest sparsity.
WalkValue product_entry(const std::vector<const MatrixOracle*>& chain, std::size_t i,
                        std::size_t j, const WalkOptions& opt = {});

// True when the depth-first walker would refuse (d * log2(s) > 60 for s >= 2).
bool tree_walk_refused(std::size_t sparsity, std::size_t d);

// Deterministic selection used by the estimator: memoize once the walk tree
// (s^d, saturating) outgrows 16 * N * (d+1) * s, or when the tree guard fires;
// refuse if the memo table N * (d+1) would exceed 1e8 slots too.
WalkOptions auto_walk_options(const MatrixOracle& m, std::size_t d);

}  // namespace specsum

#endif
