#ifndef SPECSUM_REFERENCE_HPP
#define SPECSUM_REFERENCE_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "specsum/dense.hpp"
#include "specsum/oracle.hpp"
#include "specsum/poly.hpp"
#include "specsum/types.hpp"

namespace specsum {

// Brute-force validation oracles. Everything here is deliberately simple and
// dense; scale guards fail loudly instead of degrading.

inline constexpr std::size_t kDenseScaleLimit = 4096;

struct Spectrum {
  std::vector<double> eigenvalues;  // ascending
  DenseMatrix vectors;              // columns are eigenvectors (unitary)
  double residual = 0.0;            // max ||A v - lambda v||_2 over pairs
};

// Cyclic Jacobi with complex phase absorption; iterates until the off-diagonal
// Frobenius mass is <= 1e-12 * ||M||_F (at most 100 sweeps).
Spectrum eig_hermitian(const DenseMatrix& m);

enum class SumTarget { log_fn, inverse_fn, power_fn, exp_fn, poly_fn };

// Sum of f(lambda_i) over the spectrum; `param` is p for power_fn and beta for
// exp_fn (f = e^{-beta x}); poly_fn evaluates `poly`.
double exact_spectral_sum(const DenseMatrix& m, SumTarget f, double param = 0.0,
                          const Polynomial* poly = nullptr);

// Explicit enumeration of length-d walks from i to j, summing entry products.
// Guard: s^d <= 1e7.
cplx walk_enumerate_entry(const MatrixOracle& a, std::size_t d, std::size_t i, std::size_t j);
// Closed-walk form: Re A^d(i,i).
double walk_enumerate_power(const MatrixOracle& a, std::size_t d, std::size_t i);

// LU with partial pivoting.
cplx dense_determinant(const DenseMatrix& m);
DenseMatrix dense_inverse(const DenseMatrix& m);  // asserts ||M M^-1 - I||_max <= 1e-8

// Rademacher-vector trace estimate of tr[p(A)] (not normalized); the O(N)
// baseline the sampler is benchmarked against.
double hutchinson_baseline(const MatrixOracle& a, const Polynomial& p,
                           std::size_t samples, std::uint64_t seed);

// Dense materialization of an oracle (scale-guarded); used by tests and the
// compare/gadget paths.
DenseMatrix materialize(const MatrixOracle& a);

}  // namespace specsum

#endif
