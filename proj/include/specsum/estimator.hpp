#ifndef SPECSUM_ESTIMATOR_HPP
#define SPECSUM_ESTIMATOR_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "specsum/oracle.hpp"
#include "specsum/poly.hpp"
#include "specsum/types.hpp"

namespace specsum {

enum class Method { taylor, chebyshev };

struct EstimateRequest {
  double eps = 0.1;    // additive accuracy on the normalized quantity
  double delta = 0.01; // failure probability
  Method method = Method::taylor;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> sample_override;
  int workers = 1;     // <= 1 means serial

  void validate() const;  // throws InputError on out-of-range eps/delta
};

struct EstimateReport {
  double value = 0.0;
  double eps = 0.0, delta = 0.0;
  std::uint64_t samples = 0;
  std::size_t degree = 0;   // 0 when no polynomial is involved
  std::string method;       // "taylor" | "chebyshev" | "direct"
  double scale = 1.0;       // post-multiplication factor (ln k, k, e^beta, ...)
  std::uint64_t queries = 0;
  double elapsed_ms = 0.0;
  std::uint64_t seed = 0;
  std::optional<double> relative_bound;  // eps*kappa, only under the extra margin promise
};

// Mean of T = sample_count(1, eps, delta) uniformly sampled diagonal entries.
// Caller promises ||A|| <= 1.
EstimateReport estimate_normalized_trace(const MatrixOracle& a, const EstimateRequest& req);

// Core sampler for (1/N) tr[p(A)]: per sample, one diagonal_powers walk
// combined with p's monomial coefficients. Requires cert_sup <= 1 (drivers
// pre-scale; direct callers must too).
EstimateReport estimate_poly_trace(const MatrixOracle& a, const Polynomial& p,
                                   const EstimateRequest& req);

// Drivers. Each builds its polynomial at eps/2, samples the 1/cert_sup-scaled
// polynomial at accuracy eps/(2*cert_sup), and multiplies back, so the report
// value targets the normalized spectral sum at additive eps.
EstimateReport estimate_logdet(const MatrixOracle& a, const SpectralBounds& bounds,
                               const EstimateRequest& req);
EstimateReport estimate_trace_inverse(const MatrixOracle& a, const SpectralBounds& bounds,
                                      const EstimateRequest& req);
EstimateReport estimate_trace_power(const MatrixOracle& a, std::size_t p_exp,
                                    const EstimateRequest& req);
EstimateReport estimate_partition(const MatrixOracle& a, double beta,
                                  const EstimateRequest& req);

}  // namespace specsum

#endif
