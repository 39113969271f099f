#ifndef SPECSUM_LOCAL_HAM_HPP
#define SPECSUM_LOCAL_HAM_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "specsum/dense.hpp"
#include "specsum/estimator.hpp"
#include "specsum/oracle.hpp"
#include "specsum/rng.hpp"
#include "specsum/types.hpp"

namespace specsum {

inline constexpr std::size_t kMaxLocality = 10;  // blocks at most 1024 x 1024

// One k-local term: a dense Hermitian block on `support` (ascending qubit
// indices; qubit q is bit q of the basis index) with norm budget kappa.
struct LocalTerm {
  std::vector<std::size_t> support;
  DenseMatrix block;   // side 2^{support.size()}
  double kappa = 0.0;
};

// Normalized representation: constructors rescale blocks and budgets so
// sum kappa_i = 1 and keep the original scale S; estimates are mapped back to
// the caller's normalization (logdet + ln S, trinv / S, partition beta -> beta*S).
class LocalHamiltonian {
 public:
  // kappa <= 0 in a term means "use the block's spectral norm".
  LocalHamiltonian(std::size_t n, std::vector<LocalTerm> terms);

  std::size_t qubits() const { return n_; }
  std::size_t dim() const { return std::size_t(1) << n_; }
  const std::vector<LocalTerm>& terms() const { return terms_; }  // normalized
  double original_scale() const { return scale_; }

 private:
  std::size_t n_;
  std::vector<LocalTerm> terms_;
  double scale_;
};

// Entry of the term's block tensored with identity on the complement.
cplx term_entry(const LocalTerm& t, std::size_t n, std::size_t i, std::size_t j);

// Sparse oracle view of a single embedded term (row sparsity 2^k).
std::unique_ptr<MatrixOracle> term_oracle(const LocalTerm& t, std::size_t n);

// Full dense embedding sum_i dense(term_i) (desk scale).
DenseMatrix dense_embedding(const LocalHamiltonian& h);

struct TermSequence {
  std::vector<std::size_t> terms;  // x_1..x_l
  double q = 1.0;                  // product of the drawn kappas
};

// l iid draws with Pr[x = i] = kappa_i (normalized budgets).
TermSequence sample_term_sequence(const LocalHamiltonian& h, std::size_t l, CounterRng& rng);

// (H_{x_1} ... H_{x_l})(i, i); asserts |result| <= q(x) (1e-9 slack).
cplx local_product_diagonal(const LocalHamiltonian& h, const std::vector<std::size_t>& x,
                            std::size_t i);

// Importance-sampled estimate of (1/2^n) tr[p(H)] for |c_l| <= 1: per sample
// draw i uniform and a fresh term sequence per power; X_i = sum c_l Re[prod/q];
// T = sample_count(sum_l |c_l|, eps, delta) (the |X_i| <= deg+1 envelope, tightened
// to the realized coefficient mass).
EstimateReport estimate_local_poly_trace(const LocalHamiltonian& h, const Polynomial& p,
                                         const EstimateRequest& req);

// Complement per term: kappa_i I - block_i (each term must be PSD first).
LocalHamiltonian shift_complement(const LocalHamiltonian& h);

// Shifted-Taylor drivers (coefficients stay bounded by 1, so no pre-scaling;
// the approximation half of eps matches the global drivers).
EstimateReport estimate_local_logdet(const LocalHamiltonian& h, const SpectralBounds& bounds,
                                     const EstimateRequest& req);
EstimateReport estimate_local_trace_inverse(const LocalHamiltonian& h,
                                            const SpectralBounds& bounds,
                                            const EstimateRequest& req);
EstimateReport estimate_local_partition(const LocalHamiltonian& h, double beta,
                                        const EstimateRequest& req);

// ---- LOCALHAM text format ----
//   LOCALHAM <n> <m>
//   TERM <k> <q_1..q_k> <kappa_or_->    ('-': use the block norm)
//   4^k block entry lines `<re> <im>`, row-major
LocalHamiltonian load_localham(std::istream& in);
LocalHamiltonian load_localham_file(const std::string& path);
void save_localham(std::ostream& out, const LocalHamiltonian& h);
void save_localham_file(const std::string& path, const LocalHamiltonian& h);

}  // namespace specsum

#endif
