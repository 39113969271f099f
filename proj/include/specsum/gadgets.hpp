#ifndef SPECSUM_GADGETS_HPP
#define SPECSUM_GADGETS_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "specsum/dense.hpp"
#include "specsum/oracle.hpp"
#include "specsum/types.hpp"

namespace specsum {

inline constexpr std::size_t kGadgetScaleLimit = 4096;  // dense work cap

// Circuit description: N x N unitaries U_1..U_T on n qubits, N = 2^n. In this
// module "qubit 1" is the leftmost tensor factor (most significant bit of the
// basis index) — it is the clean/output qubit of the one-clean-qubit model.
struct CircuitGadget {
  std::size_t n = 1;
  std::vector<DenseMatrix> gates;  // each unitary at 1e-10, checked at build

  std::size_t dim() const { return std::size_t(1) << n; }
  std::size_t gate_count() const { return gates.size(); }
};

CircuitGadget make_gadget(std::size_t n, std::vector<DenseMatrix> gates);

// Named generators (identity, bit-flip, Hadamard on one qubit, controlled flip).
DenseMatrix gate_identity(std::size_t n);
DenseMatrix gate_x(std::size_t n, std::size_t qubit);
DenseMatrix gate_h(std::size_t n, std::size_t qubit);
DenseMatrix gate_cx(std::size_t n, std::size_t control, std::size_t target);

// Q = U_T ... U_1.
DenseMatrix circuit_product(const CircuitGadget& g);

// The (T+1)N x (T+1)N bidiagonal block matrix with identity diagonal blocks
// and superdiagonal blocks -U_T, ..., -U_1 (block row r holds -U_{T-r}).
// Block index b and inner index i pack as b*N + i. det(A) = 1.
class BlockMatrixOracle final : public MatrixOracle {
 public:
  explicit BlockMatrixOracle(const CircuitGadget& g);

  std::size_t dim() const override { return dim_; }
  std::size_t sparsity() const override { return sparsity_; }
  cplx entry(std::size_t i, std::size_t j) const override;
  void row(std::size_t i, std::vector<EntryRef>& out) const override;
  void col(std::size_t j, std::vector<EntryRef>& out) const override;
  bool hermitian() const override { return false; }

  const CircuitGadget& gadget() const { return g_; }

 private:
  CircuitGadget g_;
  std::size_t dim_, block_, sparsity_;
};

std::unique_ptr<BlockMatrixOracle> build_block_matrix(const CircuitGadget& g);

// A/2, whose singular values lie in [1/(2(T+1)), 1]; the hard inversion instance.
std::unique_ptr<MatrixOracle> build_scaled_block_matrix(const BlockMatrixOracle& a);

// (i,j) entry of block (r,c) of A^-1: delta block for r = c, the ordered gate
// product U_{T-r} ... U_{T-c+1} for r < c, zero for r > c.
cplx closed_form_inverse_entry(const CircuitGadget& g, std::size_t r, std::size_t c,
                               std::size_t i, std::size_t j);

// Determinant gadget: B = A + |t><s| (the rank-one entry sits at row t,
// column s, closing the block cycle so the matrix determinant lemma gives
// det(B) = 1 + A^-1(s,t)). The oracle exposes B_hat = B/3.
struct DetGadget {
  std::unique_ptr<MatrixOracle> b_hat;
  cplx predicted_det;        // 1 + A^-1(s,t), from the closed-form inverse
  double sigma_min_floor;    // c/(18 (T+1)^2) for the caller-supplied margin c
};

DetGadget build_det_gadget(const CircuitGadget& g, std::size_t s, std::size_t t,
                           double margin_c = 1.0 / 3.0);

// ---- Brandao's circuit-to-Hamiltonian construction ----

struct BrandaoParams {
  double j_in = 1.0, j_prop = 1.0;
};

// H = H_out + J_in H_in + J_prop H_prop on system (x) clock, clock a qudit of
// size T+1; combined index = system * (T+1) + t. H_out projects qubit 1 onto
// |0> at clock T with weight T+1; H_in projects qubit 1 onto |1> at clock 0;
// H_prop,t = I(x)|t-1><t-1| + I(x)|t><t| - U_t(x)|t><t-1| - U_t^dag(x)|t-1><t|.
DenseMatrix build_brandao_hamiltonian(const CircuitGadget& g, const BrandaoParams& params);

// Acceptance probability of the one-clean-qubit computation: input
// rho = |0><0|_1 (x) I/2^{n-1}, accept when qubit 1 measures 1 after Q.
double dqc1_mu_accept(const CircuitGadget& g);

struct SpectralSplitPoint {
  BrandaoParams params;
  double low_mean = 0.0;    // mean of the lowest 2^{n-1} eigenvalues
  double lambda_cut = 0.0;  // lambda_{2^{n-1}}
  double lambda_next = 0.0; // lambda_{2^{n-1}+1}
  // Norm bound (T+1) + J_in + 4 J_prop of the construction, recorded for reference.
  double kappa_documented = 0.0;
};

struct SpectralSplitReport {
  double mu_accept = 0.0, mu_reject = 0.0;
  std::vector<SpectralSplitPoint> sweep;
};

SpectralSplitReport spectral_split_report(const CircuitGadget& g,
                                          const std::vector<BrandaoParams>& sweep);

// ---- GADGET text format ----
//   GADGET <n> <T>
//   per gate: GATE I | GATE X <q> | GATE H <q> | GATE CX <c> <t> | GATE DENSE
//   (DENSE is followed by 4^n entry lines `<re> <im>`, row-major)
CircuitGadget load_gadget(std::istream& in);
CircuitGadget load_gadget_file(const std::string& path);
void save_gadget(std::ostream& out, const CircuitGadget& g);
void save_gadget_file(const std::string& path, const CircuitGadget& g);

}  // namespace specsum

#endif
