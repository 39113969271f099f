#ifndef SPECSUM_ORACLE_HPP
#define SPECSUM_ORACLE_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "specsum/dense.hpp"
#include "specsum/types.hpp"

namespace specsum {

// One nonzero of a row or column: (other index, value).
struct EntryRef {
  std::size_t index;
  cplx value;
};

// Sparse-access interface. `row` and `col` overwrite `out` with the nonzeros of
// the requested slice, sorted by index ascending; that ordering is part of the
// contract (the walkers rely on it for deterministic traversal). `sparsity` is
// an upper bound s on the nonzero count of every row and every column.
class MatrixOracle {
 public:
  virtual ~MatrixOracle() = default;
  virtual std::size_t dim() const = 0;
  virtual std::size_t sparsity() const = 0;
  virtual cplx entry(std::size_t i, std::size_t j) const = 0;
  virtual void row(std::size_t i, std::vector<EntryRef>& out) const = 0;
  virtual void col(std::size_t j, std::vector<EntryRef>& out) const = 0;
  // Declared spectral window [lo, hi]; nullopt when the producer cannot certify one.
  virtual std::optional<SpectralBounds> bounds() const { return std::nullopt; }
  virtual bool hermitian() const { return true; }
};

std::vector<EntryRef> row_of(const MatrixOracle& m, std::size_t i);
std::vector<EntryRef> col_of(const MatrixOracle& m, std::size_t j);

// Dense-matrix-backed oracle with precomputed nonzero structure.
class DenseOracle final : public MatrixOracle {
 public:
  DenseOracle(DenseMatrix m, bool hermitian, std::optional<SpectralBounds> b);

  std::size_t dim() const override { return m_.rows(); }
  std::size_t sparsity() const override { return sparsity_; }
  cplx entry(std::size_t i, std::size_t j) const override;
  void row(std::size_t i, std::vector<EntryRef>& out) const override;
  void col(std::size_t j, std::vector<EntryRef>& out) const override;
  std::optional<SpectralBounds> bounds() const override { return bounds_; }
  bool hermitian() const override { return hermitian_; }

  const DenseMatrix& dense() const { return m_; }

 private:
  DenseMatrix m_;
  bool hermitian_;
  std::optional<SpectralBounds> bounds_;
  std::size_t sparsity_ = 0;
  std::vector<std::vector<EntryRef>> rows_, cols_;
};

// Hermitian route: rejects matrices whose max |M(i,j) - conj(M(j,i))| exceeds
// 1e-12, then canonicalizes from the upper triangle so the stored matrix is
// exactly Hermitian (real diagonal included).
std::unique_ptr<DenseOracle> dense_backed(const DenseMatrix& m,
                                          std::optional<SpectralBounds> b = std::nullopt);

// General square route (no Hermitian check); used for circuit gadget blocks.
std::unique_ptr<DenseOracle> dense_general(const DenseMatrix& m);

// Entries of `base` multiplied by a real factor. Holds a reference: the base
// oracle must outlive the wrapper.
class ScaledOracle final : public MatrixOracle {
 public:
  ScaledOracle(const MatrixOracle& base, double factor,
               std::optional<SpectralBounds> b = std::nullopt)
      : base_(base), factor_(factor), bounds_(b) {}

  std::size_t dim() const override { return base_.dim(); }
  std::size_t sparsity() const override { return base_.sparsity(); }
  cplx entry(std::size_t i, std::size_t j) const override { return factor_ * base_.entry(i, j); }
  void row(std::size_t i, std::vector<EntryRef>& out) const override;
  void col(std::size_t j, std::vector<EntryRef>& out) const override;
  std::optional<SpectralBounds> bounds() const override { return bounds_; }
  bool hermitian() const override { return base_.hermitian(); }

 private:
  const MatrixOracle& base_;
  double factor_;
  std::optional<SpectralBounds> bounds_;
};

// Hermitian oracle for B * B^dagger built from sparse access to a square
// (generally non-Hermitian) B. Sparsity bound is s(B)^2. Entries for i > j are
// produced as conj(entry(j, i)) so the exposed matrix is exactly Hermitian.
// Holds a reference: `base` must outlive the wrapper.
class ProductOracle final : public MatrixOracle {
 public:
  ProductOracle(const MatrixOracle& base, std::optional<SpectralBounds> b = std::nullopt);

  std::size_t dim() const override { return base_.dim(); }
  std::size_t sparsity() const override { return sparsity_; }
  cplx entry(std::size_t i, std::size_t j) const override;
  void row(std::size_t i, std::vector<EntryRef>& out) const override;
  void col(std::size_t j, std::vector<EntryRef>& out) const override;
  std::optional<SpectralBounds> bounds() const override { return bounds_; }

 private:
  cplx upper_entry(std::size_t i, std::size_t j) const;  // requires i <= j

  const MatrixOracle& base_;
  std::optional<SpectralBounds> bounds_;
  std::size_t sparsity_;
};

// ---- Synthetic families (deterministic in the seed, dimension-lazy) ----

// Diagonal matrix with lambda_i drawn iid uniform from [1/kappa, 1]; entry i is
// a pure function of (seed, i) so huge N costs nothing up front.
std::unique_ptr<MatrixOracle> make_diagonal_spectrum(std::size_t n, double kappa,
                                                     std::uint64_t seed);
// The realized eigenvalue list (the analytic anchor used by tests).
std::vector<double> diagonal_spectrum_values(std::size_t n, double kappa, std::uint64_t seed);
double diagonal_spectrum_value(std::size_t i, double kappa, std::uint64_t seed);

// Circulant ring c0*I + c1*(S + S^-1) with c0 = (1 + 1/kappa)/2 and
// c1 = (1 - 1/kappa)/4; spectrum c0 + 2*c1*cos(2*pi*k/n) fills [1/kappa, 1].
std::unique_ptr<MatrixOracle> make_shifted_laplacian_ring(std::size_t n, double kappa);
std::vector<double> ring_spectrum_values(std::size_t n, double kappa);

enum class BandedMode { positive, centered };

// Random Hermitian band matrix (|i - j| <= bandwidth), affinely rescaled using
// its true Gershgorin interval so the spectrum is certified inside
// [1/kappa, 1] (positive) or [-1, 1] (centered).
std::unique_ptr<MatrixOracle> make_banded_random(std::size_t n, std::size_t bandwidth,
                                                 double kappa, BandedMode mode,
                                                 std::uint64_t seed);

// ---- HERM text format ----
//
//   # comment lines and blank lines are ignored
//   HERM <N> <entry-count-or-->
//   <i> <j> <re> <im>          one nonzero per line, upper triangle preferred
//
// Lower-triangle lines are folded onto the upper triangle by conjugation.
// Duplicate coordinates (after folding) and diagonal entries with a nonzero
// imaginary part are input errors; the writer emits the upper triangle only.
DenseMatrix load_herm(std::istream& in);
DenseMatrix load_herm_file(const std::string& path);
void save_herm(std::ostream& out, const MatrixOracle& m);
void save_herm_file(const std::string& path, const MatrixOracle& m);

// First non-comment token of a file ("HERM", "LOCALHAM", "GADGET", ...).
std::string peek_magic(const std::string& path);

}  // namespace specsum

#endif
