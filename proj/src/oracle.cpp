#include "specsum/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "specsum/rng.hpp"

namespace specsum {

std::vector<EntryRef> row_of(const MatrixOracle& m, std::size_t i) {
  std::vector<EntryRef> out;
  m.row(i, out);
  return out;
}

std::vector<EntryRef> col_of(const MatrixOracle& m, std::size_t j) {
  std::vector<EntryRef> out;
  m.col(j, out);
  return out;
}

// ---- DenseOracle ----

DenseOracle::DenseOracle(DenseMatrix m, bool hermitian, std::optional<SpectralBounds> b)
    : m_(std::move(m)), hermitian_(hermitian), bounds_(b) {
  if (m_.rows() != m_.cols()) throw InputError("dense oracle: matrix not square");
  const std::size_t n = m_.rows();
  if (n == 0) throw InputError("dense oracle: empty matrix");
  rows_.resize(n);
  cols_.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const cplx v = m_(i, j);
      if (v != cplx(0.0, 0.0)) {
        rows_[i].push_back({j, v});
        cols_[j].push_back({i, v});
      }
    }
  std::size_t s = 1;  // floor so s^d complexity formulas never see s = 0
  for (std::size_t i = 0; i < n; ++i)
    s = std::max({s, rows_[i].size(), cols_[i].size()});
  sparsity_ = s;
}

cplx DenseOracle::entry(std::size_t i, std::size_t j) const {
  if (i >= dim() || j >= dim()) throw InputError("dense oracle: index out of range");
  return m_(i, j);
}

void DenseOracle::row(std::size_t i, std::vector<EntryRef>& out) const {
  if (i >= dim()) throw InputError("dense oracle: row index out of range");
  out = rows_[i];
}

void DenseOracle::col(std::size_t j, std::vector<EntryRef>& out) const {
  if (j >= dim()) throw InputError("dense oracle: col index out of range");
  out = cols_[j];
}

std::unique_ptr<DenseOracle> dense_backed(const DenseMatrix& m, std::optional<SpectralBounds> b) {
  if (m.rows() != m.cols()) throw InputError("dense_backed: matrix not square");
  const double dev = m.hermitian_deviation();
  if (!(dev <= 1e-12))
    throw InputError("dense_backed: matrix not Hermitian (max deviation " +
                     std::to_string(dev) + ")");
  // Canonicalize from the upper triangle so the oracle is exactly Hermitian.
  DenseMatrix c = m;
  for (std::size_t i = 0; i < c.rows(); ++i) {
    c(i, i) = cplx(c(i, i).real(), 0.0);
    for (std::size_t j = i + 1; j < c.cols(); ++j) c(j, i) = std::conj(c(i, j));
  }
  return std::make_unique<DenseOracle>(std::move(c), true, b);
}

std::unique_ptr<DenseOracle> dense_general(const DenseMatrix& m) {
  return std::make_unique<DenseOracle>(m, false, std::nullopt);
}

// ---- ScaledOracle ----

void ScaledOracle::row(std::size_t i, std::vector<EntryRef>& out) const {
  base_.row(i, out);
  for (auto& e : out) e.value *= factor_;
}

void ScaledOracle::col(std::size_t j, std::vector<EntryRef>& out) const {
  base_.col(j, out);
  for (auto& e : out) e.value *= factor_;
}

// ---- ProductOracle ----

ProductOracle::ProductOracle(const MatrixOracle& base, std::optional<SpectralBounds> b)
    : base_(base), bounds_(b) {
  const std::size_t s = base_.sparsity();  // <= dim, so s*s cannot overflow at any sane scale
  sparsity_ = std::min(s * s, base_.dim());
}

cplx ProductOracle::upper_entry(std::size_t i, std::size_t j) const {
  // (B B^dagger)(i,j) = <row_i(B), row_j(B)>; both rows are sorted by index.
  std::vector<EntryRef> ri, rj;
  base_.row(i, ri);
  base_.row(j, rj);
  cplx sum = 0.0;
  std::size_t a = 0, b = 0;
  while (a < ri.size() && b < rj.size()) {
    if (ri[a].index < rj[b].index)
      ++a;
    else if (ri[a].index > rj[b].index)
      ++b;
    else {
      sum += ri[a].value * std::conj(rj[b].value);
      ++a;
      ++b;
    }
  }
  return sum;
}

cplx ProductOracle::entry(std::size_t i, std::size_t j) const {
  if (i >= dim() || j >= dim()) throw InputError("product oracle: index out of range");
  return i <= j ? upper_entry(i, j) : std::conj(upper_entry(j, i));
}

void ProductOracle::row(std::size_t i, std::vector<EntryRef>& out) const {
  if (i >= dim()) throw InputError("product oracle: row index out of range");
  // Candidate columns j share at least one base column with row i.
  std::vector<EntryRef> ri, ck;
  base_.row(i, ri);
  std::vector<std::size_t> cand;
  for (const auto& e : ri) {
    base_.col(e.index, ck);
    for (const auto& c : ck) cand.push_back(c.index);
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  out.clear();
  for (std::size_t j : cand) {
    const cplx v = entry(i, j);
    if (v != cplx(0.0, 0.0)) out.push_back({j, v});
  }
}

void ProductOracle::col(std::size_t j, std::vector<EntryRef>& out) const {
  // Hermitian output: column j is the conjugate of row j.
  row(j, out);
  for (auto& e : out) e.value = std::conj(e.value);
}

// ---- Families ----

double diagonal_spectrum_value(std::size_t i, double kappa, std::uint64_t seed) {
  CounterRng rng(seed, i);
  return rng.next_double(1.0 / kappa, 1.0);
}

std::vector<double> diagonal_spectrum_values(std::size_t n, double kappa, std::uint64_t seed) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = diagonal_spectrum_value(i, kappa, seed);
  return v;
}

namespace {

class DiagonalSpectrumOracle final : public MatrixOracle {
 public:
  DiagonalSpectrumOracle(std::size_t n, double kappa, std::uint64_t seed)
      : n_(n), kappa_(kappa), seed_(seed) {}

  std::size_t dim() const override { return n_; }
  std::size_t sparsity() const override { return 1; }
  cplx entry(std::size_t i, std::size_t j) const override {
    if (i >= n_ || j >= n_) throw InputError("diagonal-spectrum: index out of range");
    return i == j ? cplx(diagonal_spectrum_value(i, kappa_, seed_), 0.0) : cplx(0.0, 0.0);
  }
  void row(std::size_t i, std::vector<EntryRef>& out) const override {
    if (i >= n_) throw InputError("diagonal-spectrum: index out of range");
    out.assign(1, {i, cplx(diagonal_spectrum_value(i, kappa_, seed_), 0.0)});
  }
  void col(std::size_t j, std::vector<EntryRef>& out) const override { row(j, out); }
  std::optional<SpectralBounds> bounds() const override {
    return SpectralBounds(1.0 / kappa_, 1.0);
  }

 private:
  std::size_t n_;
  double kappa_;
  std::uint64_t seed_;
};

class RingOracle final : public MatrixOracle {
 public:
  RingOracle(std::size_t n, double kappa) : n_(n), kappa_(kappa) {
    c0_ = (1.0 + 1.0 / kappa) / 2.0;
    c1_ = (1.0 - 1.0 / kappa) / 4.0;
  }

  std::size_t dim() const override { return n_; }
  std::size_t sparsity() const override { return c1_ != 0.0 ? 3 : 1; }
  cplx entry(std::size_t i, std::size_t j) const override {
    if (i >= n_ || j >= n_) throw InputError("ring: index out of range");
    if (i == j) return c0_;
    if ((i + 1) % n_ == j || (j + 1) % n_ == i) return c1_;
    return 0.0;
  }
  void row(std::size_t i, std::vector<EntryRef>& out) const override {
    if (i >= n_) throw InputError("ring: index out of range");
    out.clear();
    out.push_back({i, cplx(c0_, 0.0)});
    if (c1_ != 0.0) {
      out.push_back({(i + 1) % n_, cplx(c1_, 0.0)});
      out.push_back({(i + n_ - 1) % n_, cplx(c1_, 0.0)});
    }
    std::sort(out.begin(), out.end(),
              [](const EntryRef& a, const EntryRef& b) { return a.index < b.index; });
  }
  void col(std::size_t j, std::vector<EntryRef>& out) const override { row(j, out); }
  std::optional<SpectralBounds> bounds() const override {
    return SpectralBounds(1.0 / kappa_, 1.0);
  }

 private:
  std::size_t n_;
  double kappa_, c0_, c1_;
};

class BandedRandomOracle final : public MatrixOracle {
 public:
  BandedRandomOracle(std::size_t n, std::size_t w, double kappa, BandedMode mode,
                     std::uint64_t seed)
      : n_(n), w_(w), seed_(seed) {
    // True Gershgorin interval of the raw band matrix, then an affine map
    // A' = alpha A + beta I onto the declared target window.
    double gmin = 0.0, gmax = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double center = raw(i, i).real();
      double radius = 0.0;
      for (std::size_t j = band_lo(i); j <= band_hi(i); ++j)
        if (j != i) radius += std::abs(raw(i, j));
      const double lo = center - radius, hi = center + radius;
      if (i == 0 || lo < gmin) gmin = lo;
      if (i == 0 || hi > gmax) gmax = hi;
    }
    const double tlo = mode == BandedMode::positive ? 1.0 / kappa : -1.0;
    const double thi = 1.0;
    alpha_ = (thi - tlo) / std::max(gmax - gmin, 1e-12);
    beta_ = tlo - alpha_ * gmin;
    bounds_ = SpectralBounds(tlo, thi);
  }

  std::size_t dim() const override { return n_; }
  std::size_t sparsity() const override { return std::min(2 * w_ + 1, n_); }
  cplx entry(std::size_t i, std::size_t j) const override {
    if (i >= n_ || j >= n_) throw InputError("banded-random: index out of range");
    const std::size_t d = i > j ? i - j : j - i;
    if (d > w_) return 0.0;
    cplx v = alpha_ * raw(i, j);
    if (i == j) v += beta_;
    return v;
  }
  void row(std::size_t i, std::vector<EntryRef>& out) const override {
    if (i >= n_) throw InputError("banded-random: index out of range");
    out.clear();
    for (std::size_t j = band_lo(i); j <= band_hi(i); ++j) {
      const cplx v = entry(i, j);
      if (v != cplx(0.0, 0.0)) out.push_back({j, v});
    }
  }
  void col(std::size_t j, std::vector<EntryRef>& out) const override { row(j, out); }
  std::optional<SpectralBounds> bounds() const override { return bounds_; }

 private:
  std::size_t band_lo(std::size_t i) const { return i >= w_ ? i - w_ : 0; }
  std::size_t band_hi(std::size_t i) const { return std::min(i + w_, n_ - 1); }

  // Raw Hermitian band entry, a pure function of (seed, i, j).
  cplx raw(std::size_t i, std::size_t j) const {
    if (i > j) return std::conj(raw(j, i));
    CounterRng rng(seed_, i * n_ + j);
    const double re = rng.next_double(-1.0, 1.0);
    if (i == j) return cplx(re, 0.0);
    return cplx(re, rng.next_double(-1.0, 1.0));
  }

  std::size_t n_, w_;
  std::uint64_t seed_;
  double alpha_ = 1.0, beta_ = 0.0;
  SpectralBounds bounds_;
};

}  // namespace

std::unique_ptr<MatrixOracle> make_diagonal_spectrum(std::size_t n, double kappa,
                                                     std::uint64_t seed) {
  if (n == 0) throw InputError("diagonal-spectrum: N must be >= 1");
  if (kappa < 1.0) throw InputError("diagonal-spectrum: kappa must be >= 1");
  return std::make_unique<DiagonalSpectrumOracle>(n, kappa, seed);
}

std::unique_ptr<MatrixOracle> make_shifted_laplacian_ring(std::size_t n, double kappa) {
  if (n < 3) throw InputError("shifted-laplacian-ring: N must be >= 3");
  if (kappa < 1.0) throw InputError("shifted-laplacian-ring: kappa must be >= 1");
  return std::make_unique<RingOracle>(n, kappa);
}

std::vector<double> ring_spectrum_values(std::size_t n, double kappa) {
  const double c0 = (1.0 + 1.0 / kappa) / 2.0;
  const double c1 = (1.0 - 1.0 / kappa) / 4.0;
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k)
    v[k] = c0 + 2.0 * c1 * std::cos(2.0 * M_PI * double(k) / double(n));
  std::sort(v.begin(), v.end());
  return v;
}

std::unique_ptr<MatrixOracle> make_banded_random(std::size_t n, std::size_t bandwidth,
                                                 double kappa, BandedMode mode,
                                                 std::uint64_t seed) {
  if (n < 2) throw InputError("banded-random: N must be >= 2");
  if (bandwidth < 1) throw InputError("banded-random: bandwidth must be >= 1");
  if (mode == BandedMode::positive && kappa < 1.0)
    throw InputError("banded-random: kappa must be >= 1");
  return std::make_unique<BandedRandomOracle>(n, bandwidth, kappa, mode, seed);
}

// ---- HERM IO ----

namespace {

// Strips comments and yields whitespace-separated tokens.
std::vector<std::string> tokenize(std::istream& in) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string t;
    while (ls >> t) tokens.push_back(t);
  }
  return tokens;
}

std::size_t parse_index(const std::string& t, const char* what) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(t, &pos);
    if (pos != t.size() || v < 0) throw std::invalid_argument(t);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw InputError(std::string("malformed ") + what + ": '" + t + "'");
  }
}

double parse_real(const std::string& t, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(t, &pos);
    if (pos != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw InputError(std::string("malformed ") + what + ": '" + t + "'");
  }
}

}  // namespace

DenseMatrix load_herm(std::istream& in) {
  const auto tok = tokenize(in);
  if (tok.size() < 3 || tok[0] != "HERM") throw InputError("HERM: malformed header");
  const std::size_t n = parse_index(tok[1], "HERM dimension");
  if (n == 0) throw InputError("HERM: dimension must be >= 1");
  const bool counted = tok[2] != "-";
  const std::size_t body = (tok.size() - 3) / 4;
  if ((tok.size() - 3) % 4 != 0) throw InputError("HERM: truncated entry line");
  if (counted) {
    const std::size_t declared = parse_index(tok[2], "HERM entry count");
    if (declared != body)
      throw InputError("HERM: declared " + std::to_string(declared) + " entries, found " +
                       std::to_string(body));
  }
  DenseMatrix m(n, n);
  std::map<std::pair<std::size_t, std::size_t>, cplx> seen;
  for (std::size_t e = 0; e < body; ++e) {
    std::size_t i = parse_index(tok[3 + 4 * e], "HERM row index");
    std::size_t j = parse_index(tok[4 + 4 * e], "HERM col index");
    cplx v(parse_real(tok[5 + 4 * e], "HERM real part"),
           parse_real(tok[6 + 4 * e], "HERM imag part"));
    if (i >= n || j >= n) throw InputError("HERM: index out of range");
    if (i == j && v.imag() != 0.0)
      throw InputError("HERM: diagonal entry with nonzero imaginary part");
    if (i > j) {  // lower triangle: fold onto the upper by conjugation
      std::swap(i, j);
      v = std::conj(v);
    }
    const auto [it, fresh] = seen.emplace(std::make_pair(i, j), v);
    if (!fresh) {
      if (it->second != v)
        throw InputError("HERM: non-Hermitian duplicate at (" + std::to_string(i) + "," +
                         std::to_string(j) + ")");
      throw InputError("HERM: duplicate entry at (" + std::to_string(i) + "," +
                       std::to_string(j) + ")");
    }
    m(i, j) = v;
    m(j, i) = std::conj(v);
  }
  return m;
}

DenseMatrix load_herm_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  return load_herm(in);
}

void save_herm(std::ostream& out, const MatrixOracle& m) {
  const std::size_t n = m.dim();
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, cplx>> entries;
  std::vector<EntryRef> row;
  for (std::size_t i = 0; i < n; ++i) {
    m.row(i, row);
    for (const auto& e : row)
      if (e.index >= i) entries.push_back({{i, e.index}, e.value});
  }
  out << "HERM " << n << ' ' << entries.size() << '\n';
  out << std::setprecision(17);
  for (const auto& [ij, v] : entries)
    out << ij.first << ' ' << ij.second << ' ' << v.real() << ' ' << v.imag() << '\n';
}

void save_herm_file(const std::string& path, const MatrixOracle& m) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open file for writing: " + path);
  save_herm(out, m);
}

std::string peek_magic(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string t;
    if (ls >> t) return t;
  }
  throw InputError("empty file: " + path);
}

}  // namespace specsum
