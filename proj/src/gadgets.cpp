#include "specsum/gadgets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "specsum/reference.hpp"
#include "specsum/walker.hpp"

namespace specsum {

namespace {

// Gate qubits are numbered 1..n with qubit 1 the most significant bit.
std::size_t qubit_bit(std::size_t n, std::size_t qubit) {
  if (qubit < 1 || qubit > n) throw InputError("gate: qubit index must be in [1, n]");
  return std::size_t(1) << (n - qubit);
}

double unitarity_deviation(const DenseMatrix& u) {
  const DenseMatrix p = u.adjoint() * u;
  double dev = 0.0;
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j)
      dev = std::max(dev, std::abs(p(i, j) - (i == j ? cplx(1.0) : cplx(0.0))));
  return dev;
}

}  // namespace

CircuitGadget make_gadget(std::size_t n, std::vector<DenseMatrix> gates) {
  if (n < 1) throw InputError("make_gadget: need at least one qubit");
  const std::size_t dim = std::size_t(1) << n;
  if (dim > kGadgetScaleLimit)
    throw GuardError("make_gadget: gate dimension exceeds the dense work cap");
  if (gates.empty()) throw InputError("make_gadget: need at least one gate");
  for (const auto& g : gates) {
    if (g.rows() != dim || g.cols() != dim)
      throw InputError("make_gadget: gate dimension mismatch");
    const double dev = unitarity_deviation(g);
    if (dev > 1e-10)
      throw InputError("make_gadget: gate is not unitary (deviation " + std::to_string(dev) + ")");
  }
  CircuitGadget out;
  out.n = n;
  out.gates = std::move(gates);
  return out;
}

DenseMatrix gate_identity(std::size_t n) { return DenseMatrix::identity(std::size_t(1) << n); }

DenseMatrix gate_x(std::size_t n, std::size_t qubit) {
  const std::size_t bit = qubit_bit(n, qubit);
  const std::size_t dim = std::size_t(1) << n;
  DenseMatrix m(dim, dim);
  for (std::size_t c = 0; c < dim; ++c) m(c ^ bit, c) = 1.0;
  return m;
}

DenseMatrix gate_h(std::size_t n, std::size_t qubit) {
  const std::size_t bit = qubit_bit(n, qubit);
  const std::size_t dim = std::size_t(1) << n;
  const double s = 1.0 / std::sqrt(2.0);
  DenseMatrix m(dim, dim);
  for (std::size_t c = 0; c < dim; ++c) {
    m(c & ~bit, c) = s;
    m(c | bit, c) = (c & bit) ? -s : s;
  }
  return m;
}

DenseMatrix gate_cx(std::size_t n, std::size_t control, std::size_t target) {
  if (control == target) throw InputError("gate_cx: control and target must differ");
  const std::size_t cb = qubit_bit(n, control);
  const std::size_t tb = qubit_bit(n, target);
  const std::size_t dim = std::size_t(1) << n;
  DenseMatrix m(dim, dim);
  for (std::size_t c = 0; c < dim; ++c) m((c & cb) ? (c ^ tb) : c, c) = 1.0;
  return m;
}

DenseMatrix circuit_product(const CircuitGadget& g) {
  DenseMatrix q = DenseMatrix::identity(g.dim());
  for (const auto& u : g.gates) q = u * q;
  return q;
}

// ---- block matrix oracle ----

BlockMatrixOracle::BlockMatrixOracle(const CircuitGadget& g) : g_(g) {
  block_ = g_.dim();
  dim_ = block_ * (g_.gate_count() + 1);
  // sparsity = 1 (diagonal) + worst row/column fill over the gates
  std::size_t fill = 0;
  for (const auto& u : g_.gates) {
    std::vector<std::size_t> rn(block_, 0), cn(block_, 0);
    for (std::size_t i = 0; i < block_; ++i)
      for (std::size_t j = 0; j < block_; ++j) {
        const cplx v = u(i, j);
        if (v.real() == 0.0 && v.imag() == 0.0) continue;
        ++rn[i];
        ++cn[j];
      }
    for (std::size_t i = 0; i < block_; ++i) fill = std::max({fill, rn[i], cn[i]});
  }
  sparsity_ = 1 + fill;
}

cplx BlockMatrixOracle::entry(std::size_t i, std::size_t j) const {
  if (i >= dim_ || j >= dim_) throw InputError("BlockMatrixOracle: index out of range");
  const std::size_t r = i / block_, c = j / block_;
  const std::size_t ii = i % block_, jj = j % block_;
  if (r == c) return ii == jj ? cplx(1.0) : cplx(0.0);
  if (c == r + 1) return -g_.gates[g_.gate_count() - 1 - r](ii, jj);
  return 0.0;
}

void BlockMatrixOracle::row(std::size_t i, std::vector<EntryRef>& out) const {
  if (i >= dim_) throw InputError("BlockMatrixOracle: row index out of range");
  out.clear();
  out.push_back({i, cplx(1.0)});
  const std::size_t r = i / block_;
  if (r == g_.gate_count()) return;
  const std::size_t ii = i % block_;
  const DenseMatrix& u = g_.gates[g_.gate_count() - 1 - r];
  for (std::size_t jj = 0; jj < block_; ++jj) {
    const cplx v = u(ii, jj);
    if (v.real() == 0.0 && v.imag() == 0.0) continue;
    out.push_back({(r + 1) * block_ + jj, -v});
  }
}

void BlockMatrixOracle::col(std::size_t j, std::vector<EntryRef>& out) const {
  if (j >= dim_) throw InputError("BlockMatrixOracle: column index out of range");
  out.clear();
  const std::size_t c = j / block_;
  if (c >= 1) {
    const std::size_t jj = j % block_;
    const DenseMatrix& u = g_.gates[g_.gate_count() - c];
    for (std::size_t ii = 0; ii < block_; ++ii) {
      const cplx v = u(ii, jj);
      if (v.real() == 0.0 && v.imag() == 0.0) continue;
      out.push_back({(c - 1) * block_ + ii, -v});
    }
  }
  out.push_back({j, cplx(1.0)});
}

std::unique_ptr<BlockMatrixOracle> build_block_matrix(const CircuitGadget& g) {
  return std::make_unique<BlockMatrixOracle>(g);
}

namespace {

// Owns its block matrix so the returned oracle is self-contained.
class HalfBlockOracle final : public MatrixOracle {
 public:
  explicit HalfBlockOracle(const CircuitGadget& g) : a_(g) {}
  std::size_t dim() const override { return a_.dim(); }
  std::size_t sparsity() const override { return a_.sparsity(); }
  cplx entry(std::size_t i, std::size_t j) const override { return 0.5 * a_.entry(i, j); }
  void row(std::size_t i, std::vector<EntryRef>& out) const override {
    a_.row(i, out);
    for (auto& e : out) e.value *= 0.5;
  }
  void col(std::size_t j, std::vector<EntryRef>& out) const override {
    a_.col(j, out);
    for (auto& e : out) e.value *= 0.5;
  }
  bool hermitian() const override { return false; }

 private:
  BlockMatrixOracle a_;
};

}  // namespace

std::unique_ptr<MatrixOracle> build_scaled_block_matrix(const BlockMatrixOracle& a) {
  return std::make_unique<HalfBlockOracle>(a.gadget());
}

cplx closed_form_inverse_entry(const CircuitGadget& g, std::size_t r, std::size_t c,
                               std::size_t i, std::size_t j) {
  const std::size_t t = g.gate_count();
  if (r > t || c > t) throw InputError("closed_form_inverse_entry: block index out of range");
  if (i >= g.dim() || j >= g.dim())
    throw InputError("closed_form_inverse_entry: inner index out of range");
  if (r > c) return 0.0;
  if (r == c) return i == j ? cplx(1.0) : cplx(0.0);
  std::vector<std::unique_ptr<DenseOracle>> gates;
  std::vector<const MatrixOracle*> chain;
  for (std::size_t b = r; b < c; ++b) {
    gates.push_back(dense_general(g.gates[t - 1 - b]));
    chain.push_back(gates.back().get());
  }
  return product_entry(chain, i, j).value;
}

// ---- determinant gadget ----

namespace {

class DetOracle final : public MatrixOracle {
 public:
  DetOracle(const CircuitGadget& g, std::size_t s, std::size_t t, double factor)
      : a_(g), s_(s), t_(t), f_(factor) {}

  std::size_t dim() const override { return a_.dim(); }
  std::size_t sparsity() const override { return a_.sparsity() + 1; }
  cplx entry(std::size_t i, std::size_t j) const override {
    cplx v = a_.entry(i, j);
    if (i == t_ && j == s_) v += 1.0;
    return f_ * v;
  }
  void row(std::size_t i, std::vector<EntryRef>& out) const override {
    a_.row(i, out);
    if (i == t_) insert(out, s_);
    for (auto& e : out) e.value *= f_;
  }
  void col(std::size_t j, std::vector<EntryRef>& out) const override {
    a_.col(j, out);
    if (j == s_) insert(out, t_);
    for (auto& e : out) e.value *= f_;
  }
  bool hermitian() const override { return false; }

 private:
  static void insert(std::vector<EntryRef>& out, std::size_t at) {
    auto it = std::lower_bound(out.begin(), out.end(), at,
                               [](const EntryRef& e, std::size_t v) { return e.index < v; });
    if (it != out.end() && it->index == at)
      it->value += 1.0;
    else
      out.insert(it, {at, cplx(1.0)});
  }

  BlockMatrixOracle a_;
  std::size_t s_, t_;
  double f_;
};

}  // namespace

DetGadget build_det_gadget(const CircuitGadget& g, std::size_t s, std::size_t t,
                           double margin_c) {
  const std::size_t dim = (g.gate_count() + 1) * g.dim();
  if (s >= dim || t >= dim) throw InputError("build_det_gadget: s or t out of range");
  if (!(margin_c > 0.0)) throw InputError("build_det_gadget: margin must be positive");
  DetGadget out;
  out.b_hat = std::make_unique<DetOracle>(g, s, t, 1.0 / 3.0);
  const std::size_t block = g.dim();
  out.predicted_det =
      cplx(1.0) + closed_form_inverse_entry(g, s / block, t / block, s % block, t % block);
  const double tp1 = double(g.gate_count() + 1);
  out.sigma_min_floor = margin_c / (18.0 * tp1 * tp1);
  return out;
}

// ---- Brandao's circuit-to-Hamiltonian construction ----

DenseMatrix build_brandao_hamiltonian(const CircuitGadget& g, const BrandaoParams& params) {
  const std::size_t n_sys = g.dim();
  const std::size_t clock = g.gate_count() + 1;
  const std::size_t dim = n_sys * clock;
  if (dim > kGadgetScaleLimit)
    throw GuardError("build_brandao_hamiltonian: dimension " + std::to_string(dim) +
                     " exceeds the dense work cap");
  const std::size_t msb = n_sys >> 1;  // bit of qubit 1
  const double t_final = double(clock);
  DenseMatrix h(dim, dim);
  auto idx = [clock](std::size_t sys, std::size_t t) { return sys * clock + t; };
  for (std::size_t x = 0; x < n_sys; ++x) {
    // H_out: (T+1) |0><0|_1 (x) I (x) |T><T|
    if (!(x & msb)) h(idx(x, clock - 1), idx(x, clock - 1)) += t_final;
    // J_in H_in: |1><1|_1 (x) I (x) |0><0|
    if (x & msb) h(idx(x, 0), idx(x, 0)) += params.j_in;
  }
  for (std::size_t t = 1; t < clock; ++t) {
    const DenseMatrix& u = g.gates[t - 1];
    for (std::size_t x = 0; x < n_sys; ++x) {
      h(idx(x, t - 1), idx(x, t - 1)) += params.j_prop;
      h(idx(x, t), idx(x, t)) += params.j_prop;
      for (std::size_t y = 0; y < n_sys; ++y) {
        const cplx v = u(x, y);
        if (v.real() == 0.0 && v.imag() == 0.0) continue;
        h(idx(x, t), idx(y, t - 1)) -= params.j_prop * v;
        h(idx(y, t - 1), idx(x, t)) -= params.j_prop * std::conj(v);
      }
    }
  }
  const double dev = h.hermitian_deviation();
  if (dev > 1e-12 * std::max(1.0, h.max_abs()))
    throw CheckError("build_brandao_hamiltonian: assembled matrix is not Hermitian");
  return h;
}

double dqc1_mu_accept(const CircuitGadget& g) {
  const DenseMatrix q = circuit_product(g);
  const std::size_t n_sys = g.dim();
  const std::size_t msb = n_sys >> 1;
  double acc = 0.0;
  for (std::size_t x = 0; x < n_sys; ++x) {
    if (x & msb) continue;  // input has qubit 1 in |0>
    for (std::size_t y = 0; y < n_sys; ++y) {
      if (!(y & msb)) continue;  // accept when qubit 1 reads 1
      acc += std::norm(q(y, x));
    }
  }
  return acc / double(n_sys / 2);
}

SpectralSplitReport spectral_split_report(const CircuitGadget& g,
                                          const std::vector<BrandaoParams>& sweep) {
  SpectralSplitReport rep;
  rep.mu_accept = dqc1_mu_accept(g);
  rep.mu_reject = 1.0 - rep.mu_accept;
  const std::size_t low = g.dim() / 2;  // 2^{n-1} witness states
  for (const auto& params : sweep) {
    const DenseMatrix h = build_brandao_hamiltonian(g, params);
    const Spectrum sp = eig_hermitian(h);
    if (sp.eigenvalues.size() < low + 1)
      throw InputError("spectral_split_report: need at least 2^{n-1}+1 eigenvalues");
    SpectralSplitPoint pt;
    pt.params = params;
    double mean = 0.0;
    for (std::size_t k = 0; k < low; ++k) mean += sp.eigenvalues[k];
    pt.low_mean = mean / double(low);
    pt.lambda_cut = sp.eigenvalues[low - 1];
    pt.lambda_next = sp.eigenvalues[low];
    pt.kappa_documented = double(g.gate_count() + 1) + params.j_in + 4.0 * params.j_prop;
    rep.sweep.push_back(pt);
  }
  return rep;
}

// ---- GADGET text format ----

CircuitGadget load_gadget(std::istream& in) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
  }
  std::size_t pos = 0;
  auto next = [&]() -> const std::string& {
    if (pos >= tokens.size()) throw InputError("GADGET parse: unexpected end of file");
    return tokens[pos++];
  };
  if (tokens.empty() || next() != "GADGET") throw InputError("GADGET parse: missing GADGET header");
  std::size_t n, t;
  try {
    n = std::stoul(next());
    t = std::stoul(next());
  } catch (const std::exception&) {
    throw InputError("GADGET parse: bad header field");
  }
  if (n < 1 || n > 12) throw InputError("GADGET parse: qubit count out of range");
  const std::size_t dim = std::size_t(1) << n;
  std::vector<DenseMatrix> gates;
  for (std::size_t gi = 0; gi < t; ++gi) {
    if (next() != "GATE") throw InputError("GADGET parse: expected GATE");
    const std::string kind = next();
    try {
      if (kind == "I") {
        gates.push_back(gate_identity(n));
      } else if (kind == "X") {
        gates.push_back(gate_x(n, std::stoul(next())));
      } else if (kind == "H") {
        gates.push_back(gate_h(n, std::stoul(next())));
      } else if (kind == "CX") {
        const std::size_t c = std::stoul(next());
        const std::size_t tg = std::stoul(next());
        gates.push_back(gate_cx(n, c, tg));
      } else if (kind == "DENSE") {
        DenseMatrix m(dim, dim);
        for (std::size_t r = 0; r < dim; ++r)
          for (std::size_t c = 0; c < dim; ++c) {
            const double re = std::stod(next());
            const double im = std::stod(next());
            m(r, c) = {re, im};
          }
        gates.push_back(std::move(m));
      } else {
        throw InputError("GADGET parse: unknown gate kind " + kind);
      }
    } catch (const InputError&) {
      throw;
    } catch (const std::exception&) {
      throw InputError("GADGET parse: bad gate field");
    }
  }
  if (pos != tokens.size()) throw InputError("GADGET parse: trailing tokens");
  return make_gadget(n, std::move(gates));
}

CircuitGadget load_gadget_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return load_gadget(in);
}

void save_gadget(std::ostream& out, const CircuitGadget& g) {
  out << "GADGET " << g.n << ' ' << g.gate_count() << '\n';
  for (const auto& u : g.gates) {
    out << "GATE DENSE\n";
    for (std::size_t r = 0; r < u.rows(); ++r)
      for (std::size_t c = 0; c < u.cols(); ++c)
        out << std::setprecision(17) << u(r, c).real() << ' ' << u(r, c).imag() << '\n';
  }
}

void save_gadget_file(const std::string& path, const CircuitGadget& g) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path + " for writing");
  save_gadget(out, g);
}

}  // namespace specsum
