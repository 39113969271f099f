#include "specsum/local_ham.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "specsum/kahan.hpp"
#include "specsum/reference.hpp"
#include "specsum/walker.hpp"

namespace specsum {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::size_t support_mask(const LocalTerm& t) {
  std::size_t m = 0;
  for (std::size_t q : t.support) m |= std::size_t(1) << q;
  return m;
}

std::size_t local_bits(const LocalTerm& t, std::size_t i) {
  std::size_t b = 0;
  for (std::size_t p = 0; p < t.support.size(); ++p)
    b |= ((i >> t.support[p]) & std::size_t(1)) << p;
  return b;
}

std::size_t scatter_bits(const LocalTerm& t, std::size_t base, std::size_t c) {
  for (std::size_t p = 0; p < t.support.size(); ++p)
    base |= ((c >> p) & std::size_t(1)) << t.support[p];
  return base;
}

double block_norm(const DenseMatrix& block) {
  const Spectrum sp = eig_hermitian(block);
  double norm = 0.0;
  for (double l : sp.eigenvalues) norm = std::max(norm, std::abs(l));
  return norm;
}

}  // namespace

LocalHamiltonian::LocalHamiltonian(std::size_t n, std::vector<LocalTerm> terms)
    : n_(n), terms_(std::move(terms)), scale_(0.0) {
  if (n_ == 0 || n_ > 62) throw InputError("LocalHamiltonian: qubit count must be in [1, 62]");
  if (terms_.empty()) throw InputError("LocalHamiltonian: at least one term is required");
  double total = 0.0;
  for (auto& t : terms_) {
    if (t.support.size() > kMaxLocality)
      throw InputError("LocalHamiltonian: term locality exceeds " +
                       std::to_string(kMaxLocality));
    for (std::size_t p = 0; p < t.support.size(); ++p) {
      if (t.support[p] >= n_) throw InputError("LocalHamiltonian: support qubit out of range");
      if (p > 0 && t.support[p] <= t.support[p - 1])
        throw InputError("LocalHamiltonian: support must be strictly ascending");
    }
    const std::size_t side = std::size_t(1) << t.support.size();
    if (t.block.rows() != side || t.block.cols() != side)
      throw InputError("LocalHamiltonian: block side must be 2^|support|");
    if (t.block.hermitian_deviation() > 1e-12 * std::max(1.0, t.block.max_abs()))
      throw InputError("LocalHamiltonian: term block is not Hermitian");
    const double norm = block_norm(t.block);
    if (t.kappa <= 0.0) {
      t.kappa = norm;
    } else if (norm > t.kappa * (1.0 + 1e-9)) {
      throw InputError("LocalHamiltonian: block spectral norm " + std::to_string(norm) +
                       " exceeds its budget " + std::to_string(t.kappa));
    }
    total += t.kappa;
  }
  if (!(total > 0.0)) throw InputError("LocalHamiltonian: total norm budget must be positive");
  scale_ = total;
  for (auto& t : terms_) {
    t.kappa /= total;
    t.block = t.block.scaled(1.0 / total);
  }
}

cplx term_entry(const LocalTerm& t, std::size_t n, std::size_t i, std::size_t j) {
  const std::size_t dim = std::size_t(1) << n;
  if (i >= dim || j >= dim) throw InputError("term_entry: index out of range");
  const std::size_t mask = support_mask(t);
  if ((i ^ j) & ~mask) return 0.0;
  return t.block(local_bits(t, i), local_bits(t, j));
}

namespace {

class EmbeddedTermOracle final : public MatrixOracle {
 public:
  EmbeddedTermOracle(LocalTerm t, std::size_t n) : t_(std::move(t)), n_(n) {}
  std::size_t dim() const override { return std::size_t(1) << n_; }
  std::size_t sparsity() const override { return std::size_t(1) << t_.support.size(); }
  cplx entry(std::size_t i, std::size_t j) const override { return term_entry(t_, n_, i, j); }
  void row(std::size_t i, std::vector<EntryRef>& out) const override {
    out.clear();
    if (i >= dim()) throw InputError("term oracle: row index out of range");
    const std::size_t bi = local_bits(t_, i);
    const std::size_t base = i & ~support_mask(t_);
    const std::size_t fan = std::size_t(1) << t_.support.size();
    for (std::size_t c = 0; c < fan; ++c) {
      const cplx v = t_.block(bi, c);
      if (v.real() == 0.0 && v.imag() == 0.0) continue;
      out.push_back({scatter_bits(t_, base, c), v});
    }
  }
  void col(std::size_t j, std::vector<EntryRef>& out) const override {
    row(j, out);
    for (auto& e : out) e.value = std::conj(e.value);
  }

 private:
  LocalTerm t_;
  std::size_t n_;
};

}  // namespace

std::unique_ptr<MatrixOracle> term_oracle(const LocalTerm& t, std::size_t n) {
  for (std::size_t q : t.support)
    if (q >= n) throw InputError("term_oracle: support qubit out of range");
  return std::make_unique<EmbeddedTermOracle>(t, n);
}

DenseMatrix dense_embedding(const LocalHamiltonian& h) {
  const std::size_t dim = h.dim();
  if (dim > kDenseScaleLimit)
    throw GuardError("dense_embedding: dimension " + std::to_string(dim) +
                     " exceeds the dense scale guard");
  DenseMatrix out(dim, dim);
  for (const auto& t : h.terms()) {
    const std::size_t mask = support_mask(t);
    const std::size_t fan = std::size_t(1) << t.support.size();
    // Iterate base patterns on the complement qubits.
    for (std::size_t base = 0;; base = ((base | mask) + 1) & ~mask) {
      for (std::size_t bi = 0; bi < fan; ++bi)
        for (std::size_t bj = 0; bj < fan; ++bj)
          out(scatter_bits(t, base, bi), scatter_bits(t, base, bj)) += t.block(bi, bj);
      if (((base | mask) + 1) >= dim) break;
    }
  }
  return out;
}

TermSequence sample_term_sequence(const LocalHamiltonian& h, std::size_t l, CounterRng& rng) {
  if (l < 1) throw InputError("sample_term_sequence: length must be at least 1");
  const auto& terms = h.terms();
  TermSequence out;
  out.terms.resize(l);
  for (std::size_t t = 0; t < l; ++t) {
    const double u = rng.next_double();
    double run = 0.0;
    std::size_t idx = terms.size() - 1;
    for (std::size_t j = 0; j < terms.size(); ++j) {
      run += terms[j].kappa;
      if (u < run) {
        idx = j;
        break;
      }
    }
    out.terms[t] = idx;
    out.q *= terms[idx].kappa;
  }
  return out;
}

// ---- propagation tables ----

namespace {

struct TermRows {
  std::vector<std::uint32_t> off;  // dim + 1
  std::vector<std::uint32_t> col;
  std::vector<double> re, im;
};

TermRows build_rows(const LocalTerm& t, std::size_t n) {
  const std::size_t dim = std::size_t(1) << n;
  const std::size_t fan = std::size_t(1) << t.support.size();
  const std::size_t mask = support_mask(t);
  TermRows r;
  r.off.resize(dim + 1, 0);
  for (std::size_t i = 0; i < dim; ++i) {
    r.off[i] = static_cast<std::uint32_t>(r.col.size());
    const std::size_t bi = local_bits(t, i);
    const std::size_t base = i & ~mask;
    for (std::size_t c = 0; c < fan; ++c) {
      const cplx v = t.block(bi, c);
      if (v.real() == 0.0 && v.imag() == 0.0) continue;
      r.col.push_back(static_cast<std::uint32_t>(scatter_bits(t, base, c)));
      r.re.push_back(v.real());
      r.im.push_back(v.imag());
    }
  }
  r.off[dim] = static_cast<std::uint32_t>(r.col.size());
  return r;
}

// w <- H u by column scatter: column c of the Hermitian term is the conjugate
// of its row c, so exact zeros in u are skipped cheaply.
void apply_term(const TermRows& tr, std::size_t dim, const double* ur, const double* ui,
                double* wr, double* wi, std::uint64_t& touched) {
  std::fill(wr, wr + dim, 0.0);
  std::fill(wi, wi + dim, 0.0);
  for (std::size_t c = 0; c < dim; ++c) {
    const double xr = ur[c], xi = ui[c];
    if (xr == 0.0 && xi == 0.0) continue;
    const std::uint32_t lo = tr.off[c], hi = tr.off[c + 1];
    touched += hi - lo;
    for (std::uint32_t e = lo; e < hi; ++e) {
      const std::uint32_t w = tr.col[e];
      const double vr = tr.re[e], vi = -tr.im[e];
      wr[w] += vr * xr - vi * xi;
      wi[w] += vr * xi + vi * xr;
    }
  }
}

struct PropagationBuffers {
  std::vector<double> ur, ui, wr, wi;
  std::vector<std::uint32_t> seq;
  explicit PropagationBuffers(std::size_t dim, std::size_t maxlen)
      : ur(dim), ui(dim), wr(dim), wi(dim), seq(maxlen) {}
};

// (H_{x_1} ... H_{x_l})(i,i) via dense vector propagation over the tables.
cplx propagate_product(const std::vector<TermRows>& rows, std::size_t dim,
                       const std::uint32_t* seq, std::size_t l, std::size_t i,
                       PropagationBuffers& buf, std::uint64_t& touched) {
  std::fill(buf.ur.begin(), buf.ur.end(), 0.0);
  std::fill(buf.ui.begin(), buf.ui.end(), 0.0);
  buf.ur[i] = 1.0;
  for (std::size_t t = l; t-- > 0;) {
    apply_term(rows[seq[t]], dim, buf.ur.data(), buf.ui.data(), buf.wr.data(),
               buf.wi.data(), touched);
    buf.ur.swap(buf.wr);
    buf.ui.swap(buf.wi);
  }
  return {buf.ur[i], buf.ui[i]};
}

constexpr std::size_t kFastQubitLimit = 12;  // dense propagation up to 4096 dims

}  // namespace

cplx local_product_diagonal(const LocalHamiltonian& h, const std::vector<std::size_t>& x,
                            std::size_t i) {
  if (x.empty()) throw InputError("local_product_diagonal: empty sequence");
  if (i >= h.dim()) throw InputError("local_product_diagonal: index out of range");
  double q = 1.0;
  for (std::size_t t : x) {
    if (t >= h.terms().size()) throw InputError("local_product_diagonal: term index out of range");
    q *= h.terms()[t].kappa;
  }
  cplx value;
  std::uint64_t touched = 0;
  if (h.qubits() <= kFastQubitLimit) {
    std::vector<TermRows> rows;
    rows.reserve(h.terms().size());
    for (const auto& t : h.terms()) rows.push_back(build_rows(t, h.qubits()));
    std::vector<std::uint32_t> seq(x.begin(), x.end());
    PropagationBuffers buf(h.dim(), x.size());
    value = propagate_product(rows, h.dim(), seq.data(), x.size(), i, buf, touched);
  } else {
    std::vector<std::unique_ptr<MatrixOracle>> oracles;
    std::vector<const MatrixOracle*> chain;
    for (const auto& t : h.terms()) oracles.push_back(term_oracle(t, h.qubits()));
    for (std::size_t t : x) chain.push_back(oracles[t].get());
    value = product_entry(chain, i, i).value;
  }
  const double bound = q * (1.0 + 1e-9) + 1e-300;
  if (std::norm(value) > bound * bound)
    throw CheckError("local_product_diagonal: |product| " + std::to_string(std::abs(value)) +
                     " exceeds its importance weight " + std::to_string(q));
  return value;
}

// ---- the importance-sampled estimator ----

EstimateReport estimate_local_poly_trace(const LocalHamiltonian& h, const Polynomial& p,
                                         const EstimateRequest& req) {
  const auto t0 = Clock::now();
  req.validate();
  const std::vector<double>& c = p.coeffs;
  for (double v : c)
    if (std::abs(v) > 1.0 + 1e-12)
      throw InputError("estimate_local_poly_trace: coefficient magnitude exceeds 1");
  const std::size_t d = p.degree();

  // Drop a coefficient tail whose mass is below 1% of the accuracy budget: the
  // bias is negligible against eps and the deepest products are the costly ones.
  std::vector<double> suffix(d + 2, 0.0);
  for (std::size_t l = d + 1; l-- > 1;)
    suffix[l] = suffix[l + 1] + (l < c.size() ? std::abs(c[l]) : 0.0);
  std::size_t l_eff = d;
  while (l_eff > 0 && suffix[l_eff] <= req.eps * 0.01) --l_eff;

  double halfwidth = c.empty() ? 0.0 : std::abs(c[0]);
  for (std::size_t l = 1; l <= l_eff && l < c.size(); ++l) halfwidth += std::abs(c[l]);
  const std::uint64_t t =
      req.sample_override ? *req.sample_override
                          : sample_count(std::max(halfwidth, 1e-12), req.eps, req.delta);

  const std::size_t dim = h.dim();
  const auto& terms = h.terms();
  const std::size_t m = terms.size();
  std::vector<double> cum(m), kap(m);
  {
    double run = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      kap[j] = terms[j].kappa;
      run += kap[j];
      cum[j] = run;
    }
  }
  const bool fast = h.qubits() <= kFastQubitLimit;
  std::vector<TermRows> rows;
  std::vector<std::unique_ptr<MatrixOracle>> oracles;
  if (fast) {
    rows.reserve(m);
    for (const auto& term : terms) rows.push_back(build_rows(term, h.qubits()));
  } else {
    for (const auto& term : terms) oracles.push_back(term_oracle(term, h.qubits()));
  }

  const int threads = std::max(1, req.workers);
  constexpr std::uint64_t kBlock = 4096;
  const std::uint64_t nblocks = (t + kBlock - 1) / kBlock;
  std::vector<double> block(nblocks);
  std::uint64_t queries = 0;
  const std::int64_t nb = static_cast<std::int64_t>(nblocks);
  // Exceptions (the |X| envelope check, walker guards) may not unwind through
  // the parallel region: capture the first one and rethrow after the join.
  std::exception_ptr err = nullptr;
  std::atomic<bool> failed{false};
#pragma omp parallel for schedule(dynamic) num_threads(threads) reduction(+ : queries) if(threads > 1)
  for (std::int64_t b = 0; b < nb; ++b) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
    PropagationBuffers buf(fast ? dim : 1, d + 1);
    std::vector<const MatrixOracle*> chain(d + 1);
    NeumaierSum acc;
    std::uint64_t q_count = 0;
    const std::uint64_t begin = static_cast<std::uint64_t>(b) * kBlock;
    const std::uint64_t end = std::min(t, begin + kBlock);
    for (std::uint64_t s = begin; s < end; ++s) {
      CounterRng rng(req.seed, s);
      const std::size_t i = rng.next_index(dim);
      double x = c.empty() ? 0.0 : c[0];
      for (std::size_t l = 1; l <= l_eff && l < c.size(); ++l) {
        if (c[l] == 0.0) continue;
        double qx = 1.0;
        for (std::size_t step = 0; step < l; ++step) {
          const double u = rng.next_double();
          std::size_t idx = m - 1;
          for (std::size_t j = 0; j < m; ++j)
            if (u < cum[j]) {
              idx = j;
              break;
            }
          buf.seq[step] = static_cast<std::uint32_t>(idx);
          qx *= kap[idx];
        }
        cplx prod;
        if (fast) {
          prod = propagate_product(rows, dim, buf.seq.data(), l, i, buf, q_count);
        } else {
          for (std::size_t step = 0; step < l; ++step) chain[step] = oracles[buf.seq[step]].get();
          chain.resize(l);
          const WalkValue wv = product_entry(chain, i, i);
          chain.resize(d + 1);
          prod = wv.value;
          q_count += wv.query_count;
        }
        const double bound = qx * (1.0 + 1e-9) + 1e-300;
        if (std::norm(prod) > bound * bound)
          throw CheckError("estimate_local_poly_trace: a realized |X^(l)| exceeded 1");
        x += c[l] * (prod.real() / qx);
      }
      acc.add(x);
    }
    block[b] = acc.value();
    queries += q_count;
    } catch (...) {
#pragma omp critical(specsum_local_sample_err)
      {
        if (!failed.exchange(true)) err = std::current_exception();
      }
    }
  }
  if (err) std::rethrow_exception(err);
  NeumaierSum total;
  for (double v : block) total.add(v);

  EstimateReport rep;
  rep.value = total.value() / double(t);
  rep.eps = req.eps;
  rep.delta = req.delta;
  rep.samples = t;
  rep.degree = d;
  rep.method = "direct";
  rep.scale = 1.0;
  rep.queries = queries;
  rep.seed = req.seed;
  rep.elapsed_ms = ms_since(t0);
  return rep;
}

LocalHamiltonian shift_complement(const LocalHamiltonian& h) {
  std::vector<LocalTerm> shifted;
  shifted.reserve(h.terms().size());
  for (const auto& t : h.terms()) {
    const Spectrum sp = eig_hermitian(t.block);
    if (!sp.eigenvalues.empty() && sp.eigenvalues.front() < -1e-9)
      throw InputError("shift_complement: a term is not positive semidefinite (min eigenvalue " +
                       std::to_string(sp.eigenvalues.front()) + ")");
    LocalTerm s;
    s.support = t.support;
    s.kappa = t.kappa;
    const std::size_t side = t.block.rows();
    s.block = DenseMatrix::identity(side).scaled(t.kappa) - t.block;
    shifted.push_back(std::move(s));
  }
  return LocalHamiltonian(h.qubits(), std::move(shifted));
}

// ---- drivers ----

namespace {

void require_taylor(const EstimateRequest& req, const char* what) {
  if (req.method == Method::chebyshev)
    throw InputError(std::string(what) + ": only the taylor method is available for local drivers");
}

}  // namespace

EstimateReport estimate_local_logdet(const LocalHamiltonian& h, const SpectralBounds& bounds,
                                     const EstimateRequest& req) {
  const auto t0 = Clock::now();
  req.validate();
  require_taylor(req, "estimate_local_logdet");
  const double s = h.original_scale();
  const SpectralBounds nb{bounds.lo / s, bounds.hi / s};
  if (!nb.positive()) throw InputError("estimate_local_logdet: spectral floor must be positive");
  if (nb.hi > 1.0 + 1e-12)
    throw InputError("estimate_local_logdet: normalized spectrum must lie within [1/kappa, 1]");
  const double kappa = nb.kappa();
  const Polynomial core = taylor_log(kappa, req.eps / 2.0);
  const Polynomial pz = make_monomial(core.stable, 0.0, 1.0 - 1.0 / kappa);
  const LocalHamiltonian hhat = shift_complement(h);
  EstimateRequest sub = req;
  sub.eps = req.eps / 2.0;
  EstimateReport rep = estimate_local_poly_trace(hhat, pz, sub);
  rep.value += std::log(s);
  rep.eps = req.eps;
  rep.method = "taylor";
  if (nb.hi <= 1.0 - 1.0 / kappa + 1e-12) rep.relative_bound = req.eps * kappa;
  rep.elapsed_ms = ms_since(t0);
  return rep;
}

EstimateReport estimate_local_trace_inverse(const LocalHamiltonian& h,
                                            const SpectralBounds& bounds,
                                            const EstimateRequest& req) {
  const auto t0 = Clock::now();
  req.validate();
  require_taylor(req, "estimate_local_trace_inverse");
  const double s = h.original_scale();
  const SpectralBounds nb{bounds.lo / s, bounds.hi / s};
  if (!nb.positive())
    throw InputError("estimate_local_trace_inverse: spectral floor must be positive");
  if (nb.hi > 1.0 + 1e-12)
    throw InputError("estimate_local_trace_inverse: normalized spectrum must lie within [1/kappa, 1]");
  const double kappa = nb.kappa();
  const Polynomial core = taylor_inverse(kappa, req.eps * s / 2.0);
  const Polynomial pz = make_monomial(core.stable, 0.0, 1.0 - 1.0 / kappa);
  const LocalHamiltonian hhat = shift_complement(h);
  EstimateRequest sub = req;
  sub.eps = req.eps * s / 2.0;
  EstimateReport rep = estimate_local_poly_trace(hhat, pz, sub);
  rep.value /= s;
  rep.eps = req.eps;
  rep.method = "taylor";
  rep.scale = 1.0 / s;
  rep.elapsed_ms = ms_since(t0);
  return rep;
}

EstimateReport estimate_local_partition(const LocalHamiltonian& h, double beta,
                                        const EstimateRequest& req) {
  const auto t0 = Clock::now();
  req.validate();
  require_taylor(req, "estimate_local_partition");
  if (!(beta > 0.0)) throw InputError("estimate_local_partition: beta must be positive");
  const double bp = beta * h.original_scale();
  if (bp > 700.0) throw GuardError("estimate_local_partition: beta * scale > 700 overflows e^beta");
  const double eb = std::exp(bp);
  const double sub_eps = req.eps / (2.0 * eb);
  Polynomial pe = taylor_exp(bp, sub_eps);
  for (auto& v : pe.coeffs) v /= eb;
  for (auto& v : pe.stable) v /= eb;
  pe.cert_sup /= eb;
  pe.cert_error /= eb;
  EstimateRequest sub = req;
  sub.eps = sub_eps;
  EstimateReport rep = estimate_local_poly_trace(h, pe, sub);
  rep.value *= eb;
  rep.eps = req.eps;
  rep.method = "taylor";
  rep.scale = eb;
  rep.elapsed_ms = ms_since(t0);
  return rep;
}

// ---- LOCALHAM text format ----

LocalHamiltonian load_localham(std::istream& in) {
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
    if (pos >= tokens.size()) throw InputError("LOCALHAM parse: unexpected end of file");
    return tokens[pos++];
  };
  if (tokens.empty() || next() != "LOCALHAM")
    throw InputError("LOCALHAM parse: missing LOCALHAM header");
  std::size_t n, m;
  try {
    n = std::stoul(next());
    m = std::stoul(next());
  } catch (const std::exception&) {
    throw InputError("LOCALHAM parse: bad header field");
  }
  std::vector<LocalTerm> terms;
  for (std::size_t t = 0; t < m; ++t) {
    if (next() != "TERM") throw InputError("LOCALHAM parse: expected TERM");
    LocalTerm term;
    std::size_t k;
    try {
      k = std::stoul(next());
    } catch (const std::exception&) {
      throw InputError("LOCALHAM parse: bad locality");
    }
    if (k > kMaxLocality) throw InputError("LOCALHAM parse: locality exceeds the cap");
    term.support.resize(k);
    for (std::size_t p = 0; p < k; ++p) {
      try {
        term.support[p] = std::stoul(next());
      } catch (const std::exception&) {
        throw InputError("LOCALHAM parse: bad support index");
      }
    }
    const std::string& ktok = next();
    if (ktok == "-") {
      term.kappa = -1.0;
    } else {
      try {
        term.kappa = std::stod(ktok);
      } catch (const std::exception&) {
        throw InputError("LOCALHAM parse: bad kappa " + ktok);
      }
    }
    const std::size_t side = std::size_t(1) << k;
    term.block = DenseMatrix(side, side);
    for (std::size_t r = 0; r < side; ++r)
      for (std::size_t cc = 0; cc < side; ++cc) {
        double re, im;
        try {
          re = std::stod(next());
          im = std::stod(next());
        } catch (const std::exception&) {
          throw InputError("LOCALHAM parse: bad block entry");
        }
        term.block(r, cc) = {re, im};
      }
    terms.push_back(std::move(term));
  }
  if (pos != tokens.size()) throw InputError("LOCALHAM parse: trailing tokens");
  return LocalHamiltonian(n, std::move(terms));
}

LocalHamiltonian load_localham_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return load_localham(in);
}

void save_localham(std::ostream& out, const LocalHamiltonian& h) {
  const double s = h.original_scale();
  out << "LOCALHAM " << h.qubits() << ' ' << h.terms().size() << '\n';
  for (const auto& t : h.terms()) {
    out << "TERM " << t.support.size();
    for (std::size_t q : t.support) out << ' ' << q;
    out << ' ' << std::setprecision(17) << t.kappa * s << '\n';
    const std::size_t side = t.block.rows();
    for (std::size_t r = 0; r < side; ++r)
      for (std::size_t c = 0; c < side; ++c) {
        const cplx v = t.block(r, c) * s;
        out << std::setprecision(17) << v.real() << ' ' << v.imag() << '\n';
      }
  }
}

void save_localham_file(const std::string& path, const LocalHamiltonian& h) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path + " for writing");
  save_localham(out, h);
}

}  // namespace specsum
