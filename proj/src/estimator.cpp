#include "specsum/estimator.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <vector>

#include "specsum/kahan.hpp"
#include "specsum/rng.hpp"
#include "specsum/walker.hpp"

namespace specsum {

void EstimateRequest::validate() const {
  if (!(eps > 0.0 && eps < 1.0)) throw InputError("estimate: eps must be in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("estimate: delta must be in (0,1)");
  if (sample_override && *sample_override == 0)
    throw InputError("estimate: sample override must be at least 1");
}

namespace {

constexpr std::uint64_t kSampleBlock = 4096;

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct CoreResult {
  double mean = 0.0;
  std::uint64_t queries = 0;
};

// Fixed-size sample blocks, Neumaier-compensated within each block and across
// blocks in ascending order: the result is bit-identical for any worker count.
template <class ValueFn>
CoreResult block_sample(std::size_t n, std::uint64_t t, std::uint64_t seed, int threads,
                        ValueFn&& value_at) {
  const std::uint64_t nblocks = (t + kSampleBlock - 1) / kSampleBlock;
  std::vector<double> block(nblocks);
  std::uint64_t queries = 0;
  const std::int64_t nb = static_cast<std::int64_t>(nblocks);
  // Exceptions (guard/check failures) may not unwind through the parallel
  // region: capture the first one and rethrow after the join.
  std::exception_ptr err = nullptr;
  std::atomic<bool> failed{false};
#pragma omp parallel for schedule(dynamic) num_threads(threads) reduction(+ : queries) if(threads > 1)
  for (std::int64_t b = 0; b < nb; ++b) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      NeumaierSum acc;
      std::uint64_t q = 0;
      const std::uint64_t begin = static_cast<std::uint64_t>(b) * kSampleBlock;
      const std::uint64_t end = std::min(t, begin + kSampleBlock);
      for (std::uint64_t s = begin; s < end; ++s) {
        CounterRng rng(seed, s);
        acc.add(value_at(rng.next_index(n), q));
      }
      block[b] = acc.value();
      queries += q;
    } catch (...) {
#pragma omp critical(specsum_block_sample_err)
      {
        if (!failed.exchange(true)) err = std::current_exception();
      }
    }
  }
  if (err) std::rethrow_exception(err);
  NeumaierSum total;
  for (double v : block) total.add(v);
  CoreResult out;
  out.mean = total.value() / double(t);
  out.queries = queries;
  return out;
}

// Mean over t uniform indices of X_i = sum_k coeffs[k] * Re A^k(i,i). When the
// dimension is small against the sample count, X_i is precomputed per index
// once; the cached values come from the same code path, so results are
// bit-identical with and without the cache.
CoreResult sample_poly_diagonal(const MatrixOracle& a, const std::vector<double>& coeffs,
                                std::uint64_t t, std::uint64_t seed, int threads) {
  const std::size_t n = a.dim();
  const std::size_t degree = coeffs.empty() ? 0 : coeffs.size() - 1;
  const WalkOptions opt = auto_walk_options(a, degree);
  auto value_at = [&](std::size_t i, std::uint64_t& q) {
    const PowerDiagonal pd = diagonal_powers(a, degree, i, opt);
    q += pd.query_count;
    double acc = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) acc += coeffs[k] * pd.values[k];
    return acc;
  };

  if (n <= 65536 && static_cast<std::uint64_t>(n) < t) {
    std::vector<double> table(n);
    std::uint64_t table_queries = 0;
    const std::int64_t nn = static_cast<std::int64_t>(n);
    std::exception_ptr err = nullptr;
    std::atomic<bool> failed{false};
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads) reduction(+ : table_queries) if(threads > 1)
    for (std::int64_t i = 0; i < nn; ++i) {
      if (failed.load(std::memory_order_relaxed)) continue;
      try {
        std::uint64_t q = 0;
        table[static_cast<std::size_t>(i)] = value_at(static_cast<std::size_t>(i), q);
        table_queries += q;
      } catch (...) {
#pragma omp critical(specsum_table_err)
        {
          if (!failed.exchange(true)) err = std::current_exception();
        }
      }
    }
    if (err) std::rethrow_exception(err);
    CoreResult out = block_sample(
        n, t, seed, threads, [&table](std::size_t i, std::uint64_t&) { return table[i]; });
    out.queries += table_queries;
    return out;
  }
  return block_sample(n, t, seed, threads, value_at);
}

int thread_count(const EstimateRequest& req) { return std::max(1, req.workers); }

void require_unit_window(const MatrixOracle& a, const char* what) {
  const auto b = a.bounds();
  if (!b || std::max(std::abs(b->lo), std::abs(b->hi)) > 1.0 + 1e-12)
    throw InputError(std::string(what) + ": the oracle must declare spectral bounds inside [-1, 1]");
}

void require_positive_window(const SpectralBounds& bounds, const char* what) {
  if (!bounds.positive())
    throw InputError(std::string(what) + ": spectral bounds must have a positive floor");
  if (bounds.hi > 1.0 + 1e-12)
    throw InputError(std::string(what) + ": spectral bounds must lie within [1/kappa, 1]");
}

Polynomial scale_down(Polynomial p, double s) {
  for (auto& c : p.coeffs) c /= s;
  for (auto& c : p.stable) c /= s;
  p.cert_sup /= s;
  p.cert_error /= s;
  return p;
}

const char* method_name(Method m) { return m == Method::taylor ? "taylor" : "chebyshev"; }

// Shared driver tail: verify the scaled polynomial, sample it at the split
// accuracy, and rescale the mean.
EstimateReport finish_driver(const MatrixOracle& a, const Polynomial& scaled, double scale,
                             double sampling_eps, const char* method,
                             const EstimateRequest& req, Clock::time_point t0) {
  if (scaled.cert_sup > 1.0 + 1e-9)
    throw CheckError("driver: scaled polynomial exceeds the unit sup certificate");
  check_conditioning(scaled);
  const std::uint64_t t =
      req.sample_override ? *req.sample_override : sample_count(1.0, sampling_eps, req.delta);
  const CoreResult cr =
      sample_poly_diagonal(a, scaled.coeffs, t, req.seed, thread_count(req));
  EstimateReport rep;
  rep.value = cr.mean * scale;
  rep.eps = req.eps;
  rep.delta = req.delta;
  rep.samples = t;
  rep.degree = scaled.degree();
  rep.method = method;
  rep.scale = scale;
  rep.queries = cr.queries;
  rep.seed = req.seed;
  rep.elapsed_ms = ms_since(t0);
  return rep;
}

}  // namespace

EstimateReport estimate_normalized_trace(const MatrixOracle& a, const EstimateRequest& req) {
  const auto t0 = Clock::now();
  req.validate();
  const bool unit_declared = [&] {
    const auto b = a.bounds();
    return b && std::max(std::abs(b->lo), std::abs(b->hi)) <= 1.0;
  }();
  const std::uint64_t t =
      req.sample_override ? *req.sample_override : sample_count(1.0, req.eps, req.delta);
  const CoreResult cr = block_sample(
      a.dim(), t, req.seed, thread_count(req), [&](std::size_t i, std::uint64_t& q) {
        const cplx v = a.entry(i, i);
        ++q;
        if (a.hermitian() && std::abs(v.imag()) > 1e-10 * std::max(1.0, std::abs(v)))
          throw CheckError("normalized trace: imaginary residue on a Hermitian diagonal");
        if (unit_declared && std::abs(v.real()) > 1.0 + 1e-9)
          throw CheckError("normalized trace: diagonal entry breaks the declared unit window");
        return v.real();
      });
  EstimateReport rep;
  rep.value = cr.mean;
  rep.eps = req.eps;
  rep.delta = req.delta;
  rep.samples = t;
  rep.degree = 0;
  rep.method = "direct";
  rep.scale = 1.0;
  rep.queries = cr.queries;
  rep.seed = req.seed;
  rep.elapsed_ms = ms_since(t0);
  return rep;
}

EstimateReport estimate_poly_trace(const MatrixOracle& a, const Polynomial& p,
                                   const EstimateRequest& req) {
  const auto t0 = Clock::now();
  req.validate();
  if (p.cert_sup > 1.0 + 1e-9)
    throw InputError("estimate_poly_trace: polynomial must be pre-scaled to cert_sup <= 1");
  return finish_driver(a, p, 1.0, req.eps, "direct", req, t0);
}

EstimateReport estimate_logdet(const MatrixOracle& a, const SpectralBounds& bounds,
                               const EstimateRequest& req) {
  const auto t0 = Clock::now();
  req.validate();
  require_positive_window(bounds, "estimate_logdet");
  const double kappa = bounds.kappa();
  const Polynomial p = req.method == Method::chebyshev ? improved_log(kappa, req.eps / 2.0)
                                                       : taylor_log(kappa, req.eps / 2.0);
  const bool degenerate = p.cert_sup <= 1e-12;  // kappa = 1: the target is identically 0
  const double s = degenerate ? 1.0 : p.cert_sup;
  EstimateReport rep = finish_driver(a, degenerate ? p : scale_down(p, s), s,
                                     req.eps / (2.0 * s), method_name(req.method), req, t0);
  if (bounds.hi <= 1.0 - 1.0 / kappa + 1e-12) rep.relative_bound = req.eps * kappa;
  return rep;
}

EstimateReport estimate_trace_inverse(const MatrixOracle& a, const SpectralBounds& bounds,
                                      const EstimateRequest& req) {
  const auto t0 = Clock::now();
  req.validate();
  require_positive_window(bounds, "estimate_trace_inverse");
  const double kappa = bounds.kappa();
  const Polynomial p = req.method == Method::chebyshev
                           ? improved_inverse(kappa, req.eps / 2.0)
                           : taylor_inverse(kappa, req.eps / 2.0);
  const double s = p.cert_sup;  // >= 1 always (the inverse sup is at least 1)
  return finish_driver(a, scale_down(p, s), s, req.eps / (2.0 * s),
                       method_name(req.method), req, t0);
}

EstimateReport estimate_trace_power(const MatrixOracle& a, std::size_t p_exp,
                                    const EstimateRequest& req) {
  const auto t0 = Clock::now();
  req.validate();
  if (p_exp < 1) throw InputError("estimate_trace_power: exponent must be at least 1");
  require_unit_window(a, "estimate_trace_power");
  if (req.method == Method::taylor) {
    std::vector<double> c(p_exp + 1, 0.0);
    c[p_exp] = 1.0;
    Polynomial p = make_monomial(std::move(c), -1.0, 1.0);
    return finish_driver(a, p, 1.0, req.eps, "taylor", req, t0);
  }
  const Polynomial p = cheb_monomial(p_exp, req.eps / 2.0);
  return finish_driver(a, p, 1.0, req.eps / 2.0, "chebyshev", req, t0);
}

EstimateReport estimate_partition(const MatrixOracle& a, double beta,
                                  const EstimateRequest& req) {
  const auto t0 = Clock::now();
  req.validate();
  if (!(beta > 0.0)) throw InputError("estimate_partition: beta must be positive");
  if (beta > 700.0) throw GuardError("estimate_partition: beta > 700 overflows e^beta");
  if (req.method == Method::chebyshev)
    throw InputError("estimate_partition: only the taylor method is available");
  require_unit_window(a, "estimate_partition");
  const double eb = std::exp(beta);
  const double sampling_eps = req.eps / (2.0 * eb);
  const Polynomial p = taylor_exp(beta, sampling_eps);
  return finish_driver(a, scale_down(p, eb), eb, sampling_eps, "taylor", req, t0);
}

}  // namespace specsum
