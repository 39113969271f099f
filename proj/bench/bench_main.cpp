// Micro-benchmarks for the sampling kernels: worker scaling of the estimator
// (serial reference vs OpenMP), the two walker strategies (depth-first tree vs
// memoized dynamic program), and the O(N) Hutchinson baseline against the
// dimension-free diagonal sampler.
#include <chrono>
#include <cmath>
#include <cstdio>

#include "specsum/estimator.hpp"
#include "specsum/oracle.hpp"
#include "specsum/poly.hpp"
#include "specsum/reference.hpp"
#include "specsum/walker.hpp"

using namespace specsum;

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double time_ms(F&& f) {
  const auto t0 = Clock::now();
  f();
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void bench_workers() {
  std::printf("== estimator worker scaling (ring N=1024, logdet, taylor) ==\n");
  const auto ring = make_shifted_laplacian_ring(1024, 4.0);
  EstimateRequest req;
  req.eps = 0.05;
  req.delta = 1e-3;
  req.seed = 11;
  EstimateReport serial, parallel;
  req.workers = 1;
  const double t1 = time_ms([&] { serial = estimate_logdet(*ring, *ring->bounds(), req); });
  req.workers = 8;
  const double t8 = time_ms([&] { parallel = estimate_logdet(*ring, *ring->bounds(), req); });
  std::printf("  workers=1: value %.12f  samples %llu  %.1f ms\n", serial.value,
              (unsigned long long)serial.samples, t1);
  std::printf("  workers=8: value %.12f  samples %llu  %.1f ms\n", parallel.value,
              (unsigned long long)parallel.samples, t8);
  std::printf("  bit-identical: %s   speedup x%.2f\n\n",
              serial.value == parallel.value ? "yes" : "NO", t1 / t8);
}

void bench_walker_paths() {
  std::printf("== walker strategies (banded N=2048 s=3, d=12, 64 indices) ==\n");
  const auto banded = make_banded_random(2048, 1, 4.0, BandedMode::centered, 3);
  const std::size_t d = 12;
  WalkOptions tree;
  tree.memoize = false;
  WalkOptions memo;
  memo.memoize = true;
  double tree_ms = 0.0, memo_ms = 0.0, max_diff = 0.0;
  std::uint64_t tree_q = 0, memo_q = 0;
  for (std::size_t i = 0; i < 64; ++i) {
    PowerDiagonal a, b;
    tree_ms += time_ms([&] { a = diagonal_powers(*banded, d, i * 17, tree); });
    memo_ms += time_ms([&] { b = diagonal_powers(*banded, d, i * 17, memo); });
    tree_q += a.query_count;
    memo_q += b.query_count;
    for (std::size_t l = 0; l <= d; ++l)
      max_diff = std::max(max_diff, std::abs(a.values[l] - b.values[l]));
  }
  const WalkOptions chosen = auto_walk_options(*banded, d);
  std::printf("  tree: %8.1f ms  %10llu queries\n", tree_ms, (unsigned long long)tree_q);
  std::printf("  memo: %8.1f ms  %10llu queries\n", memo_ms, (unsigned long long)memo_q);
  std::printf("  max |diff| %.3e   auto selects: %s\n\n", max_diff,
              chosen.memoize ? "memo" : "tree");
}

void bench_baseline() {
  std::printf("== Hutchinson baseline vs diagonal sampler (ring N=4096, p(x)=x^4) ==\n");
  const std::size_t dim = 4096;
  const auto ring = make_shifted_laplacian_ring(dim, 4.0);
  std::vector<double> coeffs(5, 0.0);
  coeffs[4] = 1.0;
  const Polynomial p = make_monomial(std::move(coeffs), -1.0, 1.0);
  const std::vector<double> lam = ring_spectrum_values(dim, 4.0);
  double exact = 0.0;
  for (double l : lam) exact += std::pow(l, 4.0);
  exact /= double(dim);

  EstimateRequest req;
  req.eps = 0.05;
  req.delta = 1e-3;
  req.seed = 5;
  EstimateReport rep;
  const double t_sampler = time_ms([&] { rep = estimate_poly_trace(*ring, p, req); });
  double baseline = 0.0;
  const double t_baseline =
      time_ms([&] { baseline = hutchinson_baseline(*ring, p, 128, 5) / double(dim); });
  std::printf("  sampler : value %.8f  err %.2e  %8.1f ms  %10llu queries\n", rep.value,
              std::abs(rep.value - exact), t_sampler, (unsigned long long)rep.queries);
  std::printf("  baseline: value %.8f  err %.2e  %8.1f ms  (cost scales with N)\n",
              baseline, std::abs(baseline - exact), t_baseline);
}

}  // namespace

int main() {
  bench_workers();
  bench_walker_paths();
  bench_baseline();
  return 0;
}
