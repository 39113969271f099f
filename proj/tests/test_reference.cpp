#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "specsum/oracle.hpp"
#include "specsum/poly.hpp"
#include "specsum/reference.hpp"
#include "specsum/rng.hpp"
#include "specsum/types.hpp"
#include "specsum/walker.hpp"

using namespace specsum;

namespace {

DenseMatrix random_hermitian(std::size_t n, std::uint64_t seed) {
  DenseMatrix m(n, n);
  CounterRng rng(seed, 0);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = rng.next_double(-1, 1);
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx v(rng.next_double(-1, 1), rng.next_double(-1, 1));
      m(i, j) = v;
      m(j, i) = std::conj(v);
    }
  }
  return m;
}

}  // namespace

TEST_CASE("eig_hermitian pins: identity and a 2x2 with known spectrum") {
  auto sp = eig_hermitian(DenseMatrix::identity(4));
  REQUIRE(sp.eigenvalues.size() == 4);
  for (double l : sp.eigenvalues) CHECK(l == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sp.residual <= 1e-12);

  DenseMatrix m(2, 2);
  m(0, 0) = 2.0;
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  m(1, 1) = 2.0;
  auto s2 = eig_hermitian(m);
  CHECK(s2.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(s2.eigenvalues[1] == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("eig_hermitian reproduces trace and Frobenius invariants") {
  DenseMatrix m = random_hermitian(12, 5);
  auto sp = eig_hermitian(m);
  REQUIRE(sp.eigenvalues.size() == 12);
  for (std::size_t k = 1; k < 12; ++k) CHECK(sp.eigenvalues[k - 1] <= sp.eigenvalues[k]);
  double tr = 0.0, fro2 = 0.0;
  for (std::size_t i = 0; i < 12; ++i) {
    tr += m(i, i).real();
    for (std::size_t j = 0; j < 12; ++j) fro2 += std::norm(m(i, j));
  }
  double ltr = 0.0, lfro2 = 0.0;
  for (double l : sp.eigenvalues) {
    ltr += l;
    lfro2 += l * l;
  }
  CHECK(ltr == doctest::Approx(tr).epsilon(1e-11));
  CHECK(lfro2 == doctest::Approx(fro2).epsilon(1e-11));
  CHECK(sp.residual <= 1e-9);
  // eigenvector columns reconstruct the matrix: A v_k = lambda_k v_k
  for (std::size_t k = 0; k < 12; ++k) {
    for (std::size_t i = 0; i < 12; ++i) {
      cplx av(0.0, 0.0);
      for (std::size_t j = 0; j < 12; ++j) av += m(i, j) * sp.vectors(j, k);
      CHECK(std::abs(av - sp.eigenvalues[k] * sp.vectors(i, k)) <= 1e-9);
    }
  }
  CHECK_THROWS_AS(eig_hermitian(DenseMatrix(2, 3)), InputError);
}

TEST_CASE("exact_spectral_sum closed forms") {
  CHECK(exact_spectral_sum(DenseMatrix::identity(4), SumTarget::log_fn) ==
        doctest::Approx(0.0).epsilon(1e-14));
  DenseMatrix d(2, 2);
  d(0, 0) = 0.5;
  d(1, 1) = 0.25;
  CHECK(exact_spectral_sum(d, SumTarget::inverse_fn) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(exact_spectral_sum(d, SumTarget::power_fn, 2.0) ==
        doctest::Approx(0.3125).epsilon(1e-12));
  CHECK(exact_spectral_sum(d, SumTarget::exp_fn, 1.0) ==
        doctest::Approx(std::exp(-0.5) + std::exp(-0.25)).epsilon(1e-12));
  const Polynomial p = make_monomial({1.0, 2.0}, 0.0, 1.0);  // 1 + 2x
  CHECK(exact_spectral_sum(d, SumTarget::poly_fn, 0.0, &p) ==
        doctest::Approx(3.5).epsilon(1e-12));
  // log of a positive-definite matrix matches the sum of eigenvalue logs
  DenseMatrix m = random_hermitian(6, 2);
  DenseMatrix pd = m * m + DenseMatrix::identity(6).scaled(0.5);
  auto sp = eig_hermitian(pd);
  double want = 0.0;
  for (double l : sp.eigenvalues) want += std::log(l);
  CHECK(exact_spectral_sum(pd, SumTarget::log_fn) == doctest::Approx(want).epsilon(1e-8));
}

TEST_CASE("walk enumeration closed forms") {
  auto id = dense_backed(DenseMatrix::identity(3));
  CHECK(walk_enumerate_entry(*id, 5, 1, 1) == cplx(1.0, 0.0));
  CHECK(walk_enumerate_entry(*id, 5, 0, 1) == cplx(0.0, 0.0));
  CHECK(walk_enumerate_power(*id, 7, 2) == 1.0);

  DenseMatrix cyc(2, 2);
  cyc(0, 1) = 1.0;
  cyc(1, 0) = 1.0;
  auto oc = dense_backed(cyc);
  CHECK(walk_enumerate_power(*oc, 3, 0) == 0.0);  // odd closed walks vanish
  CHECK(walk_enumerate_power(*oc, 4, 0) == 1.0);
  CHECK(walk_enumerate_entry(*oc, 3, 0, 1) == cplx(1.0, 0.0));
}

TEST_CASE("walk enumeration agrees with the walker on a random 8x8") {
  DenseMatrix m = random_hermitian(8, 11).scaled(0.1);
  auto o = dense_backed(m);
  for (std::size_t d = 1; d <= 4; ++d) {
    for (std::size_t i = 0; i < 8; i += 3) {
      for (std::size_t j = 0; j < 8; j += 2) {
        const cplx want = power_entry(*o, d, i, j, {}).value;
        CHECK(std::abs(walk_enumerate_entry(*o, d, i, j) - want) <= 1e-10);
      }
      CHECK(walk_enumerate_power(*o, d, i) ==
            doctest::Approx(power_entry(*o, d, i, i, {}).value.real()).epsilon(1e-10));
    }
  }
}

TEST_CASE("walk enumeration refuses explosive path counts") {
  auto r = make_shifted_laplacian_ring(64, 4.0);  // sparsity 3
  CHECK_THROWS_AS(walk_enumerate_entry(*r, 20, 0, 0), GuardError);  // 3^20 > 1e7
  CHECK_NOTHROW(walk_enumerate_entry(*r, 14, 0, 0));                // 3^14 < 1e7
}

TEST_CASE("dense determinant pins and inverse consistency") {
  CHECK(dense_determinant(DenseMatrix::identity(3).scaled(2.0)) == cplx(8.0, 0.0));
  DenseMatrix t3 = DenseMatrix::identity(3);
  t3(0, 1) = 5.0;
  t3(0, 2) = -2.0;
  t3(1, 2) = 3.0;
  CHECK(std::abs(dense_determinant(t3) - cplx(1.0, 0.0)) <= 1e-14);

  DenseMatrix m = random_hermitian(7, 3) + DenseMatrix::identity(7).scaled(4.0);
  const cplx det = dense_determinant(m);
  DenseMatrix inv = dense_inverse(m);
  const cplx det_inv = dense_determinant(inv);
  CHECK(std::abs(det * det_inv - cplx(1.0, 0.0)) <= 1e-8);
  DenseMatrix prod = m * inv;
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 7; ++j)
      CHECK(std::abs(prod(i, j) - (i == j ? cplx(1.0, 0.0) : cplx(0.0, 0.0))) <= 1e-10);
  // lndet of a PD matrix agrees with the eigenvalue route
  DenseMatrix pd = m * m;
  CHECK(std::log(std::abs(dense_determinant(pd))) ==
        doctest::Approx(exact_spectral_sum(pd, SumTarget::log_fn)).epsilon(1e-8));
  CHECK_THROWS_AS(dense_inverse(DenseMatrix(3, 3)), InputError);  // singular
}

TEST_CASE("hutchinson baseline is exact on diagonal-free cases") {
  auto id = dense_backed(DenseMatrix::identity(16), SpectralBounds{-1.0, 1.0});
  const Polynomial p = make_monomial({0.0, 1.0}, -1.0, 1.0);  // p(x) = x
  // Rademacher vectors hit tr[A] exactly when A = I
  CHECK(hutchinson_baseline(*id, p, 8, 3) == doctest::Approx(16.0).epsilon(1e-12));
  const Polynomial c = make_monomial({0.75}, -1.0, 1.0);  // constant
  CHECK(hutchinson_baseline(*id, c, 5, 9) == doctest::Approx(12.0).epsilon(1e-12));
  // determinism in the seed
  auto r = make_shifted_laplacian_ring(32, 4.0);
  const Polynomial q = make_monomial({0.0, 0.0, 1.0}, 0.0, 1.0);
  CHECK(hutchinson_baseline(*r, q, 10, 7) == hutchinson_baseline(*r, q, 10, 7));
  // unbiasedness sanity: many samples land near the exact trace
  const double exact = exact_spectral_sum(materialize(*r), SumTarget::power_fn, 2.0);
  CHECK(hutchinson_baseline(*r, q, 4000, 1) == doctest::Approx(exact).epsilon(0.05));
}

TEST_CASE("materialize respects the dense scale guard") {
  auto r = make_shifted_laplacian_ring(8, 2.0);
  DenseMatrix m = materialize(*r);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) CHECK(m(i, j) == r->entry(i, j));
  auto big = make_diagonal_spectrum(kDenseScaleLimit + 1, 2.0, 1);
  CHECK_THROWS_AS(materialize(*big), GuardError);
}
