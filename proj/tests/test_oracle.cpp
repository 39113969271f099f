#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "specsum/oracle.hpp"
#include "specsum/reference.hpp"
#include "specsum/rng.hpp"
#include "specsum/types.hpp"

using namespace specsum;

namespace {

DenseMatrix small_hermitian() {
  DenseMatrix m(3, 3);
  m(0, 0) = 1.0;
  m(1, 1) = -0.5;
  m(2, 2) = 0.25;
  m(0, 1) = cplx(0.3, 0.2);
  m(1, 0) = cplx(0.3, -0.2);
  m(1, 2) = cplx(0.0, -0.7);
  m(2, 1) = cplx(0.0, 0.7);
  return m;
}

}  // namespace

TEST_CASE("dense_backed canonicalizes from the upper triangle") {
  DenseMatrix m = small_hermitian();
  m(1, 0) = cplx(0.3, -0.2 + 5e-13);   // within the Hermitian tolerance
  m(1, 1) = cplx(-0.5, -4e-13);        // slightly complex diagonal
  auto o = dense_backed(m);
  CHECK(o->dim() == 3);
  CHECK(o->hermitian());
  CHECK(o->entry(1, 0) == std::conj(o->entry(0, 1)));
  CHECK(o->entry(0, 1) == cplx(0.3, 0.2));
  CHECK(o->entry(1, 1).imag() == 0.0);
  CHECK(o->entry(2, 2) == cplx(0.25, 0.0));
}

TEST_CASE("dense_backed rejects a non-Hermitian matrix") {
  DenseMatrix m = small_hermitian();
  m(2, 0) = cplx(0.5, 0.0);  // no conjugate partner
  CHECK_THROWS_AS(dense_backed(m), InputError);
  CHECK_THROWS_AS(dense_backed(DenseMatrix(2, 3)), InputError);
  CHECK_NOTHROW(dense_general(m));  // the general route skips the check
}

TEST_CASE("row and col access is sorted and mutually conjugate") {
  auto o = dense_backed(small_hermitian());
  CHECK(o->sparsity() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    auto r = row_of(*o, i);
    for (std::size_t k = 1; k < r.size(); ++k) CHECK(r[k - 1].index < r[k].index);
    for (const auto& e : r) CHECK(e.value == o->entry(i, e.index));
    auto c = col_of(*o, i);
    for (std::size_t k = 1; k < c.size(); ++k) CHECK(c[k - 1].index < c[k].index);
    for (const auto& e : c) CHECK(e.value == std::conj(o->entry(i, e.index)));
  }
  // zero entries are skipped entirely
  CHECK(row_of(*o, 0).size() == 2);
  CHECK(row_of(*o, 1).size() == 3);
}

TEST_CASE("ScaledOracle multiplies every entry and forwards structure") {
  auto base = dense_backed(small_hermitian());
  ScaledOracle s(*base, -0.5, SpectralBounds{-1.0, 1.0});
  CHECK(s.dim() == 3);
  CHECK(s.sparsity() == base->sparsity());
  CHECK(s.hermitian());
  CHECK(s.bounds()->lo == -1.0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(std::abs(s.entry(i, j) - (-0.5) * base->entry(i, j)) == 0.0);
  auto r = row_of(s, 1);
  for (const auto& e : r) CHECK(e.value == -0.5 * base->entry(1, e.index));
}

TEST_CASE("ProductOracle matches the dense B * B^dagger") {
  DenseMatrix b(4, 4);
  CounterRng rng(17, 0);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (rng.next_double() < 0.6)
        b(i, j) = cplx(rng.next_double(-1, 1), rng.next_double(-1, 1));
  auto bo = dense_general(b);
  ProductOracle prod(*bo);
  DenseMatrix want = b * b.adjoint();
  CHECK(prod.dim() == 4);
  CHECK(prod.sparsity() == std::min(bo->sparsity() * bo->sparsity(), prod.dim()));
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(std::abs(prod.entry(i, j) - want(i, j)) <= 1e-13);
      // exact Hermiticity by construction, not just within float noise
      CHECK(prod.entry(i, j) == std::conj(prod.entry(j, i)));
    }
    auto r = row_of(prod, i);
    for (const auto& e : r) CHECK(e.value == prod.entry(i, e.index));
    for (std::size_t k = 1; k < r.size(); ++k) CHECK(r[k - 1].index < r[k].index);
  }
  DenseMatrix mat = materialize(prod);
  CHECK(mat.hermitian_deviation() == 0.0);
}

TEST_CASE("diagonal spectrum family is pure in (seed, index)") {
  const double kappa = 4.0;
  auto o = make_diagonal_spectrum(64, kappa, 1);
  CHECK(o->sparsity() == 1);
  CHECK(o->bounds()->lo == 1.0 / kappa);
  CHECK(o->bounds()->hi == 1.0);
  // frozen draws for (kappa=4, seed=1)
  CHECK(diagonal_spectrum_value(0, kappa, 1) == 0.34472913513356246);
  CHECK(diagonal_spectrum_value(7, kappa, 1) == 0.28717201830274919);
  for (std::size_t i = 0; i < 64; ++i) {
    const double v = diagonal_spectrum_value(i, kappa, 1);
    CHECK(o->entry(i, i) == cplx(v, 0.0));
    CHECK(v >= 1.0 / kappa);
    CHECK(v <= 1.0);
    if (i > 0) CHECK(o->entry(i, i - 1) == cplx(0.0, 0.0));
  }
  auto vals = diagonal_spectrum_values(64, kappa, 1);
  REQUIRE(vals.size() == 64);
  for (std::size_t i = 0; i < 64; ++i) CHECK(vals[i] == diagonal_spectrum_value(i, kappa, 1));
  // a different seed gives a different draw
  CHECK(diagonal_spectrum_value(0, kappa, 2) != vals[0]);
}

TEST_CASE("shifted laplacian ring structure and spectrum") {
  const std::size_t n = 8;
  const double kappa = 4.0;
  auto o = make_shifted_laplacian_ring(n, kappa);
  CHECK(o->sparsity() == 3);
  CHECK(o->bounds()->lo == 0.25);
  CHECK(o->bounds()->hi == 1.0);
  const double c0 = (1.0 + 1.0 / kappa) / 2.0;
  const double c1 = (1.0 - 1.0 / kappa) / 4.0;
  CHECK(o->entry(3, 3) == cplx(c0, 0.0));
  CHECK(o->entry(3, 4) == cplx(c1, 0.0));
  CHECK(o->entry(0, n - 1) == cplx(c1, 0.0));  // wraparound
  CHECK(o->entry(0, 2) == cplx(0.0, 0.0));
  auto r0 = row_of(*o, 0);
  REQUIRE(r0.size() == 3);
  CHECK(r0[0].index == 0);
  CHECK(r0[1].index == 1);
  CHECK(r0[2].index == n - 1);

  // analytic spectrum vs the dense eigensolver
  auto lam = ring_spectrum_values(n, kappa);
  auto sp = eig_hermitian(materialize(*o));
  REQUIRE(lam.size() == n);
  for (std::size_t k = 0; k < n; ++k) CHECK(lam[k] == doctest::Approx(sp.eigenvalues[k]).epsilon(1e-10));
  // window endpoints are attained exactly for even n
  CHECK(lam.front() == 0.25);
  CHECK(lam.back() == 1.0);
}

TEST_CASE("banded random family stays inside its certified window") {
  for (auto mode : {BandedMode::positive, BandedMode::centered}) {
    auto o = make_banded_random(32, 2, 4.0, mode, 9);
    CHECK(o->sparsity() == 5);
    const auto b = o->bounds();
    REQUIRE(b.has_value());
    if (mode == BandedMode::positive) {
      CHECK(b->lo == 0.25);
      CHECK(b->hi == 1.0);
    } else {
      CHECK(b->lo == -1.0);
      CHECK(b->hi == 1.0);
    }
    DenseMatrix m = materialize(*o);
    CHECK(m.hermitian_deviation() <= 1e-15);
    for (std::size_t i = 0; i < 32; ++i)
      for (std::size_t j = 0; j < 32; ++j)
        if (std::size_t(std::llabs(std::int64_t(i) - std::int64_t(j))) > 2)
          CHECK(m(i, j) == cplx(0.0, 0.0));
    auto sp = eig_hermitian(m);
    CHECK(sp.eigenvalues.front() >= b->lo - 1e-12);
    CHECK(sp.eigenvalues.back() <= b->hi + 1e-12);
    // deterministic in the seed
    auto o2 = make_banded_random(32, 2, 4.0, mode, 9);
    CHECK(o2->entry(3, 4) == o->entry(3, 4));
    auto o3 = make_banded_random(32, 2, 4.0, mode, 10);
    CHECK(o3->entry(3, 4) != o->entry(3, 4));
  }
}

TEST_CASE("HERM round-trip preserves every entry") {
  DenseMatrix m = small_hermitian();
  auto o = dense_backed(m);
  std::ostringstream out;
  save_herm(out, *o);
  std::istringstream in(out.str());
  DenseMatrix back = load_herm(in);
  REQUIRE(back.rows() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(back(i, j) == o->entry(i, j));
}

TEST_CASE("HERM reader accepts comments and rejects malformed input") {
  {
    std::istringstream in("# header comment\n\nHERM 2 -\n0 0 1.5 0\n# mid comment\n0 1 0.25 -0.5\n");
    DenseMatrix m = load_herm(in);
    CHECK(m(0, 0) == cplx(1.5, 0.0));
    CHECK(m(0, 1) == cplx(0.25, -0.5));
    CHECK(m(1, 0) == cplx(0.25, 0.5));  // mirrored on load
    CHECK(m(1, 1) == cplx(0.0, 0.0));
  }
  {
    std::istringstream in("HERM 2 1\n1 0 0.5 0.1\n");  // lower triangle folds
    DenseMatrix m = load_herm(in);
    CHECK(m(0, 1) == cplx(0.5, -0.1));
    CHECK(m(1, 0) == cplx(0.5, 0.1));
  }
  {
    std::istringstream in("HERM 2 2\n0 1 0.5 0.1\n0 1 0.5 0.1\n");  // duplicate
    CHECK_THROWS_AS(load_herm(in), InputError);
  }
  {
    // a folded lower line that contradicts its upper partner
    std::istringstream in("HERM 2 2\n0 1 0.5 0.1\n1 0 0.5 0.1\n");
    CHECK_THROWS_AS(load_herm(in), InputError);
  }
  {
    std::istringstream in("HERM 2 1\n0 0 0.5 0.1\n");  // complex diagonal
    CHECK_THROWS_AS(load_herm(in), InputError);
  }
  {
    std::istringstream in("HERM 2 2\n0 1 0.5 0.1\n");  // count mismatch
    CHECK_THROWS_AS(load_herm(in), InputError);
  }
  {
    std::istringstream in("HERM 2 1\n0 2 0.5 0.1\n");  // index out of range
    CHECK_THROWS_AS(load_herm(in), InputError);
  }
  {
    std::istringstream in("POLY 2 0 1\n");  // wrong magic
    CHECK_THROWS_AS(load_herm(in), InputError);
  }
}

TEST_CASE("peek_magic reads the first non-comment token") {
  const std::string path = "/tmp/specsum_test_magic.txt";
  {
    std::ofstream f(path);
    f << "# leading comment\n\nHERM 4 -\n";
  }
  CHECK(peek_magic(path) == "HERM");
  {
    std::ofstream f(path);
    f << "GADGET 2 1\n";
  }
  CHECK(peek_magic(path) == "GADGET");
  CHECK_THROWS_AS(peek_magic("/tmp/specsum_no_such_file.txt"), InputError);
  std::remove(path.c_str());
}
