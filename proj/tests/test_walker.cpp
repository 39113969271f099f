#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "specsum/oracle.hpp"
#include "specsum/reference.hpp"
#include "specsum/rng.hpp"
#include "specsum/types.hpp"
#include "specsum/walker.hpp"

using namespace specsum;

namespace {

DenseMatrix random_hermitian(std::size_t n, std::uint64_t seed, double scale) {
  DenseMatrix m(n, n);
  CounterRng rng(seed, 0);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = scale * rng.next_double(-1, 1);
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx v(scale * rng.next_double(-1, 1), scale * rng.next_double(-1, 1));
      m(i, j) = v;
      m(j, i) = std::conj(v);
    }
  }
  return m;
}

// An oracle that claims to be Hermitian but is not: exercises the walker's
// imaginary-residue self-check on closed walks.
class LyingOracle final : public MatrixOracle {
 public:
  std::size_t dim() const override { return 2; }
  std::size_t sparsity() const override { return 2; }
  cplx entry(std::size_t i, std::size_t j) const override {
    if (i == 0 && j == 1) return cplx(1.0, 0.0);
    if (i == 1 && j == 0) return cplx(0.0, 1.0);
    return cplx(0.0, 0.0);
  }
  void row(std::size_t i, std::vector<EntryRef>& out) const override {
    out.clear();
    for (std::size_t j = 0; j < 2; ++j)
      if (entry(i, j) != cplx(0.0, 0.0)) out.push_back({j, entry(i, j)});
  }
  void col(std::size_t j, std::vector<EntryRef>& out) const override {
    out.clear();
    for (std::size_t i = 0; i < 2; ++i)
      if (entry(i, j) != cplx(0.0, 0.0)) out.push_back({i, std::conj(entry(i, j))});
  }
  bool hermitian() const override { return true; }
};

}  // namespace

TEST_CASE("power_entry pins on identity, diagonal, and the 2-cycle") {
  auto id = dense_backed(DenseMatrix::identity(4));
  for (bool memo : {false, true}) {
    WalkOptions w{memo};
    CHECK(power_entry(*id, 9, 2, 2, w).value == cplx(1.0, 0.0));
    CHECK(power_entry(*id, 9, 0, 3, w).value == cplx(0.0, 0.0));
  }
  DenseMatrix d(3, 3);
  d(0, 0) = 0.5;
  d(1, 1) = -0.25;
  d(2, 2) = 1.0;
  auto od = dense_backed(d);
  CHECK(power_entry(*od, 3, 1, 1, {}).value == cplx(-0.015625, 0.0));
  DenseMatrix cyc(2, 2);
  cyc(0, 1) = 1.0;
  cyc(1, 0) = 1.0;
  auto oc = dense_backed(cyc, SpectralBounds{-1.0, 1.0});
  CHECK(power_entry(*oc, 3, 0, 0, {}).value == cplx(0.0, 0.0));
  CHECK(power_entry(*oc, 3, 0, 1, {}).value == cplx(1.0, 0.0));
  CHECK(power_entry(*oc, 4, 0, 0, {}).value == cplx(1.0, 0.0));
}

TEST_CASE("both traversal strategies match dense powers on a random 16x16") {
  DenseMatrix m = random_hermitian(16, 21, 0.1);
  auto o = dense_backed(m);
  DenseMatrix pw = DenseMatrix::identity(16);
  for (std::size_t d = 1; d <= 5; ++d) {
    pw = pw * m;
    for (std::size_t i = 0; i < 16; i += 5) {
      for (std::size_t j = 0; j < 16; j += 3) {
        const cplx tree = power_entry(*o, d, i, j, WalkOptions{false}).value;
        const cplx memo = power_entry(*o, d, i, j, WalkOptions{true}).value;
        CHECK(std::abs(tree - pw(i, j)) <= 1e-10);
        CHECK(std::abs(memo - pw(i, j)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("diagonal_powers returns every prefix power at once") {
  auto r = make_shifted_laplacian_ring(32, 4.0);
  const std::size_t d = 9;
  PowerDiagonal all = diagonal_powers(*r, d, 7, WalkOptions{true});
  REQUIRE(all.values.size() == d + 1);
  CHECK(all.values[0] == 1.0);
  // prefix consistency: asking for fewer powers yields bit-identical values
  for (std::size_t k = 1; k < d; k += 3) {
    PowerDiagonal part = diagonal_powers(*r, k, 7, WalkOptions{true});
    REQUIRE(part.values.size() == k + 1);
    for (std::size_t t = 0; t <= k; ++t) CHECK(part.values[t] == all.values[t]);
  }
  // and the tree strategy agrees to float tolerance
  PowerDiagonal tree = diagonal_powers(*r, d, 7, WalkOptions{false});
  for (std::size_t t = 0; t <= d; ++t)
    CHECK(tree.values[t] == doctest::Approx(all.values[t]).epsilon(1e-12));
  // each value matches power_entry on the diagonal
  for (std::size_t t = 1; t <= d; ++t)
    CHECK(all.values[t] ==
          doctest::Approx(power_entry(*r, t, 7, 7, WalkOptions{true}).value.real())
              .epsilon(1e-12));
}

TEST_CASE("sparsity-1 oracles walk any depth without refusal") {
  auto o = make_diagonal_spectrum(1000000, 2.0, 4);
  CHECK(!tree_walk_refused(1, 1000000));
  const double lam = o->entry(123, 123).real();
  PowerDiagonal p = diagonal_powers(*o, 40, 123, WalkOptions{false});
  CHECK(p.values[40] == doctest::Approx(std::pow(lam, 40)).epsilon(1e-12));
}

TEST_CASE("tree_walk_refused boundary pins") {
  CHECK(tree_walk_refused(2, 61));
  CHECK(!tree_walk_refused(2, 60));
  CHECK(tree_walk_refused(4, 31));
  CHECK(!tree_walk_refused(4, 30));
  CHECK(!tree_walk_refused(1, 1000000));
  CHECK(tree_walk_refused(3, 38));
  CHECK(!tree_walk_refused(3, 37));
}

TEST_CASE("auto_walk_options picks a feasible strategy or refuses") {
  auto ring = make_shifted_laplacian_ring(2048, 4.0);
  CHECK(!auto_walk_options(*ring, 12).memoize);  // 3^12 cheaper than the table
  CHECK(auto_walk_options(*ring, 40).memoize);   // tree refused, memo fine
  auto diag = make_diagonal_spectrum(4096, 2.0, 1);
  CHECK(!auto_walk_options(*diag, 500).memoize);  // s = 1 never memoizes
  // both modes infeasible: huge lazy ring at tree-refusing depth
  auto huge = make_shifted_laplacian_ring(200000000, 4.0);
  CHECK_THROWS_AS(auto_walk_options(*huge, 38), GuardError);
  CHECK_THROWS_AS(diagonal_powers(*huge, 38, 0, WalkOptions{true}), GuardError);
  CHECK_THROWS_AS(power_entry(*huge, 38, 0, 0, WalkOptions{false}), GuardError);
}

TEST_CASE("product_entry matches dense products for pairs and chains") {
  DenseMatrix a = random_hermitian(6, 31, 0.4);
  DenseMatrix b = random_hermitian(6, 32, 0.4);
  DenseMatrix c = random_hermitian(6, 33, 0.4);
  auto oa = dense_backed(a), ob = dense_backed(b), oc = dense_backed(c);
  DenseMatrix ab = a * b;
  DenseMatrix abc = ab * c;
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) {
      CHECK(std::abs(product_entry(*oa, *ob, i, j).value - ab(i, j)) <= 1e-12);
      const std::vector<const MatrixOracle*> chain{oa.get(), ob.get(), oc.get()};
      CHECK(std::abs(product_entry(chain, i, j, {}).value - abc(i, j)) <= 1e-12);
      CHECK(std::abs(product_entry(chain, i, j, WalkOptions{true}).value - abc(i, j)) <= 1e-12);
    }
  }
  // empty chains are rejected rather than treated as the identity
  const std::vector<const MatrixOracle*> none{};
  CHECK_THROWS_AS(product_entry(none, 2, 2, {}), InputError);
}

TEST_CASE("declared unit windows are enforced on closed walks") {
  DenseMatrix big = DenseMatrix::identity(3).scaled(2.0);
  auto lying = dense_backed(big, SpectralBounds{-1.0, 1.0});
  CHECK_THROWS_AS(diagonal_powers(*lying, 3, 0, {}), CheckError);
  // without declared bounds the same walk is fine
  auto honest = dense_backed(big);
  CHECK(diagonal_powers(*honest, 3, 0, {}).values[3] == 8.0);
}

TEST_CASE("a false hermitian() claim is caught by the residue check") {
  LyingOracle lie;
  CHECK_THROWS_AS(diagonal_powers(lie, 2, 0, {}), CheckError);
}

TEST_CASE("query counts are reported and bounded") {
  auto r = make_shifted_laplacian_ring(64, 4.0);
  const std::size_t d = 8;
  WalkValue tree = power_entry(*r, d, 0, 0, WalkOptions{false});
  WalkValue memo = power_entry(*r, d, 0, 0, WalkOptions{true});
  CHECK(tree.query_count > 0);
  CHECK(memo.query_count > 0);
  // tree work is bounded by the path count times the branching factor
  std::size_t paths = 1;
  for (std::size_t t = 0; t < d; ++t) paths *= 3;
  CHECK(tree.query_count <= 4 * d * paths);
  // the memo table touches each (node, depth) cell at most once
  CHECK(memo.query_count <= 4 * 64 * (d + 1) * 3);
}
