#ifndef SPECSUM_POLY_HPP
#define SPECSUM_POLY_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "specsum/types.hpp"

namespace specsum {

// How a degree was selected, for auditability: the closed-form base degree,
// any verify-and-bump increments, and the certified remainder at the end.
enum class FuncTag { log_fn, inverse_fn, exp_fn, monomial_fn };

struct DegreeBound {
  FuncTag tag = FuncTag::monomial_fn;
  double param = 0.0;        // kappa, beta, or d_target
  double eps = 0.0;
  std::size_t base_degree = 0;  // closed-form degree before verification
  std::size_t degree = 0;       // accepted degree
  bool bumped = false;
  double remainder = 0.0;       // closed-form (or summed-tail) bound at `degree`
};

// Evaluation basis. The monomial view `coeffs` is always materialized (it is
// what the walkers combine against); `stable` holds the same polynomial in the
// form it was built in, which is what eval() uses:
//   monomial:  sum stable[k] * x^k
//   shifted:   sum stable[k] * (1-x)^k
//   chebyshev: sum stable[k] * T_k(u),  u = map_c0 + map_c1 * x
enum class PolyBasis { monomial, shifted, chebyshev };

struct Polynomial {
  std::vector<double> coeffs;   // monomial basis, coeffs[k] on x^k
  double lo = -1.0, hi = 1.0;   // certified interval
  double cert_sup = 0.0;        // certified sup of |p| on [lo, hi]
  double cert_error = 0.0;      // certified sup of |p - target| on [lo, hi]; 0 = exact
  PolyBasis basis = PolyBasis::monomial;
  std::vector<double> stable;
  double map_c0 = 0.0, map_c1 = 1.0;
  std::optional<DegreeBound> bound;

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  double eval(double x) const;
  double coeff_l1() const;      // sum |coeffs[k]| over the monomial view
};

// Convenience: monomial-basis polynomial from raw coefficients; cert_sup is
// the rigorous l1 bound sum |c_k| * max(|lo|,|hi|)^k.
Polynomial make_monomial(std::vector<double> coeffs, double lo, double hi);

// Guard against combining ill-conditioned monomial expansions with walk
// values: refuses when sum |c_k| > 1e12. Applied where the monomial view is
// actually consumed (estimation, serialization), not at build time.
void check_conditioning(const Polynomial& p);

// ---- Builders ----
// Each builder verifies its closed-form degree against the remainder bound
// (bumping up to 4x before refusing) and then grid-checks cert_error and
// cert_sup at construction.

// p(x) = -sum_{k=1..d} (1-x)^k / k ~ ln(x) on [1/kappa, 1]; sup <= ln(kappa).
Polynomial taylor_log(double kappa, double eps);
// p(x) = sum_{k=0..d} (1-x)^k ~ 1/x on [1/kappa, 1]; sup <= kappa.
Polynomial taylor_inverse(double kappa, double eps);
// p(x) = sum_{k=0..d} (-beta x)^k / k! ~ e^{-beta x} on [-1, 1]; sup <= e^beta.
Polynomial taylor_exp(double beta, double eps);
// Truncated Chebyshev expansion of x^d_target on [-1, 1], degree
// ceil(sqrt(2 d ln(2/eps))); exact (bit-identical monomial) when that degree
// reaches d_target.
Polynomial cheb_monomial(std::size_t d_target, double eps);
// Replace every monomial of p (|c_k| <= 1 required) by its truncated
// Chebyshev expansion, per-monomial budget eps/deg; p must certify a
// sub-interval of [-1, 1].
Polynomial replace_monomials(const Polynomial& p, double eps);
// Taylor in z = 1-x at eps/2, compressed by monomial replacement at eps/2,
// carried in the Chebyshev basis with map u = 1-x. Degree O(sqrt(kappa) ln(kappa/eps)).
Polynomial improved_log(double kappa, double eps);
Polynomial improved_inverse(double kappa, double eps);

double eval_poly(const Polynomial& p, double x);

// Max |p(x) - f(x)| over grid_size Chebyshev-distributed points plus both
// endpoints of [lo, hi].
double sup_error(const Polynomial& p, const std::function<double(double)>& f,
                 double lo, double hi, std::size_t grid_size);

// Hoeffding sample count for mean estimation of variables in [-b, b]:
// T = ceil((2b)^2 ln(2/delta) / (2 eps^2)).
std::uint64_t sample_count(double halfwidth, double eps, double delta);

// ---- POLY text format ----
//   POLY <d> <lo> <hi>
//   <c_0> ... <c_d>, one per line, 17 significant digits
// Round-trips bit-exactly. Saving is subject to the conditioning guard.
void save_poly(std::ostream& out, const Polynomial& p);
void save_poly_file(const std::string& path, const Polynomial& p);
Polynomial load_poly(std::istream& in);
Polynomial load_poly_file(const std::string& path);

}  // namespace specsum

#endif
