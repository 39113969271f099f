#include "specsum/poly.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>

namespace specsum {

namespace {

constexpr std::size_t kDegreeCap = 1020;  // binomial weights / 2^-d stay normal below this

void check_degree_cap(std::size_t d, const char* what) {
  if (d > kDegreeCap)
    throw GuardError(std::string(what) + ": degree " + std::to_string(d) +
                     " exceeds the " + std::to_string(kDegreeCap) + " cap");
}

void check_finite(const std::vector<double>& c, const char* what) {
  for (double v : c)
    if (!std::isfinite(v)) throw CheckError(std::string(what) + ": non-finite coefficient");
}

// Monomial coefficients of sum c[k] * (1-x)^k, by Horner-style expansion
// (multiply-by-(1-x) then add), avoiding explicit binomials.
std::vector<double> compose_one_minus_x(const std::vector<double>& c) {
  if (c.empty()) return {};
  std::vector<double> out{c.back()};
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    std::vector<double> nxt(out.size() + 1, 0.0);
    for (std::size_t j = 0; j < out.size(); ++j) {
      nxt[j] += out[j];
      nxt[j + 1] -= out[j];
    }
    nxt[0] += c[k];
    out = std::move(nxt);
  }
  return out;
}

// Monomial coefficients of sum w[k] * T_k(x); output size w.size() so the
// stored degree matches the certified one even when the top weight is zero.
std::vector<double> cheb_to_monomial(const std::vector<double>& w) {
  const std::size_t m = w.size();
  std::vector<double> out(m, 0.0);
  if (m == 0) return out;
  out[0] += w[0];
  if (m > 1) out[1] += w[1];
  std::vector<double> tkm1{1.0}, tk{0.0, 1.0};
  for (std::size_t k = 2; k < m; ++k) {
    std::vector<double> t(k + 1, 0.0);
    for (std::size_t j = 0; j < tk.size(); ++j) t[j + 1] += 2.0 * tk[j];
    for (std::size_t j = 0; j < tkm1.size(); ++j) t[j] -= tkm1[j];
    if (w[k] != 0.0)
      for (std::size_t j = 0; j <= k; ++j) out[j] += w[k] * t[j];
    tkm1 = std::move(tk);
    tk = std::move(t);
  }
  return out;
}

// Grid self-check of both certificates; returns false when the error
// certificate fails (caller bumps), throws when the sup certificate fails.
// The error comparison carries an absolute floor for Horner rounding at
// magnitude cert_sup: certificates can collapse far below the evaluation
// noise (the exp remainder shrinks factorially), and without the floor no
// degree could ever confirm them.
bool certificates_hold(const Polynomial& p, const std::function<double(double)>& f,
                       const char* what) {
  const std::size_t grid = 10 * (p.degree() + 1);
  const double err = sup_error(p, f, p.lo, p.hi, grid);
  const double sup = sup_error(p, [](double) { return 0.0; }, p.lo, p.hi, grid);
  if (sup > p.cert_sup * (1.0 + 1e-9) + 1e-12)
    throw CheckError(std::string(what) + ": grid sup " + std::to_string(sup) +
                     " exceeds certificate " + std::to_string(p.cert_sup));
  const double eval_floor = 16.0 * std::numeric_limits<double>::epsilon() *
                            double(p.degree() + 1) * std::max(1.0, p.cert_sup);
  return err <= p.cert_error * (1.0 + 1e-9) + std::max(1e-12, eval_floor);
}

}  // namespace

double Polynomial::eval(double x) const {
  const std::vector<double>& c = stable.empty() ? coeffs : stable;
  if (c.empty()) return 0.0;
  switch (basis) {
    case PolyBasis::monomial: {
      double acc = 0.0;
      for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
      return acc;
    }
    case PolyBasis::shifted: {
      const double y = 1.0 - x;
      double acc = 0.0;
      for (std::size_t k = c.size(); k-- > 0;) acc = acc * y + c[k];
      return acc;
    }
    case PolyBasis::chebyshev: {
      const double u = map_c0 + map_c1 * x;
      double b1 = 0.0, b2 = 0.0;
      for (std::size_t k = c.size(); k-- > 1;) {
        const double t = 2.0 * u * b1 - b2 + c[k];
        b2 = b1;
        b1 = t;
      }
      return u * b1 - b2 + c[0];
    }
  }
  return 0.0;
}

double Polynomial::coeff_l1() const {
  double s = 0.0;
  for (double c : coeffs) s += std::abs(c);
  return s;
}

double eval_poly(const Polynomial& p, double x) { return p.eval(x); }

Polynomial make_monomial(std::vector<double> coeffs, double lo, double hi) {
  if (lo > hi) throw InputError("make_monomial: empty interval");
  check_finite(coeffs, "make_monomial");
  Polynomial p;
  p.coeffs = std::move(coeffs);
  p.stable = p.coeffs;
  p.basis = PolyBasis::monomial;
  p.lo = lo;
  p.hi = hi;
  const double m = std::max(std::abs(lo), std::abs(hi));
  double sup = 0.0, mk = 1.0;
  for (double c : p.coeffs) {
    sup += std::abs(c) * mk;
    mk *= m;
  }
  p.cert_sup = sup;
  p.cert_error = 0.0;
  return p;
}

void check_conditioning(const Polynomial& p) {
  const double l1 = p.coeff_l1();
  if (!(l1 <= 1e12))
    throw GuardError("polynomial conditioning: sum |c_k| = " + std::to_string(l1) +
                     " exceeds 1e12; the monomial view cannot be combined stably");
}

double sup_error(const Polynomial& p, const std::function<double(double)>& f,
                 double lo, double hi, std::size_t grid_size) {
  if (grid_size < 2) throw InputError("sup_error: grid_size must be at least 2");
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double worst = 0.0;
  auto probe = [&](double x) {
    const double e = std::abs(p.eval(x) - f(x));
    if (e > worst) worst = e;
  };
  for (std::size_t t = 0; t < grid_size; ++t)
    probe(mid + half * std::cos(M_PI * (2.0 * t + 1.0) / (2.0 * grid_size)));
  probe(lo);
  probe(hi);
  return worst;
}

std::uint64_t sample_count(double halfwidth, double eps, double delta) {
  if (!(halfwidth > 0.0)) throw InputError("sample_count: halfwidth must be positive");
  if (!(eps > 0.0)) throw InputError("sample_count: eps must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("sample_count: delta must be in (0,1)");
  const double v = (2.0 * halfwidth) * (2.0 * halfwidth) * std::log(2.0 / delta) /
                   (2.0 * eps * eps);
  // Nudge below by one part in 1e12 so exact-boundary cases are not pushed up
  // by float rounding.
  const double t = std::ceil(v - v * 1e-12);
  return t < 1.0 ? 1 : static_cast<std::uint64_t>(t);
}

// ---- Taylor builders ----

namespace {

struct TaylorSpec {
  FuncTag tag;
  double param;  // kappa or beta
  std::size_t base_degree;
  std::function<double(std::size_t)> remainder;  // closed-form bound at degree d
  std::function<std::vector<double>(std::size_t)> stable_coeffs;
  PolyBasis basis;
  double lo, hi, cert_sup;
  std::function<double(double)> target;
  const char* name;
};

Polynomial build_taylor(const TaylorSpec& spec, double eps) {
  std::size_t d = std::max<std::size_t>(spec.base_degree, 1);
  const std::size_t cap = std::min<std::size_t>(kDegreeCap, 4 * d + 8);
  bool bumped = false;
  for (;;) {
    if (d > cap)
      throw GuardError(std::string(spec.name) + ": degree bumping passed " +
                       std::to_string(cap) + " without certifying eps = " +
                       std::to_string(eps));
    if (spec.remainder(d) > eps) {
      ++d;
      bumped = true;
      continue;
    }
    Polynomial p;
    p.stable = spec.stable_coeffs(d);
    p.basis = spec.basis;
    p.coeffs = spec.basis == PolyBasis::shifted ? compose_one_minus_x(p.stable) : p.stable;
    p.lo = spec.lo;
    p.hi = spec.hi;
    p.cert_sup = spec.cert_sup;
    p.cert_error = spec.remainder(d);
    check_finite(p.coeffs, spec.name);
    if (!certificates_hold(p, spec.target, spec.name)) {
      ++d;
      bumped = true;
      continue;
    }
    p.bound = DegreeBound{spec.tag,        spec.param, eps, spec.base_degree, d,
                          bumped,          p.cert_error};
    return p;
  }
}

}  // namespace

Polynomial taylor_log(double kappa, double eps) {
  if (!(kappa >= 1.0)) throw InputError("taylor_log: kappa must be at least 1");
  if (!(eps > 0.0)) throw InputError("taylor_log: eps must be positive");
  TaylorSpec spec;
  spec.tag = FuncTag::log_fn;
  spec.param = kappa;
  spec.base_degree = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(kappa * std::log(1.0 / eps))));
  spec.remainder = [kappa](std::size_t d) {
    return kappa * std::exp(-double(d + 1) / kappa) / double(d + 1);
  };
  spec.stable_coeffs = [](std::size_t d) {
    std::vector<double> c(d + 1, 0.0);
    for (std::size_t k = 1; k <= d; ++k) c[k] = -1.0 / double(k);
    return c;
  };
  spec.basis = PolyBasis::shifted;
  spec.lo = 1.0 / kappa;
  spec.hi = 1.0;
  spec.cert_sup = std::log(kappa);
  spec.target = [](double x) { return std::log(x); };
  spec.name = "taylor_log";
  check_degree_cap(spec.base_degree, spec.name);
  return build_taylor(spec, eps);
}

Polynomial taylor_inverse(double kappa, double eps) {
  if (!(kappa >= 1.0)) throw InputError("taylor_inverse: kappa must be at least 1");
  if (!(eps > 0.0)) throw InputError("taylor_inverse: eps must be positive");
  TaylorSpec spec;
  spec.tag = FuncTag::inverse_fn;
  spec.param = kappa;
  spec.base_degree = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(kappa * std::log(kappa / eps))));
  spec.remainder = [kappa](std::size_t d) {
    return kappa * std::exp(-double(d + 1) / kappa);
  };
  spec.stable_coeffs = [](std::size_t d) { return std::vector<double>(d + 1, 1.0); };
  spec.basis = PolyBasis::shifted;
  spec.lo = 1.0 / kappa;
  spec.hi = 1.0;
  spec.cert_sup = kappa;
  spec.target = [](double x) { return 1.0 / x; };
  spec.name = "taylor_inverse";
  check_degree_cap(spec.base_degree, spec.name);
  return build_taylor(spec, eps);
}

Polynomial taylor_exp(double beta, double eps) {
  if (!(beta > 0.0)) throw InputError("taylor_exp: beta must be positive");
  if (!(eps > 0.0)) throw InputError("taylor_exp: eps must be positive");
  if (beta > 700.0) throw GuardError("taylor_exp: beta > 700 overflows e^beta");
  TaylorSpec spec;
  spec.tag = FuncTag::exp_fn;
  spec.param = beta;
  const double d0 = std::ceil(M_E * M_E * beta + std::log(1.0 / eps)) - 1.0;
  spec.base_degree = d0 < 1.0 ? 1 : static_cast<std::size_t>(d0);
  spec.remainder = [beta](std::size_t d) {
    return std::pow(M_E * beta / double(d + 1), double(d + 1)) * std::exp(beta);
  };
  spec.stable_coeffs = [beta](std::size_t d) {
    std::vector<double> c(d + 1);
    c[0] = 1.0;
    for (std::size_t k = 1; k <= d; ++k) c[k] = c[k - 1] * (-beta) / double(k);
    return c;
  };
  spec.basis = PolyBasis::monomial;
  spec.lo = -1.0;
  spec.hi = 1.0;
  spec.cert_sup = std::exp(beta);
  spec.target = [beta](double x) { return std::exp(-beta * x); };
  spec.name = "taylor_exp";
  check_degree_cap(spec.base_degree, spec.name);
  return build_taylor(spec, eps);
}

// ---- Chebyshev compression ----

namespace {

// Chebyshev weights of x^d: x^d = sum_{k == d mod 2} weight(k) * T_k(x),
// weight(k) = 2^{1-d} binom(d, (d-k)/2), halved at k = 0. Returned as a dense
// array over k = 0..d (zeros at the wrong parity).
std::vector<double> monomial_cheb_weights(std::size_t d) {
  std::vector<double> w(d + 1, 0.0);
  if (d == 0) {
    w[0] = 1.0;
    return w;
  }
  // q_m = 2^{-d} binom(d, m), ascending in m; k = d - 2m.
  double q = std::ldexp(1.0, -static_cast<int>(d));
  for (std::size_t m = 0; 2 * m <= d; ++m) {
    if (m > 0) q = q * double(d - m + 1) / double(m);
    const std::size_t k = d - 2 * m;
    w[k] = k == 0 ? q : 2.0 * q;
  }
  return w;
}

}  // namespace

Polynomial cheb_monomial(std::size_t d_target, double eps) {
  if (d_target < 1) throw InputError("cheb_monomial: d_target must be at least 1");
  if (!(eps > 0.0)) throw InputError("cheb_monomial: eps must be positive");
  check_degree_cap(d_target, "cheb_monomial");
  const auto target = [d_target](double x) { return std::pow(x, double(d_target)); };
  const std::size_t base = static_cast<std::size_t>(
      std::ceil(std::sqrt(std::max(0.0, 2.0 * double(d_target) * std::log(2.0 / eps)))));

  if (base >= d_target) {
    // The truncation degree reaches the monomial itself: return it exactly.
    std::vector<double> c(d_target + 1, 0.0);
    c[d_target] = 1.0;
    Polynomial p = make_monomial(std::move(c), -1.0, 1.0);
    p.cert_sup = 1.0;
    p.bound = DegreeBound{FuncTag::monomial_fn, double(d_target), eps,
                          base,                 d_target,         false, 0.0};
    return p;
  }

  const std::vector<double> full = monomial_cheb_weights(d_target);
  std::size_t dp = std::max<std::size_t>(base, 1);
  const std::size_t cap = std::min(d_target - 1, std::min(kDegreeCap, 4 * dp + 8));
  bool bumped = false;
  for (;;) {
    if (dp > cap)
      throw GuardError("cheb_monomial: truncation degree bumping passed " +
                       std::to_string(cap) + " without certifying eps");
    double kept_sup = 0.0, dropped = 0.0;
    for (std::size_t k = 0; k <= d_target; ++k)
      (k <= dp ? kept_sup : dropped) += std::abs(full[k]);
    Polynomial p;
    p.basis = PolyBasis::chebyshev;
    p.stable.assign(full.begin(), full.begin() + dp + 1);
    p.map_c0 = 0.0;
    p.map_c1 = 1.0;
    p.coeffs = cheb_to_monomial(p.stable);
    p.lo = -1.0;
    p.hi = 1.0;
    p.cert_sup = kept_sup;
    p.cert_error = dropped;
    check_finite(p.coeffs, "cheb_monomial");
    if (dropped <= eps && certificates_hold(p, target, "cheb_monomial")) {
      p.bound = DegreeBound{FuncTag::monomial_fn, double(d_target), eps, base,
                            dp,                   bumped,           dropped};
      return p;
    }
    ++dp;
    bumped = true;
  }
}

Polynomial replace_monomials(const Polynomial& p, double eps) {
  if (!(eps > 0.0)) throw InputError("replace_monomials: eps must be positive");
  if (p.lo < -1.0 - 1e-12 || p.hi > 1.0 + 1e-12)
    throw InputError("replace_monomials: certified interval must lie inside [-1,1]");
  for (double c : p.coeffs)
    if (std::abs(c) > 1.0 + 1e-12)
      throw InputError("replace_monomials: coefficient magnitude " + std::to_string(c) +
                       " exceeds 1; rescale first");
  const std::size_t d = p.degree();
  if (d == 0) return p;

  const double budget_log = std::max(0.0, std::log(2.0 * double(d) / eps));
  const std::size_t d_out = std::min<std::size_t>(
      d, static_cast<std::size_t>(std::ceil(std::sqrt(2.0 * double(d) * budget_log))));
  std::vector<double> w(d_out + 1, 0.0);
  double added = 0.0;
  w[0] += p.coeffs.empty() ? 0.0 : p.coeffs[0];
  for (std::size_t k = 1; k <= d; ++k) {
    const double ck = p.coeffs[k];
    if (ck == 0.0) continue;
    const std::size_t kp = std::min<std::size_t>(
        k, static_cast<std::size_t>(std::ceil(std::sqrt(2.0 * double(k) * budget_log))));
    const std::vector<double> wk = monomial_cheb_weights(k);
    for (std::size_t j = 0; j <= k; ++j) {
      if (j <= kp)
        w[j] += ck * wk[j];
      else
        added += std::abs(ck) * std::abs(wk[j]);
    }
  }

  Polynomial out;
  out.basis = PolyBasis::chebyshev;
  out.stable = std::move(w);
  out.map_c0 = 0.0;
  out.map_c1 = 1.0;
  out.coeffs = cheb_to_monomial(out.stable);
  out.lo = p.lo;
  out.hi = p.hi;
  out.cert_error = p.cert_error + added;
  double wl1 = 0.0;
  for (double v : out.stable) wl1 += std::abs(v);
  out.cert_sup = std::min(wl1, p.cert_sup + added);
  check_finite(out.coeffs, "replace_monomials");
  const std::size_t grid = 10 * (d + 1);
  const double drift = sup_error(out, [&p](double x) { return p.eval(x); }, p.lo, p.hi, grid);
  if (drift > added * (1.0 + 1e-9) + 1e-12)
    throw CheckError("replace_monomials: grid drift " + std::to_string(drift) +
                     " exceeds the certified budget " + std::to_string(added));
  if (p.bound) {
    out.bound = p.bound;
    out.bound->degree = d_out;
    out.bound->remainder = out.cert_error;
  }
  return out;
}

// ---- Improved (compressed) builders ----

namespace {

Polynomial improved_impl(double kappa, double eps, bool log_target) {
  const char* name = log_target ? "improved_log" : "improved_inverse";
  if (!(kappa >= 1.0)) throw InputError(std::string(name) + ": kappa must be at least 1");
  if (!(eps > 0.0 && eps < 1.0))
    throw InputError(std::string(name) + ": eps must be in (0,1)");

  const Polynomial taylor =
      log_target ? taylor_log(kappa, eps / 2.0) : taylor_inverse(kappa, eps / 2.0);

  // The same polynomial viewed in z = 1-x on [0, 1-1/kappa]: the shifted-basis
  // coefficients are its z-monomial coefficients, all of magnitude <= 1.
  Polynomial in_z;
  in_z.coeffs = taylor.stable;
  in_z.stable = taylor.stable;
  in_z.basis = PolyBasis::monomial;
  in_z.lo = 0.0;
  in_z.hi = 1.0 - 1.0 / kappa;
  in_z.cert_sup = taylor.cert_sup;
  in_z.cert_error = taylor.cert_error;

  const Polynomial packed = replace_monomials(in_z, eps / 2.0);

  Polynomial out;
  out.basis = PolyBasis::chebyshev;
  out.stable = packed.stable;
  out.map_c0 = 1.0;   // u = 1 - x
  out.map_c1 = -1.0;
  out.coeffs = compose_one_minus_x(packed.coeffs);  // substitute z = 1-x
  out.lo = 1.0 / kappa;
  out.hi = 1.0;
  out.cert_sup = packed.cert_sup;
  out.cert_error = packed.cert_error;
  check_finite(out.coeffs, name);
  out.bound = DegreeBound{log_target ? FuncTag::log_fn : FuncTag::inverse_fn,
                          kappa,
                          eps,
                          taylor.degree(),
                          out.degree(),
                          taylor.bound && taylor.bound->bumped,
                          out.cert_error};

  const auto target = log_target ? std::function<double(double)>([](double x) { return std::log(x); })
                                 : std::function<double(double)>([](double x) { return 1.0 / x; });
  if (!certificates_hold(out, target, name))
    throw CheckError(std::string(name) + ": composite grid check failed its certificate");
  return out;
}

}  // namespace

Polynomial improved_log(double kappa, double eps) { return improved_impl(kappa, eps, true); }

Polynomial improved_inverse(double kappa, double eps) {
  return improved_impl(kappa, eps, false);
}

// ---- POLY text format ----

void save_poly(std::ostream& out, const Polynomial& p) {
  check_conditioning(p);
  out << "POLY " << p.degree() << ' ' << std::setprecision(17) << p.lo << ' ' << p.hi
      << '\n';
  for (std::size_t k = 0; k <= p.degree(); ++k)
    out << std::setprecision(17) << (k < p.coeffs.size() ? p.coeffs[k] : 0.0) << '\n';
}

void save_poly_file(const std::string& path, const Polynomial& p) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path + " for writing");
  save_poly(out, p);
}

Polynomial load_poly(std::istream& in) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
  }
  if (tokens.empty() || tokens[0] != "POLY")
    throw InputError("POLY parse: missing POLY header");
  if (tokens.size() < 4) throw InputError("POLY parse: truncated header");
  std::size_t d;
  double lo, hi;
  try {
    d = std::stoul(tokens[1]);
    lo = std::stod(tokens[2]);
    hi = std::stod(tokens[3]);
  } catch (const std::exception&) {
    throw InputError("POLY parse: bad header field");
  }
  check_degree_cap(d, "load_poly");
  if (tokens.size() != 4 + d + 1)
    throw InputError("POLY parse: expected " + std::to_string(d + 1) +
                     " coefficients, found " + std::to_string(tokens.size() - 4));
  std::vector<double> c(d + 1);
  for (std::size_t k = 0; k <= d; ++k) {
    std::size_t used = 0;
    try {
      c[k] = std::stod(tokens[4 + k], &used);
    } catch (const std::exception&) {
      throw InputError("POLY parse: bad coefficient " + tokens[4 + k]);
    }
    if (used != tokens[4 + k].size() || !std::isfinite(c[k]))
      throw InputError("POLY parse: bad coefficient " + tokens[4 + k]);
  }
  return make_monomial(std::move(c), lo, hi);
}

Polynomial load_poly_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return load_poly(in);
}

}  // namespace specsum
