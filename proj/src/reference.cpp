#include "specsum/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "specsum/kahan.hpp"
#include "specsum/rng.hpp"

namespace specsum {

namespace {

double off_diag_frobenius(const DenseMatrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j) s += std::norm(m(i, j));
  return std::sqrt(s);
}

}  // namespace

Spectrum eig_hermitian(const DenseMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 0 || m.cols() != n) throw InputError("eig_hermitian: matrix not square");
  if (n > kDenseScaleLimit)
    throw GuardError("eig_hermitian: side " + std::to_string(n) + " exceeds dense limit " +
                     std::to_string(kDenseScaleLimit));
  const double dev = m.hermitian_deviation();
  if (!(dev <= 1e-12))
    throw InputError("eig_hermitian: matrix not Hermitian (deviation " + std::to_string(dev) +
                     ")");

  DenseMatrix a = m;
  DenseMatrix v = DenseMatrix::identity(n);
  const double target = 1e-12 * std::max(m.frobenius(), 1e-300);

  bool converged = n == 1 || off_diag_frobenius(a) <= target;
  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx z = a(p, q);
        const double r = std::abs(z);
        if (r == 0.0) continue;
        // Phase absorption: H restricted to (p,q) equals D [[ap, r],[r, aq]] D*
        // with D = diag(1, e^{-i phi}); then a real Jacobi rotation.
        const cplx phase = z / r;  // e^{i phi}
        const double ap = a(p, p).real(), aq = a(q, q).real();
        const double tau = (aq - ap) / (2.0 * r);
        const double t =
            (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // Column rotation J: J(p,p)=c, J(p,q)=s, J(q,p)=-s e^{-i phi},
        // J(q,q)=c e^{-i phi}; apply a <- J* a J, v <- v J.
        const cplx jqp = -s * std::conj(phase);
        const cplx jqq = c * std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp + jqp * akq;
          a(k, q) = s * akp + jqq * akq;
          a(p, k) = std::conj(a(k, p));
          a(q, k) = std::conj(a(k, q));
        }
        a(p, p) = ap - t * r;
        a(q, q) = aq + t * r;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp + jqp * vkq;
          v(k, q) = s * vkp + jqq * vkq;
        }
      }
    converged = off_diag_frobenius(a) <= target;
  }
  if (!converged) throw CheckError("eig_hermitian: no convergence after 100 sweeps");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

  Spectrum out;
  out.eigenvalues.resize(n);
  out.vectors = DenseMatrix(n, n);
  for (std::size_t c2 = 0; c2 < n; ++c2) {
    out.eigenvalues[c2] = a(order[c2], order[c2]).real();
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, c2) = v(k, order[c2]);
  }

  double worst = 0.0;
  for (std::size_t c2 = 0; c2 < n; ++c2) {
    double norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cplx acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += m(i, k) * out.vectors(k, c2);
      acc -= out.eigenvalues[c2] * out.vectors(i, c2);
      norm2 += std::norm(acc);
    }
    worst = std::max(worst, std::sqrt(norm2));
  }
  out.residual = worst;
  if (!(worst <= 1e-8 * double(n)))
    throw CheckError("eig_hermitian: residual " + std::to_string(worst) +
                     " exceeds 1e-8 * N");
  return out;
}

double exact_spectral_sum(const DenseMatrix& m, SumTarget f, double param,
                          const Polynomial* poly) {
  const Spectrum sp = eig_hermitian(m);
  NeumaierSum sum;
  for (const double lam : sp.eigenvalues) {
    switch (f) {
      case SumTarget::log_fn:
        if (!(lam > 0.0))
          throw InputError("exact_spectral_sum: log needs a positive spectrum, found " +
                           std::to_string(lam));
        sum.add(std::log(lam));
        break;
      case SumTarget::inverse_fn:
        if (lam == 0.0) throw InputError("exact_spectral_sum: inverse of singular matrix");
        sum.add(1.0 / lam);
        break;
      case SumTarget::power_fn:
        sum.add(std::pow(lam, param));
        break;
      case SumTarget::exp_fn:
        sum.add(std::exp(-param * lam));
        break;
      case SumTarget::poly_fn:
        if (poly == nullptr) throw InputError("exact_spectral_sum: missing polynomial");
        sum.add(poly->eval(lam));
        break;
    }
  }
  return sum.value();
}

namespace {

void enumerate_walks(const MatrixOracle& a, std::size_t depth_left, std::size_t target,
                     std::size_t vertex, cplx weight, CplxSum& acc) {
  if (depth_left == 0) {
    if (vertex == target) acc.add(weight);
    return;
  }
  std::vector<EntryRef> support;
  a.row(vertex, support);
  for (const auto& e : support)
    enumerate_walks(a, depth_left - 1, target, e.index, weight * e.value, acc);
}

}  // namespace

cplx walk_enumerate_entry(const MatrixOracle& a, std::size_t d, std::size_t i, std::size_t j) {
  if (i >= a.dim() || j >= a.dim()) throw InputError("walk enumeration: index out of range");
  double count = 1.0;
  for (std::size_t k = 0; k < d; ++k) {
    count *= double(a.sparsity());
    if (count > 1e7)
      throw GuardError("walk enumeration: s^d exceeds 1e7 (s=" +
                       std::to_string(a.sparsity()) + ", d=" + std::to_string(d) + ")");
  }
  if (d == 0) return i == j ? 1.0 : 0.0;
  CplxSum acc;
  enumerate_walks(a, d, j, i, cplx(1.0, 0.0), acc);
  return acc.value();
}

double walk_enumerate_power(const MatrixOracle& a, std::size_t d, std::size_t i) {
  return walk_enumerate_entry(a, d, i, i).real();
}

namespace {

struct Lu {
  DenseMatrix lu;
  std::vector<std::size_t> perm;
  int sign = 1;
};

Lu lu_factor(const DenseMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 0 || m.cols() != n) throw InputError("LU: matrix not square");
  if (n > kDenseScaleLimit)
    throw GuardError("LU: side " + std::to_string(n) + " exceeds dense limit");
  Lu f{m, std::vector<std::size_t>(n), 1};
  auto& a = f.lu;
  std::iota(f.perm.begin(), f.perm.end(), 0);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a(k, k));
    for (std::size_t r = k + 1; r < n; ++r)
      if (std::abs(a(r, k)) > best) {
        best = std::abs(a(r, k));
        piv = r;
      }
    if (best < 1e-300) throw InputError("LU: numerically singular pivot");
    if (piv != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(piv, c));
      std::swap(f.perm[k], f.perm[piv]);
      f.sign = -f.sign;
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      const cplx factor = a(r, k) / a(k, k);
      a(r, k) = factor;
      for (std::size_t c = k + 1; c < n; ++c) a(r, c) -= factor * a(k, c);
    }
  }
  return f;
}

}  // namespace

cplx dense_determinant(const DenseMatrix& m) {
  const Lu f = lu_factor(m);
  cplx det(double(f.sign), 0.0);
  for (std::size_t k = 0; k < m.rows(); ++k) det *= f.lu(k, k);
  return det;
}

DenseMatrix dense_inverse(const DenseMatrix& m) {
  const std::size_t n = m.rows();
  const Lu f = lu_factor(m);
  DenseMatrix inv(n, n);
  std::vector<cplx> y(n), x(n);
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t i = 0; i < n; ++i) {
      cplx b = f.perm[i] == col ? 1.0 : 0.0;
      for (std::size_t k = 0; k < i; ++k) b -= f.lu(i, k) * y[k];
      y[i] = b;
    }
    for (std::size_t ii = n; ii-- > 0;) {
      cplx b = y[ii];
      for (std::size_t k = ii + 1; k < n; ++k) b -= f.lu(ii, k) * x[k];
      x[ii] = b / f.lu(ii, ii);
    }
    for (std::size_t i = 0; i < n; ++i) inv(i, col) = x[i];
  }
  const double cond_proxy = m.max_abs() * inv.max_abs() * double(n);
  if (cond_proxy > 1e14)
    throw GuardError("dense_inverse: condition estimate " + std::to_string(cond_proxy) +
                     " too large for a trustworthy inverse");
  const double resid = (m * inv - DenseMatrix::identity(n)).max_abs();
  if (!(resid <= 1e-8))
    throw CheckError("dense_inverse: ||M M^-1 - I||_max = " + std::to_string(resid));
  return inv;
}

double hutchinson_baseline(const MatrixOracle& a, const Polynomial& p, std::size_t samples,
                           std::uint64_t seed) {
  const std::size_t n = a.dim();
  if (n > kDenseScaleLimit)
    throw GuardError("hutchinson: dimension " + std::to_string(n) + " exceeds dense limit");
  if (samples == 0) throw InputError("hutchinson: need at least one sample");
  if (p.coeffs.empty()) return 0.0;
  const auto& c = p.coeffs;
  const std::size_t d = p.degree();
  std::vector<cplx> v(n), y(n), ay(n);
  std::vector<EntryRef> row;
  NeumaierSum mean;
  for (std::size_t t = 0; t < samples; ++t) {
    CounterRng rng(seed, t);
    for (std::size_t i = 0; i < n; ++i) v[i] = (rng.next_u64() & 1) ? 1.0 : -1.0;
    // Horner: y = c_d v; y = A y + c_k v.
    for (std::size_t i = 0; i < n; ++i) y[i] = c[d] * v[i];
    for (std::size_t k = d; k-- > 0;) {
      for (std::size_t i = 0; i < n; ++i) {
        a.row(i, row);
        cplx acc = c[k] * v[i];
        for (const auto& e : row) acc += e.value * y[e.index];
        ay[i] = acc;
      }
      std::swap(y, ay);
    }
    CplxSum dot;
    for (std::size_t i = 0; i < n; ++i) dot.add(std::conj(v[i]) * y[i]);
    mean.add(dot.value().real());
  }
  return mean.value() / double(samples);
}

DenseMatrix materialize(const MatrixOracle& a) {
  const std::size_t n = a.dim();
  if (n > kDenseScaleLimit)
    throw GuardError("materialize: dimension " + std::to_string(n) + " exceeds dense limit");
  DenseMatrix m(n, n);
  std::vector<EntryRef> row;
  for (std::size_t i = 0; i < n; ++i) {
    a.row(i, row);
    for (const auto& e : row) m(i, e.index) = e.value;
  }
  return m;
}

}  // namespace specsum
