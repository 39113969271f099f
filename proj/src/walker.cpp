#include "specsum/walker.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "specsum/kahan.hpp"

namespace specsum {

bool tree_walk_refused(std::size_t sparsity, std::size_t d) {
  // s = 1 has no branching: the walk is a single path, linear in d.
  return sparsity >= 2 && double(d) * std::log2(double(sparsity)) > 60.0;
}

namespace {

void check_tree_guard(std::size_t s, std::size_t d) {
  if (tree_walk_refused(s, d))
    throw GuardError("walker: depth " + std::to_string(d) + " with sparsity " +
                     std::to_string(s) + " exceeds the 2^60 walk-tree guard; reduce the degree");
}

void check_memo_guard(std::size_t n, std::size_t d) {
  const double slots = double(n) * double(d + 1);
  if (slots > 1e8)
    throw GuardError("walker: memo table " + std::to_string(n) + " x " + std::to_string(d + 1) +
                     " exceeds 1e8 slots");
}

void check_real(cplx v, bool hermitian, const char* what) {
  if (!hermitian) return;
  const double tol = 1e-10 * std::max(1.0, std::abs(v));
  if (std::abs(v.imag()) > tol)
    throw CheckError(std::string(what) + ": imaginary residue " + std::to_string(v.imag()) +
                     " on a Hermitian diagonal");
}

// Single-path traversal for sparsity-1 oracles (no branching, no recursion).
cplx path_walk(const MatrixOracle& a, std::size_t d, std::size_t i, std::size_t j,
               std::uint64_t& queries) {
  std::size_t vertex = i;
  cplx weight = 1.0;
  std::vector<EntryRef> row;
  for (std::size_t t = 0; t < d; ++t) {
    a.row(vertex, row);
    queries += row.size();
    if (row.empty()) return 0.0;
    weight *= row[0].value;
    vertex = row[0].index;
  }
  return vertex == j ? weight : 0.0;
}

void tree_walk(const MatrixOracle& a, std::size_t depth_left, std::size_t target,
               std::size_t vertex, cplx weight, CplxSum& acc, std::uint64_t& queries,
               std::vector<EntryRef>* rows) {
  if (depth_left == 0) {
    if (vertex == target) acc.add(weight);
    return;
  }
  auto& row = rows[depth_left - 1];
  a.row(vertex, row);
  queries += row.size();
  for (const auto& e : row)
    tree_walk(a, depth_left - 1, target, e.index, weight * e.value, acc, queries, rows);
}

// DP over (vertex, remaining power): cur[w] = A^t(w, start).
cplx memo_power(const MatrixOracle& a, std::size_t d, std::size_t start, std::size_t read,
                std::uint64_t& queries) {
  const std::size_t n = a.dim();
  check_memo_guard(n, d);
  std::vector<std::vector<EntryRef>> rows(n);
  for (std::size_t w = 0; w < n; ++w) {
    a.row(w, rows[w]);
    queries += rows[w].size();
  }
  std::vector<cplx> cur(n, cplx(0.0, 0.0)), nxt(n);
  cur[start] = 1.0;
  for (std::size_t t = 0; t < d; ++t) {
    for (std::size_t w = 0; w < n; ++w) {
      cplx acc = 0.0;
      for (const auto& e : rows[w]) acc += e.value * cur[e.index];
      nxt[w] = acc;
    }
    std::swap(cur, nxt);
  }
  return cur[read];
}

}  // namespace

WalkValue product_entry(const MatrixOracle& a, const MatrixOracle& b, std::size_t i,
                        std::size_t j) {
  if (a.dim() != b.dim()) throw InputError("product_entry: dimension mismatch");
  if (i >= a.dim() || j >= a.dim()) throw InputError("product_entry: index out of range");
  WalkValue out;
  std::vector<EntryRef> row;
  a.row(i, row);
  out.query_count += row.size();
  CplxSum acc;
  for (const auto& e : row) {
    const cplx bv = b.entry(e.index, j);
    ++out.query_count;
    acc.add(e.value * bv);
  }
  out.value = acc.value();
  return out;
}

namespace {

void chain_walk(const std::vector<const MatrixOracle*>& chain, std::size_t t,
                std::size_t target, std::size_t vertex, cplx weight, CplxSum& acc,
                std::uint64_t& queries, std::vector<EntryRef>* rows) {
  if (t == chain.size()) {
    if (vertex == target) acc.add(weight);
    return;
  }
  auto& row = rows[t];
  chain[t]->row(vertex, row);
  queries += row.size();
  for (const auto& e : row)
    chain_walk(chain, t + 1, target, e.index, weight * e.value, acc, queries, rows);
}

}  // namespace

WalkValue product_entry(const std::vector<const MatrixOracle*>& chain, std::size_t i,
                        std::size_t j, const WalkOptions& opt) {
  if (chain.empty()) throw InputError("product_entry: empty oracle chain");
  const std::size_t n = chain[0]->dim();
  for (const auto* m : chain)
    if (m == nullptr || m->dim() != n)
      throw InputError("product_entry: chain dimension mismatch");
  if (i >= n || j >= n) throw InputError("product_entry: index out of range");
  const std::size_t d = chain.size();
  WalkValue out;

  if (opt.memoize) {
    check_memo_guard(n, d);
    // cur[w] = (M_{t+1} ... M_d)(w, j), folded right to left.
    std::vector<cplx> cur(n, cplx(0.0, 0.0)), nxt(n);
    cur[j] = 1.0;
    std::vector<EntryRef> row;
    for (std::size_t t = d; t-- > 0;) {
      for (std::size_t w = 0; w < n; ++w) {
        chain[t]->row(w, row);
        out.query_count += row.size();
        cplx acc = 0.0;
        for (const auto& e : row) acc += e.value * cur[e.index];
        nxt[w] = acc;
      }
      std::swap(cur, nxt);
    }
    out.value = cur[i];
    return out;
  }

  std::size_t s_max = 1;
  for (const auto* m : chain) s_max = std::max(s_max, m->sparsity());
  if (s_max == 1) {
    std::size_t vertex = i;
    cplx weight = 1.0;
    std::vector<EntryRef> row;
    for (std::size_t t = 0; t < d; ++t) {
      chain[t]->row(vertex, row);
      out.query_count += row.size();
      if (row.empty()) return out;
      weight *= row[0].value;
      vertex = row[0].index;
    }
    out.value = vertex == j ? weight : 0.0;
    return out;
  }
  check_tree_guard(s_max, d);
  CplxSum acc;
  std::vector<std::vector<EntryRef>> rows(d);
  chain_walk(chain, 0, j, i, cplx(1.0, 0.0), acc, out.query_count, rows.data());
  out.value = acc.value();
  return out;
}

WalkValue power_entry(const MatrixOracle& m, std::size_t d, std::size_t i, std::size_t j,
                      const WalkOptions& opt) {
  if (i >= m.dim() || j >= m.dim()) throw InputError("power_entry: index out of range");
  WalkValue out;
  if (d == 0) {
    out.value = i == j ? 1.0 : 0.0;
    return out;
  }
  if (opt.memoize) {
    out.value = memo_power(m, d, j, i, out.query_count);
    return out;
  }
  if (m.sparsity() == 1) {
    out.value = path_walk(m, d, i, j, out.query_count);
    return out;
  }
  check_tree_guard(m.sparsity(), d);
  CplxSum acc;
  std::vector<std::vector<EntryRef>> rows(d);
  tree_walk(m, d, j, i, cplx(1.0, 0.0), acc, out.query_count, rows.data());
  out.value = acc.value();
  return out;
}

namespace {

// One traversal collecting every closed prefix: walks are expanded to depth d
// and each passage through the root at depth t contributes to v[t].
void diag_tree(const MatrixOracle& a, std::size_t depth, std::size_t d, std::size_t root,
               std::size_t vertex, cplx weight, std::vector<CplxSum>& sums,
               std::uint64_t& queries, std::vector<EntryRef>* rows) {
  if (vertex == root) sums[depth].add(weight);
  if (depth == d) return;
  auto& row = rows[depth];
  a.row(vertex, row);
  queries += row.size();
  for (const auto& e : row)
    diag_tree(a, depth + 1, d, root, e.index, weight * e.value, sums, queries, rows);
}

}  // namespace

PowerDiagonal diagonal_powers(const MatrixOracle& m, std::size_t d, std::size_t i,
                              const WalkOptions& opt) {
  if (i >= m.dim()) throw InputError("diagonal_powers: index out of range");
  PowerDiagonal out;
  std::vector<cplx> raw(d + 1, cplx(0.0, 0.0));

  if (opt.memoize) {
    const std::size_t n = m.dim();
    check_memo_guard(n, d);
    std::vector<std::vector<EntryRef>> rows(n);
    for (std::size_t w = 0; w < n; ++w) {
      m.row(w, rows[w]);
      out.query_count += rows[w].size();
    }
    std::vector<cplx> cur(n, cplx(0.0, 0.0)), nxt(n);
    cur[i] = 1.0;
    raw[0] = 1.0;
    for (std::size_t t = 1; t <= d; ++t) {
      for (std::size_t w = 0; w < n; ++w) {
        cplx acc = 0.0;
        for (const auto& e : rows[w]) acc += e.value * cur[e.index];
        nxt[w] = acc;
      }
      std::swap(cur, nxt);
      raw[t] = cur[i];
    }
  } else if (m.sparsity() == 1) {
    std::size_t vertex = i;
    cplx weight = 1.0;
    raw[0] = 1.0;
    std::vector<EntryRef> row;
    for (std::size_t t = 1; t <= d; ++t) {
      m.row(vertex, row);
      out.query_count += row.size();
      if (row.empty()) break;
      weight *= row[0].value;
      vertex = row[0].index;
      if (vertex == i) raw[t] = weight;
    }
  } else {
    check_tree_guard(m.sparsity(), d);
    std::vector<CplxSum> sums(d + 1);
    std::vector<std::vector<EntryRef>> rows(d);
    diag_tree(m, 0, d, i, i, cplx(1.0, 0.0), sums, out.query_count, rows.data());
    for (std::size_t t = 0; t <= d; ++t) raw[t] = sums[t].value();
  }

  const bool unit_window = [&] {
    const auto b = m.bounds();
    return b && std::max(std::abs(b->lo), std::abs(b->hi)) <= 1.0;
  }();
  out.values.resize(d + 1);
  for (std::size_t t = 0; t <= d; ++t) {
    check_real(raw[t], m.hermitian(), "diagonal_powers");
    out.values[t] = raw[t].real();
    if (unit_window && std::abs(out.values[t]) > 1.0 + 1e-9)
      throw CheckError("diagonal_powers: |A^" + std::to_string(t) + "(i,i)| = " +
                       std::to_string(std::abs(out.values[t])) +
                       " breaks the declared unit spectral window");
  }
  return out;
}

WalkOptions auto_walk_options(const MatrixOracle& m, std::size_t d) {
  const std::size_t s = m.sparsity();
  const bool tree_ok = !tree_walk_refused(s, d);
  const bool memo_ok = double(m.dim()) * double(d + 1) <= 1e8;
  if (!tree_ok && !memo_ok)
    throw GuardError("walker: degree " + std::to_string(d) + " with sparsity " +
                     std::to_string(s) + " on dimension " + std::to_string(m.dim()) +
                     " is beyond both traversal modes; reduce the degree");
  if (!tree_ok) return {true};
  if (!memo_ok || s <= 1) return {false};
  // Saturating s^d against the memo cost 16 * N * (d+1) * s.
  double tree_cost = 1.0;
  for (std::size_t t = 0; t < d && tree_cost < 1e30; ++t) tree_cost *= double(s);
  const double memo_cost = 16.0 * double(m.dim()) * double(d + 1) * double(s);
  return {tree_cost > memo_cost};
}

}  // namespace specsum
