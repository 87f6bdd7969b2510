#include "catlogic/zlinalg.hpp"

#include "catlogic/fincat.hpp" // catlogic::error

#include <algorithm>
#include <cstdlib>

namespace catlogic {

ZMat zmat_identity(int n) {
  ZMat m(n, ZVec(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

ZMat zmat_mul(const ZMat& a, const ZMat& b) {
  if (a.empty() || b.empty()) return ZMat(a.size());
  ZMat c(a.size(), ZVec(b[0].size(), 0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t k = 0; k < b.size(); ++k) {
      long long aik = a[i][k];
      if (!aik) continue;
      for (size_t j = 0; j < b[0].size(); ++j) c[i][j] += aik * b[k][j];
    }
  return c;
}

ZVec zmat_apply(const ZMat& a, const ZVec& x) {
  ZVec y(a.size(), 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != x.size()) throw error("zmat_apply: size mismatch");
    for (size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  }
  return y;
}

Smith smith_normal_form(ZMat a) {
  int rows = (int)a.size();
  int cols = rows ? (int)a[0].size() : 0;
  for (const auto& r : a)
    if ((int)r.size() != cols) throw error("smith: ragged matrix");
  Smith s;
  s.u = zmat_identity(rows);
  s.v = zmat_identity(cols);
  s.vinv = zmat_identity(cols);

  auto row_add = [&](int dst, int src, long long c) { // row dst += c * row src
    for (int j = 0; j < cols; ++j) a[dst][j] += c * a[src][j];
    for (int j = 0; j < rows; ++j) s.u[dst][j] += c * s.u[src][j];
  };
  auto row_swap = [&](int i, int j) {
    std::swap(a[i], a[j]);
    std::swap(s.u[i], s.u[j]);
  };
  auto row_neg = [&](int i) {
    for (int j = 0; j < cols; ++j) a[i][j] = -a[i][j];
    for (int j = 0; j < rows; ++j) s.u[i][j] = -s.u[i][j];
  };
  auto col_add = [&](int dst, int src, long long c) { // col dst += c * col src
    for (int i = 0; i < rows; ++i) a[i][dst] += c * a[i][src];
    for (int i = 0; i < cols; ++i) s.v[i][dst] += c * s.v[i][src];
    // inverse records the opposite op on rows: row src -= c * row dst
    for (int j = 0; j < cols; ++j) s.vinv[src][j] -= c * s.vinv[dst][j];
  };
  auto col_swap = [&](int i, int j) {
    for (int r = 0; r < rows; ++r) std::swap(a[r][i], a[r][j]);
    for (int r = 0; r < cols; ++r) std::swap(s.v[r][i], s.v[r][j]);
    std::swap(s.vinv[i], s.vinv[j]);
  };
  auto col_neg = [&](int j) {
    for (int i = 0; i < rows; ++i) a[i][j] = -a[i][j];
    for (int i = 0; i < cols; ++i) s.v[i][j] = -s.v[i][j];
    for (int k = 0; k < cols; ++k) s.vinv[j][k] = -s.vinv[j][k];
  };

  int t = 0;
  while (t < rows && t < cols) {
    // pivot: entry of minimal nonzero magnitude in the remaining block
    int pi = -1, pj = -1;
    for (int i = t; i < rows; ++i)
      for (int j = t; j < cols; ++j)
        if (a[i][j] != 0 &&
            (pi < 0 || std::llabs(a[i][j]) < std::llabs(a[pi][pj]))) {
          pi = i;
          pj = j;
        }
    if (pi < 0) break;
    row_swap(t, pi);
    col_swap(t, pj);
    if (a[t][t] < 0) row_neg(t);

    bool dirty = false;
    for (int i = t + 1; i < rows; ++i)
      if (a[i][t] != 0) {
        long long q = a[i][t] / a[t][t];
        row_add(i, t, -q);
        if (a[i][t] != 0) dirty = true;
      }
    for (int j = t + 1; j < cols; ++j)
      if (a[t][j] != 0) {
        long long q = a[t][j] / a[t][t];
        col_add(j, t, -q);
        if (a[t][j] != 0) dirty = true;
      }
    if (dirty) continue; // smaller remainders appeared; re-pick the pivot
    ++t;
  }
  s.rank = t;
  s.d = std::move(a);
  return s;
}

ZMat kernel_lattice(const ZMat& a) {
  if (a.empty()) return {};
  int cols = (int)a[0].size();
  Smith s = smith_normal_form(a);
  // A x = 0  <=>  D (V^{-1} x) = 0: free coordinates are those past the rank.
  ZMat out;
  for (int j = s.rank; j < cols; ++j) {
    ZVec gen(cols);
    for (int i = 0; i < cols; ++i) gen[i] = s.v[i][j];
    out.push_back(std::move(gen));
  }
  return out;
}

std::optional<ZVec> solve_integer(const ZMat& a, const ZVec& b) {
  if (a.size() != b.size()) throw error("solve_integer: size mismatch");
  if (a.empty()) return ZVec{};
  int cols = (int)a[0].size();
  Smith s = smith_normal_form(a);
  ZVec c = zmat_apply(s.u, b);
  ZVec y(cols, 0);
  for (int i = 0; i < (int)a.size(); ++i) {
    long long d = i < std::min((int)a.size(), cols) ? s.d[i][i] : 0;
    if (i < cols && d != 0) {
      if (c[i] % d != 0) return std::nullopt;
      y[i] = c[i] / d;
    } else if (c[i] != 0) {
      return std::nullopt;
    }
  }
  return zmat_apply(s.v, y);
}

QuotientStructure quotient_structure(int k, const ZMat& rels) {
  QuotientStructure q;
  if (rels.empty()) {
    q.orders.assign(k, 0);
    q.v = q.vinv = zmat_identity(k);
    return q;
  }
  for (const auto& r : rels)
    if ((int)r.size() != k) throw error("quotient_structure: bad relation length");
  Smith s = smith_normal_form(rels);
  q.orders.assign(k, 0);
  for (int i = 0; i < s.rank; ++i) q.orders[i] = s.d[i][i];
  // The row span of rels maps to the row span of D under x' = V^T x: a
  // relation r becomes r V (a row of U^{-1} D), so the quotient splits
  // coordinatewise in the primed coordinates.  x = (V^{-1})^T x' back.
  auto transpose = [](const ZMat& m) {
    if (m.empty()) return m;
    ZMat t(m[0].size(), ZVec(m.size()));
    for (size_t i = 0; i < m.size(); ++i)
      for (size_t j = 0; j < m[0].size(); ++j) t[j][i] = m[i][j];
    return t;
  };
  q.v = transpose(s.vinv);
  q.vinv = transpose(s.v);
  return q;
}

} // namespace catlogic
