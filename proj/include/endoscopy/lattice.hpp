#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "exactnum.hpp"

namespace endoscopy {

using IVec = std::vector<long long>;
using IMat = std::vector<IVec>;  // row-major

inline IMat identity(size_t n) {
  IMat m(n, IVec(n, 0));
  for (size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline size_t cols(const IMat& m, size_t fallback = 0) { return m.empty() ? fallback : m[0].size(); }

inline IMat mat_mul(const IMat& a, const IMat& b) {
  size_t n = a.size(), k = b.size(), m = cols(b);
  IMat r(n, IVec(m, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < k; ++j)
      if (a[i][j])
        for (size_t l = 0; l < m; ++l) r[i][l] += a[i][j] * b[j][l];
  return r;
}

inline IVec mat_vec(const IMat& a, const IVec& v) {
  IVec r(a.size(), 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) r[i] += a[i][j] * v[j];
  return r;
}

inline RVec mat_vec(const IMat& a, const RVec& v) {
  RVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j)
      if (a[i][j]) r[i] += Rat(a[i][j]) * v[j];
  return r;
}

inline IMat transpose(const IMat& a, size_t ncols = 0) {
  size_t n = a.size(), m = cols(a, ncols);
  IMat t(m, IVec(n, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j) t[j][i] = a[i][j];
  return t;
}

inline long long idot(const IVec& a, const IVec& b) {
  long long s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline RVec to_rvec(const IVec& v) { return RVec(v.begin(), v.end()); }

inline IVec operator+(const IVec& a, const IVec& b) {
  IVec r(a);
  for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}
inline IVec operator-(const IVec& a, const IVec& b) {
  IVec r(a);
  for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}
inline IVec operator-(const IVec& a) {
  IVec r(a);
  for (auto& x : r) x = -x;
  return r;
}
inline IVec operator*(long long c, const IVec& a) {
  IVec r(a);
  for (auto& x : r) x *= c;
  return r;
}
inline RVec operator+(const RVec& a, const RVec& b) {
  RVec r(a);
  for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}
inline RVec operator-(const RVec& a, const RVec& b) {
  RVec r(a);
  for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}
inline RVec operator*(const Rat& c, const RVec& a) {
  RVec r(a);
  for (auto& x : r) x *= c;
  return r;
}
inline Rat dot(const IVec& a, const RVec& b) {
  Rat s;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i]) s += Rat(a[i]) * b[i];
  return s;
}
inline bool is_integral(const RVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x.is_integer(); });
}
inline bool is_zero(const IVec& v) {
  return std::all_of(v.begin(), v.end(), [](long long x) { return x == 0; });
}

inline std::string to_string(const IVec& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

// Row reduction over Q. Returns rank; optionally the determinant for square input.
inline size_t rational_rank(const IMat& a, Rat* det = nullptr) {
  std::vector<RVec> m;
  for (const auto& row : a) m.push_back(to_rvec(row));
  size_t n = m.size(), c = cols(a), r = 0;
  Rat d(1);
  for (size_t j = 0; j < c && r < n; ++j) {
    size_t p = r;
    while (p < n && m[p][j] == Rat(0)) ++p;
    if (p == n) continue;
    if (p != r) { std::swap(m[p], m[r]); d = -d; }
    d *= m[r][j];
    for (size_t i = r + 1; i < n; ++i) {
      if (m[i][j] == Rat(0)) continue;
      Rat f = m[i][j] / m[r][j];
      for (size_t l = j; l < c; ++l) m[i][l] -= f * m[r][l];
    }
    ++r;
  }
  if (det) *det = (r == n && n == c) ? d : Rat(0);
  return r;
}

inline long long determinant(const IMat& a) {
  Rat d;
  rational_rank(a, &d);
  if (!d.is_integer()) throw std::logic_error("determinant: non-integral result");
  return d.num();
}

// Exact solution of a x = b over Q; nullopt if inconsistent. Free variables set to 0.
inline std::optional<RVec> solve_rational(const IMat& a, const RVec& b) {
  size_t n = a.size(), c = cols(a);
  std::vector<RVec> m;
  for (size_t i = 0; i < n; ++i) {
    RVec row = to_rvec(a[i]);
    row.push_back(b[i]);
    m.push_back(row);
  }
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t j = 0; j < c && r < n; ++j) {
    size_t p = r;
    while (p < n && m[p][j] == Rat(0)) ++p;
    if (p == n) continue;
    std::swap(m[p], m[r]);
    Rat inv = Rat(1) / m[r][j];
    for (auto& x : m[r]) x *= inv;
    for (size_t i = 0; i < n; ++i) {
      if (i == r || m[i][j] == Rat(0)) continue;
      Rat f = m[i][j];
      for (size_t l = j; l <= c; ++l) m[i][l] -= f * m[r][l];
    }
    pivots.push_back(j);
    ++r;
  }
  for (size_t i = r; i < n; ++i)
    if (!(m[i][c] == Rat(0))) return std::nullopt;
  RVec x(c);
  for (size_t i = 0; i < r; ++i) x[pivots[i]] = m[i][c];
  return x;
}

inline IMat inverse_unimodular(const IMat& a) {
  size_t n = a.size();
  IMat inv(n, IVec(n, 0));
  for (size_t j = 0; j < n; ++j) {
    RVec e(n);
    e[j] = Rat(1);
    auto x = solve_rational(a, e);
    if (!x || !is_integral(*x)) throw std::invalid_argument("matrix is not unimodular");
    for (size_t i = 0; i < n; ++i) inv[i][j] = (*x)[i].num();
  }
  return inv;
}

// Smith normal form: u * a * v = d with u, v unimodular and d diagonal,
// diagonal entries nonnegative and each dividing the next.
struct Smith {
  IMat u, d, v;
  size_t rank = 0;
  std::vector<long long> diagonal() const {
    std::vector<long long> r;
    for (size_t i = 0; i < std::min(d.size(), cols(d)); ++i) r.push_back(d[i][i]);
    return r;
  }
};

inline Smith smith_normal_form(const IMat& a, size_t ncols = 0) {
  size_t n = a.size(), m = cols(a, ncols);
  Smith s{identity(n), a, identity(m), 0};
  if (s.d.empty()) return s;
  auto swap_rows = [&](size_t i, size_t j) { std::swap(s.d[i], s.d[j]); std::swap(s.u[i], s.u[j]); };
  auto swap_cols = [&](size_t i, size_t j) {
    for (auto& row : s.d) std::swap(row[i], row[j]);
    for (auto& row : s.v) std::swap(row[i], row[j]);
  };
  auto add_row = [&](size_t dst, size_t src, long long f) {  // row dst += f*row src
    for (size_t l = 0; l < m; ++l) s.d[dst][l] += f * s.d[src][l];
    for (size_t l = 0; l < n; ++l) s.u[dst][l] += f * s.u[src][l];
  };
  auto add_col = [&](size_t dst, size_t src, long long f) {
    for (size_t l = 0; l < n; ++l) s.d[l][dst] += f * s.d[l][src];
    for (size_t l = 0; l < m; ++l) s.v[l][dst] += f * s.v[l][src];
  };
  size_t t = 0;
  while (t < std::min(n, m)) {
    // pivot: smallest nonzero absolute value in the remaining block
    size_t pi = n, pj = m;
    long long best = 0;
    for (size_t i = t; i < n; ++i)
      for (size_t j = t; j < m; ++j)
        if (s.d[i][j] && (best == 0 || std::llabs(s.d[i][j]) < best)) { best = std::llabs(s.d[i][j]); pi = i; pj = j; }
    if (best == 0) break;
    swap_rows(t, pi);
    swap_cols(t, pj);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (size_t i = t + 1; i < n; ++i) {
        if (!s.d[i][t]) continue;
        add_row(i, t, -(s.d[i][t] / s.d[t][t]));
        if (s.d[i][t]) { swap_rows(t, i); clean = false; }
      }
      for (size_t j = t + 1; j < m; ++j) {
        if (!s.d[t][j]) continue;
        add_col(j, t, -(s.d[t][j] / s.d[t][t]));
        if (s.d[t][j]) { swap_cols(t, j); clean = false; }
      }
      if (clean) {
        // divisibility of the remaining block
        for (size_t i = t + 1; i < n && clean; ++i)
          for (size_t j = t + 1; j < m && clean; ++j)
            if (s.d[i][j] % s.d[t][t]) { add_row(t, i, 1); clean = false; }
      }
    }
    if (s.d[t][t] < 0) {
      for (size_t l = 0; l < m; ++l) s.d[t][l] = -s.d[t][l];
      for (size_t l = 0; l < n; ++l) s.u[t][l] = -s.u[t][l];
    }
    ++t;
  }
  s.rank = t;
  return s;
}

// Integral basis (columns returned as vectors) of the saturated kernel {x : a x = 0}.
inline std::vector<IVec> kernel_basis(const IMat& a, size_t ncols) {
  Smith s = smith_normal_form(a, ncols);
  std::vector<IVec> basis;
  for (size_t j = s.rank; j < ncols; ++j) {
    IVec col(ncols);
    for (size_t i = 0; i < ncols; ++i) col[i] = s.v[i][j];
    basis.push_back(col);
  }
  return basis;
}

// Is v an integral combination of the given generators?
inline bool in_lattice(const std::vector<IVec>& gens, const IVec& v) {
  if (gens.empty()) return is_zero(v);
  IMat b = transpose(gens);  // columns are generators
  Smith s = smith_normal_form(b);
  IVec uv = mat_vec(s.u, v);
  for (size_t i = 0; i < uv.size(); ++i) {
    if (i < s.rank) {
      if (uv[i] % s.d[i][i]) return false;
    } else if (uv[i]) {
      return false;
    }
  }
  return true;
}

}  // namespace endoscopy
