#pragma once

// Exact integer matrix algebra: fraction-free rank and determinants, integer
// kernels via column Hermite reduction, lattice index, circuits and coloops.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <utility>
#include <vector>

#include "lissajous/error.hpp"
#include "lissajous/numbers.hpp"

namespace lissajous {

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw Error(ErrorCode::InvalidInput, "ragged matrix rows");
      for (long long v : r) data_.emplace_back(v);
    }
  }

  static IntMatrix from_rows(const std::vector<std::vector<BigInt>>& rows) {
    IntMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < m.rows_; ++i) {
      if (rows[i].size() != m.cols_) throw Error(ErrorCode::InvalidInput, "ragged matrix rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }
  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  BigInt& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const BigInt& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<BigInt>& data() const { return data_; }

  std::vector<BigInt> column(std::size_t j) const {
    std::vector<BigInt> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  std::vector<BigInt> row(std::size_t i) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
            data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }
  IntMatrix select_columns(const std::vector<std::size_t>& idx) const {
    IntMatrix s(rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < idx.size(); ++k) s(i, k) = (*this)(i, idx[k]);
    return s;
  }
  IntMatrix select_rows(const std::vector<std::size_t>& idx) const {
    IntMatrix s(idx.size(), cols_);
    for (std::size_t k = 0; k < idx.size(); ++k)
      for (std::size_t j = 0; j < cols_; ++j) s(k, j) = (*this)(idx[k], j);
    return s;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const BigInt& v) { return v == 0; });
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorCode::InvalidInput, "matrix product shape mismatch");
    IntMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> data_;
};

struct CircuitData {
  std::vector<std::vector<std::size_t>> circuits;   // 0-based column indices, sorted
  std::vector<std::vector<BigInt>> circuit_vectors; // length n, supported on the circuit
  std::vector<std::size_t> coloops;
  std::size_t cl_count = 0;
};

namespace detail {

// Fraction-free row echelon form over an integral domain. Entries stay minors
// of the input, so every division is exact.
template <class T>
std::size_t bareiss_rank(std::vector<T> a, std::size_t rows, std::size_t cols) {
  std::size_t r = 0;
  T prev(1);
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && is_zero(a[piv * cols + c])) ++piv;
    if (piv == rows) continue;
    if (piv != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(a[piv * cols + j], a[r * cols + j]);
    const T p = a[r * cols + c];
    for (std::size_t i = r + 1; i < rows; ++i) {
      const T f = a[i * cols + c];
      for (std::size_t j = c + 1; j < cols; ++j)
        a[i * cols + j] = exact_div(p * a[i * cols + j] - f * a[r * cols + j], prev);
      a[i * cols + c] = T(0);
    }
    prev = p;
    ++r;
  }
  return r;
}

template <class T>
T bareiss_determinant(std::vector<T> a, std::size_t n) {
  if (n == 0) return T(1);
  bool negate = false;
  T prev(1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t piv = k;
    while (piv < n && is_zero(a[piv * n + k])) ++piv;
    if (piv == n) return T(0);
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[piv * n + j], a[k * n + j]);
      negate = !negate;
    }
    const T p = a[k * n + k];
    for (std::size_t i = k + 1; i < n; ++i) {
      const T f = a[i * n + k];
      for (std::size_t j = k + 1; j < n; ++j)
        a[i * n + j] = exact_div(p * a[i * n + j] - f * a[k * n + j], prev);
    }
    prev = p;
  }
  T det = a[n * n - 1];
  return negate ? T(-det) : det;
}

/// g = gcd(a, b) >= 0 with s*a + t*b = g.
inline void extended_gcd(const BigInt& a, const BigInt& b, BigInt& g, BigInt& s, BigInt& t) {
  BigInt r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    BigInt q = r0 / r1;
    BigInt tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = s0 - q * s1;
    s0 = s1;
    s1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  if (r0 < 0) {
    r0 = -r0;
    s0 = -s0;
    t0 = -t0;
  }
  g = r0;
  s = s0;
  t = t0;
}

inline BigInt content(const std::vector<BigInt>& v) {
  BigInt g = 0;
  for (const auto& x : v) g = boost::multiprecision::gcd(g, x);
  return g;
}

/// Divide by the content and make the first nonzero entry positive.
inline void normalize_primitive(std::vector<BigInt>& v) {
  BigInt g = content(v);
  if (g == 0) return;
  auto first = std::find_if(v.begin(), v.end(), [](const BigInt& x) { return x != 0; });
  if (*first < 0) g = -g;
  for (auto& x : v) x /= g;
}

}  // namespace detail

/// Rank over Q.
inline std::size_t rank_rational(const IntMatrix& m) {
  return detail::bareiss_rank(m.data(), m.rows(), m.cols());
}

inline BigInt determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::InvalidInput, "determinant of a non-square matrix");
  return detail::bareiss_determinant(m.data(), m.rows());
}

/// A * U = H with U unimodular and H in column echelon form: the first `rank`
/// columns of H carry positive pivots on a staircase, the rest are zero.
struct ColumnEchelon {
  IntMatrix H;
  IntMatrix U;
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_rows;
};

inline ColumnEchelon column_echelon(const IntMatrix& a) {
  const std::size_t d = a.rows(), n = a.cols();
  ColumnEchelon out{a, IntMatrix::identity(n), 0, {}};
  IntMatrix& h = out.H;
  IntMatrix& u = out.U;
  auto combine = [&](IntMatrix& m, std::size_t p, std::size_t j, const BigInt& s, const BigInt& t,
                     const BigInt& x, const BigInt& y) {
    // col_p <- s col_p + t col_j ; col_j <- x col_p + y col_j
    for (std::size_t i = 0; i < m.rows(); ++i) {
      BigInt cp = m(i, p), cj = m(i, j);
      m(i, p) = s * cp + t * cj;
      m(i, j) = x * cp + y * cj;
    }
  };
  std::size_t p = 0;
  for (std::size_t i = 0; i < d && p < n; ++i) {
    for (std::size_t j = p + 1; j < n; ++j) {
      if (h(i, j) == 0) continue;
      BigInt g, s, t;
      BigInt ap = h(i, p), bj = h(i, j);
      detail::extended_gcd(ap, bj, g, s, t);
      BigInt x = -bj / g, y = ap / g;
      combine(h, p, j, s, t, x, y);
      combine(u, p, j, s, t, x, y);
    }
    if (h(i, p) == 0) continue;
    if (h(i, p) < 0)
      for (IntMatrix* m : {&h, &u})
        for (std::size_t r = 0; r < m->rows(); ++r) (*m)(r, p) = -(*m)(r, p);
    out.pivot_rows.push_back(i);
    ++p;
  }
  out.rank = p;
  return out;
}

namespace detail {

inline BigInt dot(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
  BigInt s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Pairwise size reduction of a lattice basis (unimodular, so the lattice is kept).
inline void size_reduce(std::vector<std::vector<BigInt>>& basis) {
  bool changed = true;
  for (int pass = 0; changed && pass < 64; ++pass) {
    changed = false;
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < basis.size(); ++j) {
        if (i == j) continue;
        BigInt nj = dot(basis[j], basis[j]);
        if (nj == 0) continue;
        BigInt num = dot(basis[i], basis[j]);
        // q = round(num / nj)
        BigInt q = (2 * num + nj) / (2 * nj);
        if ((2 * num + nj) < 0 && (2 * num + nj) % (2 * nj) != 0) q -= 1;
        if (q == 0) continue;
        std::vector<BigInt> cand = basis[i];
        for (std::size_t k = 0; k < cand.size(); ++k) cand[k] -= q * basis[j][k];
        if (dot(cand, cand) < dot(basis[i], basis[i])) {
          basis[i] = std::move(cand);
          changed = true;
        }
      }
  }
}

}  // namespace detail

/// n x (n - rank) matrix whose columns form a Z-basis of {m in Z^n : A m = 0}.
/// Columns are primitive, size-reduced and sign-normalized.
inline IntMatrix kernel_lattice_basis(const IntMatrix& a) {
  const std::size_t n = a.cols();
  ColumnEchelon ce = column_echelon(a);
  std::vector<std::vector<BigInt>> basis;
  for (std::size_t j = ce.rank; j < n; ++j) basis.push_back(ce.U.column(j));
  detail::size_reduce(basis);
  for (auto& v : basis) detail::normalize_primitive(v);
  IntMatrix k(n, basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) k(i, j) = basis[j][i];
  return k;
}

/// [Z^d : ZA] for a full row rank A.
inline BigInt lattice_index(const IntMatrix& a) {
  ColumnEchelon ce = column_echelon(a);
  if (ce.rank < a.rows()) throw Error(ErrorCode::RankDeficient, "lattice index needs rank(A) = rows(A)");
  BigInt idx = 1;
  for (std::size_t i = 0; i < a.rows(); ++i) idx *= ce.H(i, i);
  return boost::multiprecision::abs(idx);
}

inline constexpr std::size_t kMaxCircuitColumns = 24;

/// Circuits by breadth-first subset enumeration: a dependent subset that
/// contains no smaller circuit is minimal by construction.
inline CircuitData circuits(const IntMatrix& a) {
  const std::size_t n = a.cols();
  if (n > kMaxCircuitColumns)
    throw Error(ErrorCode::TooManyColumns, "circuit enumeration supports at most 24 columns");
  const std::size_t r = rank_rational(a);
  CircuitData out;
  std::vector<std::uint32_t> found;
  std::vector<std::size_t> idx;
  for (std::size_t k = 1; k <= std::min(n, r + 1); ++k) {
    // lexicographic k-subsets
    idx.resize(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      std::uint32_t mask = 0;
      for (std::size_t i : idx) mask |= std::uint32_t{1} << i;
      bool contains_circuit =
          std::any_of(found.begin(), found.end(), [&](std::uint32_t c) { return (c & mask) == c; });
      if (!contains_circuit) {
        IntMatrix sub = a.select_columns(idx);
        if (rank_rational(sub) < k) {
          IntMatrix ker = kernel_lattice_basis(sub);
          std::vector<BigInt> m(n, BigInt(0));
          for (std::size_t t = 0; t < k; ++t) m[idx[t]] = ker(t, 0);
          detail::normalize_primitive(m);
          found.push_back(mask);
          out.circuits.push_back(idx);
          out.circuit_vectors.push_back(std::move(m));
        }
      }
      // next combination
      std::size_t pos = k;
      while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t t = pos; t < k; ++t) idx[t] = idx[t - 1] + 1;
    }
  }
  // lexicographic order of index lists
  std::vector<std::size_t> order(out.circuits.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return out.circuits[x] < out.circuits[y]; });
  CircuitData sorted;
  for (std::size_t o : order) {
    sorted.circuits.push_back(out.circuits[o]);
    sorted.circuit_vectors.push_back(out.circuit_vectors[o]);
  }
  std::uint32_t covered = 0;
  for (std::uint32_t c : found) covered |= c;
  for (std::size_t j = 0; j < n; ++j)
    if (!(covered & (std::uint32_t{1} << j))) sorted.coloops.push_back(j);
  sorted.cl_count = sorted.coloops.size();
  return sorted;
}

}  // namespace lissajous
