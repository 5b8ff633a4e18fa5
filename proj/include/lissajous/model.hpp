#pragma once

// The Lissajous model (A, b): parametrizations, degree formulas, genericity and
// fiber-degree tests, membership through multiplication matrices, and exact
// reconstruction of the defining equation of a hypersurface.

#include <array>
#include <cmath>
#include <map>
#include <complex>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "lissajous/exactmat.hpp"
#include "lissajous/polynomial.hpp"
#include "lissajous/polytope.hpp"

namespace lissajous {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr std::uint64_t kDefaultSeed = 20240601;

using cplx = std::complex<double>;

struct LissajousModel {
  IntMatrix A;
  std::vector<double> b;
  std::vector<cplx> beta;
  CircuitData circuits;
  IntMatrix kernel_basis;
  BigInt index;
  std::optional<std::vector<long long>> b_integer;  // set when every b_j is an integer

  std::size_t d() const { return A.rows(); }
  std::size_t n() const { return A.cols(); }
  double a(std::size_t i, std::size_t j) const { return static_cast<double>(A(i, j)); }
};

inline LissajousModel build_model(const IntMatrix& a_in, const std::vector<double>& b) {
  if (b.size() != a_in.cols()) throw Error(ErrorCode::InvalidInput, "length(b) must equal the number of columns of A");
  if (a_in.cols() == 0) throw Error(ErrorCode::InvalidInput, "A has no columns");
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < a_in.rows(); ++i) {
    auto row = a_in.row(i);
    if (std::any_of(row.begin(), row.end(), [](const BigInt& v) { return v != 0; })) keep.push_back(i);
  }
  if (keep.empty()) throw Error(ErrorCode::RankDeficient, "A is zero");
  LissajousModel m;
  m.A = a_in.select_rows(keep);
  if (rank_rational(m.A) != m.A.rows())
    throw Error(ErrorCode::RankDeficient, "rank(A) < rows(A); pass a row-reduced matrix of full row rank");
  m.b = b;
  bool integral = std::all_of(b.begin(), b.end(), [](double v) { return std::isfinite(v) && v == std::round(v); });
  if (integral) {
    std::vector<long long> bi;
    for (double v : b) bi.push_back(static_cast<long long>(v));
    m.b_integer = bi;
    for (long long v : bi) m.beta.push_back(to_complex(unit_power(-v)));
  } else {
    for (double v : b) m.beta.push_back(std::polar(1.0, -v * kPi / 2));
  }
  m.circuits = circuits(m.A);
  m.kernel_basis = kernel_lattice_basis(m.A);
  m.index = lattice_index(m.A);
  return m;
}

/// x_j = cos(a_j . t - b_j pi / 2).
inline std::vector<double> param_point(const LissajousModel& m, const std::vector<double>& t) {
  std::vector<double> x(m.n());
  for (std::size_t j = 0; j < m.n(); ++j) {
    double s = 0;
    for (std::size_t i = 0; i < m.d(); ++i) s += m.a(i, j) * t[i];
    x[j] = std::cos(s - m.b[j] * kPi / 2);
  }
  return x;
}

namespace detail {

inline cplx monomial(const LissajousModel& m, const std::vector<cplx>& v, std::size_t j) {
  cplx p = 1.0;
  for (std::size_t i = 0; i < m.d(); ++i) {
    long long e = static_cast<long long>(m.A(i, j));
    if (e != 0) p *= std::pow(v[i], static_cast<int>(e));
  }
  return p;
}

}  // namespace detail

/// x_j = (beta_j v^{a_j} + beta_j^{-1} v^{-a_j}) / 2.
inline std::vector<cplx> torus_param_point(const LissajousModel& m, const std::vector<cplx>& v) {
  if (v.size() != m.d()) throw Error(ErrorCode::InvalidInput, "v must have length d");
  for (const cplx& z : v)
    if (z == cplx(0.0, 0.0)) throw Error(ErrorCode::ZeroCoordinate, "torus coordinates must be nonzero");
  std::vector<cplx> x(m.n());
  for (std::size_t j = 0; j < m.n(); ++j) {
    cplx y = m.beta[j] * detail::monomial(m, v, j);
    x[j] = (y + 1.0 / y) / 2.0;
  }
  return x;
}

/// Per circuit: true iff m^C . b is not an even integer.
inline std::vector<bool> genericity_test(const LissajousModel& m) {
  std::vector<bool> out;
  for (const auto& mc : m.circuits.circuit_vectors) {
    if (m.b_integer) {
      BigInt s = 0;
      for (std::size_t j = 0; j < m.n(); ++j) s += mc[j] * BigInt((*m.b_integer)[j]);
      out.push_back(s % 2 != 0);
    } else {
      double s = 0;
      for (std::size_t j = 0; j < m.n(); ++j) s += static_cast<double>(mc[j]) * m.b[j];
      double nearest_even = 2.0 * std::round(s / 2.0);
      out.push_back(std::abs(s - nearest_even) > 1e-9);
    }
  }
  return out;
}

inline constexpr std::size_t kMaxFiberColumns = 16;

/// Generic fiber cardinality of the map from the scaled toric variety to
/// L_{A,b}: the number of coordinate-inversion patterns of a random torus
/// point that stay on the toric variety. Five trials with a majority vote.
inline std::size_t fiber_degree(const LissajousModel& m, std::uint64_t seed = kDefaultSeed) {
  const std::size_t n = m.n(), d = m.d();
  if (n > kMaxFiberColumns) throw Error(ErrorCode::DimensionGuard, "fiber_degree supports n <= 16");
  const std::size_t r = m.kernel_basis.cols();
  std::vector<cplx> beta_m(r, 1.0);
  for (std::size_t k = 0; k < r; ++k)
    for (std::size_t j = 0; j < n; ++j)
      beta_m[k] *= std::pow(m.beta[j], static_cast<int>(m.kernel_basis(j, k)));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::map<std::size_t, int> votes;
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<cplx> v(d);
    for (auto& z : v) z = std::polar(1.0, angle(rng));
    std::vector<cplx> y(n);
    for (std::size_t j = 0; j < n; ++j) y[j] = m.beta[j] * detail::monomial(m, v, j);
    std::size_t count = 0;
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
      bool ok = true;
      for (std::size_t k = 0; k < r && ok; ++k) {
        cplx prod = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
          int e = static_cast<int>(m.kernel_basis(j, k));
          if (e == 0) continue;
          cplx yj = (mask >> j) & 1U ? 1.0 / y[j] : y[j];
          prod *= std::pow(yj, e);
        }
        ok = std::abs(prod - beta_m[k]) < 1e-8;
      }
      if (ok) ++count;
    }
    ++votes[count];
  }
  for (const auto& [count, v] : votes)
    if (v >= 3) return count;
  throw Error(ErrorCode::Inconclusive, "fiber-degree trials disagree");
}

/// d! vol(P_A) / (deg pi * [Z^d : ZA]).
inline BigInt degree(const LissajousModel& m, std::uint64_t seed = kDefaultSeed) {
  const BigInt vol = normalized_volume_of(m.A);
  const BigInt denom = BigInt(fiber_degree(m, seed)) * m.index;
  if (vol % denom != 0) throw Error(ErrorCode::Inconclusive, "volume is not divisible by fiber degree times index");
  return vol / denom;
}

/// (n/2) * binomial(n-1, floor((n-1)/2)).
inline BigInt cycle_poly_degree(unsigned n) {
  if (n < 3) throw Error(ErrorCode::InvalidInput, "cycle polynomial needs n >= 3");
  const unsigned k = (n - 1) / 2;
  BigInt binom = 1;
  for (unsigned i = 1; i <= k; ++i) binom = binom * (n - 1 - k + i) / i;
  return BigInt(n) * binom / 2;
}

// ---------------------------------------------------------------------------
// Multiplication matrices

struct MembershipReport {
  bool is_member = false;
  double min_singular_value = 0;
  double max_singular_value = 0;
  double threshold_used = 0;
  std::size_t matrix_dim = 0;
};

inline constexpr std::size_t kDefaultMaxMembershipN = 12;

namespace detail {

// Split a kernel vector into its positive and negative parts.
inline void split_exponent(const std::vector<BigInt>& mvec, std::vector<int>& u, std::vector<int>& w) {
  u.assign(mvec.size(), 0);
  w.assign(mvec.size(), 0);
  for (std::size_t j = 0; j < mvec.size(); ++j) {
    int e = static_cast<int>(mvec[j]);
    (e > 0 ? u[j] : w[j]) = std::abs(e);
  }
}

inline bool is_zero_value(const cplx& z) { return z == cplx(0.0, 0.0); }
inline bool is_zero_value(const GaussInt& z) { return z.is_zero(); }

// Kronecker product of 2x2 blocks, first factor most significant.
template <class T, class Block>
std::vector<T> kron_blocks(const std::vector<Block>& blocks) {
  std::vector<T> out{T(1)};
  std::size_t dim = 1;
  for (const Block& blk : blocks) {
    std::vector<T> next(dim * 2 * dim * 2, T(0));
    const std::size_t nd = dim * 2;
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c) {
        const T& v = out[r * dim + c];
        if (is_zero_value(v)) continue;
        for (std::size_t br = 0; br < 2; ++br)
          for (std::size_t bc = 0; bc < 2; ++bc) next[(r * 2 + br) * nd + (c * 2 + bc)] = v * T(blk[br][bc]);
      }
    out = std::move(next);
    dim = nd;
  }
  return out;
}

template <class T>
using Block2 = std::array<std::array<T, 2>, 2>;

template <class T>
Block2<T> block_power(const T& two_x, int e) {
  Block2<T> base{{{T(0), T(-1)}, {T(1), two_x}}};
  Block2<T> out{{{T(1), T(0)}, {T(0), T(1)}}};
  for (int p = 0; p < e; ++p) {
    Block2<T> next{{{T(0), T(0)}, {T(0), T(0)}}};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) next[i][j] += out[i][k] * base[k][j];
    out = next;
  }
  return out;
}

// M_g = beta^w prod_j B_j^{u_j} - beta^u prod_j B_j^{w_j} as a dense 2^n x 2^n matrix.
template <class T>
std::vector<T> binomial_matrix(const std::vector<T>& two_x, const std::vector<int>& u, const std::vector<int>& w,
                               const T& beta_u, const T& beta_w) {
  std::vector<Block2<T>> bu, bw;
  for (std::size_t j = 0; j < two_x.size(); ++j) {
    bu.push_back(block_power(two_x[j], u[j]));
    bw.push_back(block_power(two_x[j], w[j]));
  }
  std::vector<T> mu = kron_blocks<T>(bu), mw = kron_blocks<T>(bw);
  for (std::size_t i = 0; i < mu.size(); ++i) mu[i] = beta_w * mu[i] - beta_u * mw[i];
  return mu;
}

inline cplx beta_power(const LissajousModel& m, const std::vector<int>& e) {
  cplx p = 1.0;
  for (std::size_t j = 0; j < e.size(); ++j)
    if (e[j]) p *= std::pow(m.beta[j], e[j]);
  return p;
}

inline GaussInt beta_power_exact(const LissajousModel& m, const std::vector<int>& e) {
  long long k = 0;
  for (std::size_t j = 0; j < e.size(); ++j) k += -(*m.b_integer)[j] * e[j];
  return unit_power(k);
}

}  // namespace detail

/// Rank test of the concatenated multiplication matrices [M_{g_1} | ... | M_{g_r}].
inline MembershipReport membership(const LissajousModel& m, const std::vector<cplx>& x, double tol = 1e-8,
                                   std::size_t max_n = kDefaultMaxMembershipN) {
  const std::size_t n = m.n();
  if (x.size() != n) throw Error(ErrorCode::InvalidInput, "x must have length n");
  if (n > max_n) throw Error(ErrorCode::DimensionGuard, "membership matrix dimension 2^n exceeds the guard");
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t r = m.kernel_basis.cols();
  MembershipReport rep;
  rep.matrix_dim = dim;
  rep.threshold_used = tol;
  if (r == 0) {
    rep.is_member = true;
    return rep;
  }
  std::vector<cplx> two_x(n);
  for (std::size_t j = 0; j < n; ++j) two_x[j] = 2.0 * x[j];
  Eigen::MatrixXcd big(dim, dim * r);
  std::vector<int> u, w;
  for (std::size_t k = 0; k < r; ++k) {
    detail::split_exponent(m.kernel_basis.column(k), u, w);
    auto mg = detail::binomial_matrix<cplx>(two_x, u, w, detail::beta_power(m, u), detail::beta_power(m, w));
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) big(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k * dim + j)) = mg[i * dim + j];
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(big);
  const auto& sv = svd.singularValues();
  rep.max_singular_value = sv(0);
  rep.min_singular_value = sv(sv.size() - 1);
  rep.is_member = rep.min_singular_value < tol * rep.max_singular_value;
  return rep;
}

inline MembershipReport membership(const LissajousModel& m, const std::vector<double>& x, double tol = 1e-8,
                                   std::size_t max_n = kDefaultMaxMembershipN) {
  return membership(m, std::vector<cplx>(x.begin(), x.end()), tol, max_n);
}

// ---------------------------------------------------------------------------
// Defining equation of a hypersurface

struct HypersurfaceEquation {
  bool exact = false;
  unsigned root_order = 1;
  GaussPoly det_exact;    // det M_g, exact (integer b)
  RatPoly root_exact;     // primitive integer f with det M_g = c f^k
  ComplexPoly det_float;  // floating versions for non-integer b
  ComplexPoly root_float;
};

inline constexpr std::size_t kMaxEquationColumns = 6;

/// det M_g has degree 2^{n-1} |m_j| in x_j: its eigenvalues come in pairs g(y), g(y with y_j inverted).
inline std::vector<int> equation_degree_bounds(const LissajousModel& m) {
  std::vector<int> out;
  for (std::size_t j = 0; j < m.n(); ++j)
    out.push_back(static_cast<int>((std::size_t{1} << (m.n() - 1)) * static_cast<std::size_t>(boost::multiprecision::abs(m.kernel_basis(j, 0)))));
  return out;
}

inline HypersurfaceEquation hypersurface_equation(const LissajousModel& m, std::uint64_t seed = kDefaultSeed) {
  const std::size_t n = m.n();
  if (n != m.d() + 1) throw Error(ErrorCode::NotHypersurface, "n - d must equal 1");
  if (n > kMaxEquationColumns) throw Error(ErrorCode::DimensionGuard, "hypersurface_equation supports n <= 6");
  std::vector<int> u, w;
  detail::split_exponent(m.kernel_basis.column(0), u, w);
  const std::vector<int> degs = equation_degree_bounds(m);
  const std::size_t dim = std::size_t{1} << n;

  HypersurfaceEquation out;
  out.root_order = static_cast<unsigned>(fiber_degree(m, seed));

  if (m.b_integer) {
    out.exact = true;
    const GaussInt bu = detail::beta_power_exact(m, u), bw = detail::beta_power_exact(m, w);
    std::vector<GaussRat> values;
    for_each_grid_node(degs, [&](const std::vector<int>& node) {
      std::vector<GaussInt> two_x;
      for (int v : node) two_x.emplace_back(BigInt(2 * v));
      auto mg = detail::binomial_matrix<GaussInt>(two_x, u, w, bu, bw);
      values.push_back(to_rational(detail::bareiss_determinant(std::move(mg), dim)));
    });
    out.det_exact = interpolate_grid(std::move(values), degs);
    auto real = realify(out.det_exact);
    if (!real) throw Error(ErrorCode::RootExtractionFailed, "det M_g is not a scalar multiple of a real polynomial");
    out.root_exact = polynomial_root(primitive_part(*real), out.root_order);
    return out;
  }

  const cplx bu = detail::beta_power(m, u), bw = detail::beta_power(m, w);
  std::vector<cplx> values;
  for_each_grid_node(degs, [&](const std::vector<int>& node) {
    std::vector<cplx> two_x;
    for (int v : node) two_x.emplace_back(2.0 * v);
    auto mg = detail::binomial_matrix<cplx>(two_x, u, w, bu, bw);
    Eigen::Map<Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> mat(mg.data(), static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    values.push_back(Eigen::PartialPivLU<Eigen::MatrixXcd>(Eigen::MatrixXcd(mat)).determinant());
  });
  ComplexPoly raw = interpolate_grid(std::move(values), degs);
  double scale = 0;
  out.det_float = ComplexPoly(n);
  for (const auto& [e, c] : raw.terms()) scale = std::max(scale, std::abs(c));
  for (const auto& [e, c] : raw.terms())
    if (std::abs(c) > 1e-9 * scale) out.det_float.add_term(e, c);
  if (out.det_float.is_zero()) throw Error(ErrorCode::RootExtractionFailed, "det M_g vanished identically");
  const cplx lc = out.det_float.leading().second;
  ComplexPoly normalized = out.det_float * (1.0 / lc);
  out.root_float = polynomial_root(normalized, out.root_order, 1e-7);
  return out;
}

}  // namespace lissajous
