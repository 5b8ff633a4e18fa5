#pragma once

// The positive equilibrium as the minimizer of a strictly convex function on
// the affine slice {A x = omega} of the open box (-1, 1)^n.
//
// With shifted angles s = A^t theta - b pi / 2 in (-pi, 0)^n the stationarity
// condition of
//     f(x) = (pi / 2) b^t x - sum_j (x_j arccos x_j - sqrt(1 - x_j^2))
// on the slice reads arccos(x*) = b pi / 2 - A^t theta*, so theta* is read off
// by a consistent least-squares solve and the Jacobian at theta* is negative
// definite.

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "lissajous/dynamics.hpp"

namespace lissajous {

enum class OptStatus { Optimal, NotInOmegaPlus, MaxIterations };

inline const char* to_string(OptStatus s) {
  switch (s) {
    case OptStatus::Optimal: return "Optimal";
    case OptStatus::NotInOmegaPlus: return "NotInOmegaPlus";
    case OptStatus::MaxIterations: return "MaxIterations";
  }
  return "Unknown";
}

struct OptResult {
  OptStatus status = OptStatus::MaxIterations;
  std::optional<Vec> x_star;
  std::optional<Vec> theta_star;
  double objective_value = 0;
  double kkt_residual = 0;
  int iterations = 0;
};

struct OptOptions {
  double tol = 1e-11;  // projected gradient norm
  int max_iter = 500;
  std::optional<Vec> x0;  // feasible interior start; default is the least-norm point or an LP center
};

inline void check_open_box(const Vec& x) {
  for (double v : x)
    if (!(std::abs(v) < 1)) throw Error(ErrorCode::OutOfDomain, "x must lie in the open box (-1, 1)^n");
}

inline double objective(const LissajousModel& m, const Vec& x) {
  check_open_box(x);
  double f = 0;
  for (std::size_t j = 0; j < x.size(); ++j)
    f += kPi / 2 * m.b[j] * x[j] - (x[j] * std::acos(x[j]) - std::sqrt(1 - x[j] * x[j]));
  return f;
}

inline Vec objective_gradient(const LissajousModel& m, const Vec& x) {
  check_open_box(x);
  Vec g(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) g[j] = kPi / 2 * m.b[j] - std::acos(x[j]);
  return g;
}

/// Diagonal of the Hessian, (1 - x_j^2)^{-1/2}.
inline Vec objective_hessian_diagonal(const Vec& x) {
  check_open_box(x);
  Vec h(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) h[j] = 1 / std::sqrt(1 - x[j] * x[j]);
  return h;
}

namespace detail {

struct LpResult {
  bool bounded = true;
  double value = 0;
  std::vector<double> x;
};

// max c.x subject to G x <= h, x >= 0, with h >= 0 so the slack basis is feasible.
// Dense tableau simplex with Bland's rule.
inline LpResult simplex_max(const Eigen::MatrixXd& g, const Eigen::VectorXd& h, const Eigen::VectorXd& c) {
  const Eigen::Index rows = g.rows(), vars = g.cols(), width = vars + rows + 1;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(rows + 1, width);
  t.block(0, 0, rows, vars) = g;
  t.block(0, vars, rows, rows) = Eigen::MatrixXd::Identity(rows, rows);
  t.col(width - 1).head(rows) = h;
  t.row(rows).head(vars) = -c.transpose();
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(rows));
  for (Eigen::Index i = 0; i < rows; ++i) basis[static_cast<std::size_t>(i)] = vars + i;
  const double eps = 1e-12;
  LpResult out;
  for (int iter = 0; iter < 10000; ++iter) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < width - 1; ++j)
      if (t(rows, j) < -eps) {
        enter = j;
        break;
      }
    if (enter < 0) break;
    Eigen::Index leave = -1;
    double best = 0;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (t(i, enter) <= eps) continue;
      double ratio = t(i, width - 1) / t(i, enter);
      if (leave < 0 || ratio < best - eps ||
          (std::abs(ratio - best) <= eps && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave < 0) {
      out.bounded = false;
      return out;
    }
    t.row(leave) /= t(leave, enter);
    for (Eigen::Index i = 0; i <= rows; ++i)
      if (i != leave && t(i, enter) != 0) t.row(i) -= t(i, enter) * t.row(leave);
    basis[static_cast<std::size_t>(leave)] = enter;
  }
  out.x.assign(static_cast<std::size_t>(vars), 0.0);
  for (Eigen::Index i = 0; i < rows; ++i)
    if (basis[static_cast<std::size_t>(i)] < vars) out.x[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])] = t(i, width - 1);
  out.value = t(rows, width - 1);
  return out;
}

struct Slice {
  Eigen::VectorXd xp;  // least-norm solution of A x = omega
  Eigen::MatrixXd q;   // orthonormal basis of ker A
};

inline Slice affine_slice(const LissajousModel& m, const Vec& omega) {
  const auto d = static_cast<Eigen::Index>(m.d()), n = static_cast<Eigen::Index>(m.n());
  Eigen::MatrixXd a(d, n);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = m.a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(omega.data(), d);
  Slice s;
  s.xp = a.transpose() * (a * a.transpose()).ldlt().solve(w);
  const auto r = static_cast<Eigen::Index>(m.kernel_basis.cols());
  Eigen::MatrixXd k(n, r);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < r; ++j) k(i, j) = static_cast<double>(m.kernel_basis(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
  if (r > 0) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(k);
    s.q = qr.householderQ() * Eigen::MatrixXd::Identity(n, r);
  } else {
    s.q = Eigen::MatrixXd(n, 0);
  }
  return s;
}

// Point of the slice maximizing the distance t to the box boundary.
// Returns (s, t); t <= 0 means the slice misses the open box.
inline std::pair<Eigen::VectorXd, double> slice_center(const Slice& sl) {
  const Eigen::Index n = sl.q.rows(), r = sl.q.cols();
  const double shift = 1 + sl.xp.cwiseAbs().maxCoeff();
  // variables: s+ (r), s- (r), tau (1), with t = tau - shift
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2 * n + 1, 2 * r + 1);
  Eigen::VectorXd h(2 * n + 1);
  for (Eigen::Index j = 0; j < n; ++j) {
    // x_j + t <= 1 and -x_j + t <= 1
    g.block(j, 0, 1, r) = sl.q.row(j);
    g.block(j, r, 1, r) = -sl.q.row(j);
    g(j, 2 * r) = 1;
    h(j) = 1 - sl.xp(j) + shift;
    g.block(n + j, 0, 1, r) = -sl.q.row(j);
    g.block(n + j, r, 1, r) = sl.q.row(j);
    g(n + j, 2 * r) = 1;
    h(n + j) = 1 + sl.xp(j) + shift;
  }
  g(2 * n, 2 * r) = 1;  // tau <= 1 + shift keeps the problem bounded
  h(2 * n) = 1 + shift;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * r + 1);
  c(2 * r) = 1;
  LpResult lp = simplex_max(g, h, c);
  Eigen::VectorXd s(r);
  for (Eigen::Index k = 0; k < r; ++k) s(k) = lp.x[static_cast<std::size_t>(k)] - lp.x[static_cast<std::size_t>(r + k)];
  return {s, lp.x[static_cast<std::size_t>(2 * r)] - shift};
}

inline Vec to_vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace detail

/// theta* with A^t theta* = b pi / 2 - arccos(x*), wrapped to [-pi, pi)^d.
inline Vec recover_theta(const LissajousModel& m, const Vec& x_star, double* residual = nullptr) {
  const auto d = static_cast<Eigen::Index>(m.d()), n = static_cast<Eigen::Index>(m.n());
  Eigen::MatrixXd at(n, d);
  Eigen::VectorXd rhs_vec(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) at(j, i) = m.a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    rhs_vec(j) = m.b[static_cast<std::size_t>(j)] * kPi / 2 - std::acos(x_star[static_cast<std::size_t>(j)]);
  }
  Eigen::VectorXd theta = at.colPivHouseholderQr().solve(rhs_vec);
  if (residual) *residual = (at * theta - rhs_vec).cwiseAbs().maxCoeff();
  Vec out = detail::to_vec(theta);
  for (auto& t : out) t = detail::wrap_angle(t);
  return out;
}

inline OptResult solve_positive(const LissajousModel& m, const Vec& omega, const OptOptions& opts = {}) {
  if (omega.size() != m.d()) throw Error(ErrorCode::InvalidInput, "omega must have length d");
  const detail::Slice sl = detail::affine_slice(m, omega);
  const Eigen::Index n = sl.q.rows(), r = sl.q.cols();
  constexpr double cap = 1 - 1e-12;

  Eigen::VectorXd s = Eigen::VectorXd::Zero(r);
  if (opts.x0) {
    Eigen::VectorXd x0 = Eigen::Map<const Eigen::VectorXd>(opts.x0->data(), n);
    s = sl.q.transpose() * (x0 - sl.xp);
  } else if (!(sl.xp.cwiseAbs().maxCoeff() < 1)) {
    if (r == 0) throw Error(ErrorCode::InfeasibleSlice, "the point A^+ omega lies outside the open box");
    auto [center, t] = detail::slice_center(sl);
    if (!(t > 0)) throw Error(ErrorCode::InfeasibleSlice, "{A x = omega} misses the open box (-1, 1)^n");
    s = center;
  }

  OptResult out;
  Eigen::VectorXd x = sl.xp + sl.q * s;
  if (!(x.cwiseAbs().maxCoeff() < 1)) throw Error(ErrorCode::OutOfDomain, "start point is not interior");
  int stall = 0;
  double gnorm = 0;
  for (int it = 0; it < opts.max_iter; ++it) {
    out.iterations = it;
    const Vec xv = detail::to_vec(x);
    const Vec gv = objective_gradient(m, xv), hv = objective_hessian_diagonal(xv);
    Eigen::VectorXd grad = Eigen::Map<const Eigen::VectorXd>(gv.data(), n);
    Eigen::VectorXd gs = sl.q.transpose() * grad;
    gnorm = r ? gs.norm() : 0.0;
    if (gnorm < opts.tol) {
      out.status = OptStatus::Optimal;
      break;
    }
    const double boundary_gap = 1 - x.cwiseAbs().maxCoeff();
    if (boundary_gap < 1e-6 && gnorm > 1e-4) {
      if (++stall >= 20) {
        out.status = OptStatus::NotInOmegaPlus;
        break;
      }
    } else {
      stall = 0;
    }
    Eigen::MatrixXd hs = sl.q.transpose() * Eigen::Map<const Eigen::VectorXd>(hv.data(), n).asDiagonal() * sl.q;
    Eigen::VectorXd ds = -hs.ldlt().solve(gs);
    Eigen::VectorXd dx = sl.q * ds;
    double alpha_max = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (dx(j) > 0) alpha_max = std::min(alpha_max, (cap - x(j)) / dx(j));
      if (dx(j) < 0) alpha_max = std::min(alpha_max, (-cap - x(j)) / dx(j));
    }
    double alpha = std::min(1.0, 0.99 * std::max(alpha_max, 0.0));
    const double f0 = objective(m, xv), slope = gs.dot(ds);
    for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
      Eigen::VectorXd trial = x + alpha * dx;
      if (!(trial.cwiseAbs().maxCoeff() < 1)) continue;
      const Vec tv = detail::to_vec(trial);
      // near the optimum the decrease in f drops below rounding; the projected gradient still shrinks
      const Vec gt = objective_gradient(m, tv);
      const double gtn = (sl.q.transpose() * Eigen::Map<const Eigen::VectorXd>(gt.data(), n)).norm();
      if (objective(m, tv) <= f0 + 1e-4 * alpha * slope || gtn < (1 - 1e-4 * alpha) * gnorm) {
        s += alpha * ds;
        break;
      }
    }
    x = sl.xp + sl.q * s;
  }
  if (out.status != OptStatus::Optimal) {
    out.kkt_residual = gnorm;
    return out;
  }
  const Vec xv = detail::to_vec(x);
  double theta_res = 0;
  out.x_star = xv;
  out.theta_star = recover_theta(m, xv, &theta_res);
  out.objective_value = objective(m, xv);
  out.kkt_residual = std::max(gnorm, theta_res);
  return out;
}

inline bool omega_plus_contains(const LissajousModel& m, const Vec& omega) {
  try {
    return solve_positive(m, omega).status == OptStatus::Optimal;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InfeasibleSlice) return false;
    throw;
  }
}

}  // namespace lissajous
