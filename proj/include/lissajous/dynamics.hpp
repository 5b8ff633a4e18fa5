#pragma once

// The generalized Kuramoto system d theta/dt = -A phi(theta) + omega with
// phi_j(theta) = cos(a_j . theta - b_j pi / 2): equilibria, stability and
// trajectories.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "lissajous/model.hpp"

namespace lissajous {

using Vec = std::vector<double>;

namespace detail {

inline Vec shifted_angles(const LissajousModel& m, const Vec& theta) {
  Vec s(m.n());
  for (std::size_t j = 0; j < m.n(); ++j) {
    double v = 0;
    for (std::size_t i = 0; i < m.d(); ++i) v += m.a(i, j) * theta[i];
    s[j] = v - m.b[j] * kPi / 2;
  }
  return s;
}

inline double wrap_angle(double t) {
  double w = std::fmod(t + kPi, 2 * kPi);
  if (w < 0) w += 2 * kPi;
  w -= kPi;
  return w >= kPi ? w - 2 * kPi : w;
}

inline double torus_distance(const Vec& a, const Vec& b) {
  double best = 0;
  for (std::size_t k = 0; k < a.size(); ++k) best = std::max(best, std::abs(wrap_angle(a[k] - b[k])));
  return best;
}

inline double max_abs(const Vec& v) {
  double r = 0;
  for (double x : v) r = std::max(r, std::abs(x));
  return r;
}

}  // namespace detail

inline Vec rhs(const LissajousModel& m, const Vec& omega, const Vec& theta) {
  const Vec s = detail::shifted_angles(m, theta);
  Vec out(omega);
  for (std::size_t i = 0; i < m.d(); ++i)
    for (std::size_t j = 0; j < m.n(); ++j) out[i] -= m.a(i, j) * std::cos(s[j]);
  return out;
}

/// Derivative of rhs: A diag(sin(A^t theta - b pi / 2)) A^t.
inline Eigen::MatrixXd jacobian(const LissajousModel& m, const Vec& theta) {
  const Vec s = detail::shifted_angles(m, theta);
  const auto d = static_cast<Eigen::Index>(m.d());
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t e = 0; e < m.n(); ++e) {
    const double w = std::sin(s[e]);
    for (Eigen::Index r = 0; r < d; ++r)
      for (Eigen::Index c = 0; c < d; ++c)
        j(r, c) += m.a(static_cast<std::size_t>(r), e) * w * m.a(static_cast<std::size_t>(c), e);
  }
  return j;
}

enum class Stability { Stable, Unstable, Degenerate };

inline const char* to_string(Stability s) {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Unstable: return "unstable";
    case Stability::Degenerate: return "degenerate";
  }
  return "unknown";
}

struct Equilibrium {
  Vec theta;  // in [-pi, pi)^d
  double residual = 0;
  Vec eigenvalues;  // ascending
  Stability stability = Stability::Degenerate;
  bool stable() const { return stability == Stability::Stable; }
};

struct EquilibriumSet {
  std::vector<Equilibrium> equilibria;
  BigInt kushnirenko_bound;  // d! vol(P_A)
  std::size_t starts_used = 0;
};

struct EquilibriumOptions {
  std::size_t starts = 0;  // random starts; 0 means 20 * d! vol(P_A)
  std::uint64_t seed = kDefaultSeed;
  double tol = 1e-10;
  double dedupe_radius = 1e-5;
  double eig_eps = 1e-9;
  int max_iter = 100;
  bool grid = true;  // add a 5^d grid for d <= 4
};

inline Stability classify(const Vec& eigenvalues, double eps) {
  if (std::all_of(eigenvalues.begin(), eigenvalues.end(), [eps](double l) { return l < -eps; })) return Stability::Stable;
  if (std::any_of(eigenvalues.begin(), eigenvalues.end(), [eps](double l) { return l > eps; })) return Stability::Unstable;
  return Stability::Degenerate;
}

inline Vec jacobian_eigenvalues(const LissajousModel& m, const Vec& theta) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobian(m, theta), Eigen::EigenvaluesOnly);
  return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

namespace detail {

// Damped Newton on rhs = 0. Returns true when the residual falls below tol.
inline bool newton_solve(const LissajousModel& m, const Vec& omega, Vec& theta, double tol, int max_iter) {
  const auto d = static_cast<Eigen::Index>(m.d());
  Vec f = rhs(m, omega, theta);
  double norm = max_abs(f);
  for (int it = 0; it < max_iter; ++it) {
    if (norm < tol) {
      // one extra step to settle into machine precision
      Eigen::VectorXd step = jacobian(m, theta).colPivHouseholderQr().solve(-Eigen::Map<Eigen::VectorXd>(f.data(), d));
      Vec trial(theta);
      for (Eigen::Index k = 0; k < d; ++k) trial[static_cast<std::size_t>(k)] += step(k);
      if (max_abs(rhs(m, omega, trial)) <= norm) theta = trial;
      return true;
    }
    Eigen::VectorXd step = jacobian(m, theta).colPivHouseholderQr().solve(-Eigen::Map<Eigen::VectorXd>(f.data(), d));
    if (!step.allFinite()) return false;
    double lambda = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 30; ++ls, lambda *= 0.5) {
      Vec trial(theta);
      for (Eigen::Index k = 0; k < d; ++k) trial[static_cast<std::size_t>(k)] += lambda * step(k);
      Vec ft = rhs(m, omega, trial);
      double nt = max_abs(ft);
      if (nt < (1 - 1e-4 * lambda) * norm) {
        theta = trial;
        f = ft;
        norm = nt;
        moved = true;
        break;
      }
    }
    if (!moved) return false;
  }
  return norm < tol;
}

}  // namespace detail

/// Multistart Newton over the torus, deduplicated, classified and sorted.
inline EquilibriumSet find_equilibria(const LissajousModel& m, const Vec& omega, const EquilibriumOptions& opts = {}) {
  if (omega.size() != m.d()) throw Error(ErrorCode::InvalidInput, "omega must have length d");
  const std::size_t d = m.d();
  EquilibriumSet out;
  out.kushnirenko_bound = normalized_volume_of(m.A);
  const std::size_t random_starts =
      opts.starts ? opts.starts : static_cast<std::size_t>(20 * out.kushnirenko_bound);

  std::vector<Vec> starts;
  if (opts.grid && d <= 4) {
    std::size_t total = 1;
    for (std::size_t k = 0; k < d; ++k) total *= 5;
    for (std::size_t idx = 0; idx < total; ++idx) {
      Vec t(d);
      std::size_t rest = idx;
      for (std::size_t k = 0; k < d; ++k) {
        t[k] = -kPi + (static_cast<double>(rest % 5) + 0.5) * (2 * kPi / 5);
        rest /= 5;
      }
      starts.push_back(t);
    }
  }
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (std::size_t s = 0; s < random_starts; ++s) {
    Vec t(d);
    for (auto& x : t) x = angle(rng);
    starts.push_back(t);
  }
  out.starts_used = starts.size();

  for (Vec theta : starts) {
    if (!detail::newton_solve(m, omega, theta, opts.tol, opts.max_iter)) continue;
    for (auto& x : theta) x = detail::wrap_angle(x);
    const double res = detail::max_abs(rhs(m, omega, theta));
    if (res >= opts.tol) continue;
    bool duplicate = std::any_of(out.equilibria.begin(), out.equilibria.end(), [&](const Equilibrium& e) {
      return detail::torus_distance(e.theta, theta) < opts.dedupe_radius;
    });
    if (duplicate) continue;
    Equilibrium e;
    e.theta = theta;
    e.residual = res;
    e.eigenvalues = jacobian_eigenvalues(m, theta);
    e.stability = classify(e.eigenvalues, opts.eig_eps);
    out.equilibria.push_back(std::move(e));
  }
  std::sort(out.equilibria.begin(), out.equilibria.end(),
            [](const Equilibrium& a, const Equilibrium& b) { return a.theta < b.theta; });
  if (BigInt(out.equilibria.size()) > out.kushnirenko_bound)
    throw Error(ErrorCode::Inconclusive, "more equilibria than d! vol(P_A); deduplication radius too small");
  return out;
}

struct TrajectoryPoint {
  double t;
  Vec theta;
};

/// Classical RK4 with a fixed step; the last step is shortened to land on t_end.
inline std::vector<TrajectoryPoint> integrate(const LissajousModel& m, const Vec& omega, const Vec& theta0, double t_end,
                                              double step) {
  if (!(step > 0)) throw Error(ErrorCode::InvalidInput, "step must be positive");
  std::vector<TrajectoryPoint> path{{0.0, theta0}};
  Vec y = theta0;
  double t = 0;
  const std::size_t d = theta0.size();
  auto axpy = [d](const Vec& a, double h, const Vec& b) {
    Vec r(d);
    for (std::size_t k = 0; k < d; ++k) r[k] = a[k] + h * b[k];
    return r;
  };
  const auto steps = static_cast<std::size_t>(std::max(0.0, std::ceil(t_end / step - 1e-9)));
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t_next = k == steps ? t_end : static_cast<double>(k) * step;
    const double h = t_next - t;
    Vec k1 = rhs(m, omega, y);
    Vec k2 = rhs(m, omega, axpy(y, h / 2, k1));
    Vec k3 = rhs(m, omega, axpy(y, h / 2, k2));
    Vec k4 = rhs(m, omega, axpy(y, h, k3));
    for (std::size_t k = 0; k < d; ++k) y[k] += h / 6 * (k1[k] + 2 * k2[k] + 2 * k3[k] + k4[k]);
    t = t_next;
    path.push_back({t, y});
  }
  return path;
}

}  // namespace lissajous
