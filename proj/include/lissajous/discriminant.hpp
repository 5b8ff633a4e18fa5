#pragma once

// Lissajous discriminants: the toric Jacobian, exact branch polynomials for
// d = 1 through resultants, sampled branch loci for d >= 2, real-count
// profiles along segments, and the sign and graph symmetries.

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "lissajous/dynamics.hpp"
#include "lissajous/graphs.hpp"
#include "lissajous/polynomial.hpp"

namespace lissajous {

/// (1/2) A diag(beta v^a - beta^{-1} v^{-a}) A^t.
inline Eigen::MatrixXcd toric_jacobian(const LissajousModel& m, const std::vector<cplx>& v) {
  if (v.size() != m.d()) throw Error(ErrorCode::InvalidInput, "v must have length d");
  for (const cplx& z : v)
    if (z == cplx(0.0, 0.0)) throw Error(ErrorCode::ZeroCoordinate, "torus coordinates must be nonzero");
  const auto d = static_cast<Eigen::Index>(m.d());
  Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(d, d);
  for (std::size_t e = 0; e < m.n(); ++e) {
    const cplx y = m.beta[e] * detail::monomial(m, v, e);
    const cplx w = (y - 1.0 / y) / 2.0;
    for (Eigen::Index r = 0; r < d; ++r)
      for (Eigen::Index c = 0; c < d; ++c)
        j(r, c) += m.a(static_cast<std::size_t>(r), e) * w * m.a(static_cast<std::size_t>(c), e);
  }
  return j;
}

enum class DiscriminantKind { ExactUnivariate, SampledCloud };

struct BranchSample {
  Vec omega;
  Vec theta;  // witness: v = exp(i theta)
  double residual = 0;
};

struct DiscriminantResult {
  DiscriminantKind kind = DiscriminantKind::SampledCloud;
  std::optional<RatPoly> delta;
  std::vector<BranchSample> samples;
  BigInt degree_bound;
  bool empty_caveat = false;  // no real branch points: empty real locus or codimension > 1
};

namespace detail {

// Laurent polynomial in v, times 2 v^D, as coefficient pairs c0 + c1 * omega.
struct ClearedSystem {
  std::vector<std::pair<GaussInt, GaussInt>> f;  // 2 v^D (A psi(v) - omega)
  std::vector<GaussInt> g;                       // 2 v^D det J(v)
};

inline ClearedSystem cleared_system(const LissajousModel& m, int extra_f_shift) {
  int dmax = 0;
  for (std::size_t j = 0; j < m.n(); ++j) dmax = std::max(dmax, std::abs(static_cast<int>(m.A(0, j))));
  ClearedSystem s;
  const int df = 2 * dmax + extra_f_shift;
  s.f.assign(static_cast<std::size_t>(df + 1), {GaussInt(0), GaussInt(0)});
  s.g.assign(static_cast<std::size_t>(2 * dmax + 1), GaussInt(0));
  for (std::size_t j = 0; j < m.n(); ++j) {
    const int a = static_cast<int>(m.A(0, j));
    const GaussInt beta = unit_power(-(*m.b_integer)[j]);
    const GaussInt beta_inv = beta.conj();
    const std::size_t hi = static_cast<std::size_t>(dmax + a), lo = static_cast<std::size_t>(dmax - a);
    s.f[hi + static_cast<std::size_t>(extra_f_shift)].first += GaussInt(a) * beta;
    s.f[lo + static_cast<std::size_t>(extra_f_shift)].first += GaussInt(a) * beta_inv;
    s.g[hi] += GaussInt(a * a) * beta;
    s.g[lo] -= GaussInt(a * a) * beta_inv;
  }
  s.f[static_cast<std::size_t>(dmax + extra_f_shift)].second -= GaussInt(2);
  // v is a unit on the torus: drop trailing powers of v
  auto zero_pair = [](const std::pair<GaussInt, GaussInt>& p) { return p.first.is_zero() && p.second.is_zero(); };
  while (s.f.size() > 1 && zero_pair(s.f.front())) s.f.erase(s.f.begin());
  while (s.f.size() > 1 && zero_pair(s.f.back())) s.f.pop_back();
  while (s.g.size() > 1 && s.g.front().is_zero()) s.g.erase(s.g.begin());
  while (s.g.size() > 1 && s.g.back().is_zero()) s.g.pop_back();
  return s;
}

// Sylvester determinant with the formal degrees given by the vector sizes.
inline GaussInt sylvester_resultant(const std::vector<GaussInt>& f, const std::vector<GaussInt>& g) {
  const std::size_t m = f.size() - 1, n = g.size() - 1, size = m + n;
  if (size == 0) return GaussInt(1);
  std::vector<GaussInt> s(size * size, GaussInt(0));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t i = 0; i <= m; ++i) s[r * size + r + m - i] = f[i];
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t i = 0; i <= n; ++i) s[(n + r) * size + r + n - i] = g[i];
  return bareiss_determinant(std::move(s), size);
}

// Res_v(F, G) as an exact polynomial in omega, by evaluation and interpolation.
inline UPoly<GaussRat> resultant_in_omega(const ClearedSystem& s) {
  const int deg = static_cast<int>(s.g.size()) - 1;  // F is linear in omega and fills deg(G) rows
  std::vector<GaussRat> values;
  for (int w = 0; w <= deg; ++w) {
    std::vector<GaussInt> f;
    for (const auto& [c0, c1] : s.f) f.push_back(c0 + c1 * GaussInt(w));
    values.push_back(to_rational(sylvester_resultant(f, s.g)));
  }
  GaussPoly p = interpolate_grid(std::move(values), {deg});
  UPoly<GaussRat> out(static_cast<std::size_t>(deg + 1), GaussRat(0));
  for (const auto& [e, c] : p.terms()) out[static_cast<std::size_t>(e[0])] = c;
  upoly::trim(out);
  return out;
}

}  // namespace detail

/// Squarefree branch polynomial Delta(omega) for d = 1 and integer b, primitive with positive leading coefficient.
inline DiscriminantResult exact_discriminant_1d(const LissajousModel& m) {
  if (m.d() != 1) throw Error(ErrorCode::NotUnivariate, "exact discriminants are computed for d = 1 only");
  if (!m.b_integer) throw Error(ErrorCode::NonIntegerShift, "exact discriminants need integer b");
  DiscriminantResult out;
  out.kind = DiscriminantKind::ExactUnivariate;
  out.degree_bound = discriminant_degree_bound(m.A);

  const detail::ClearedSystem base = detail::cleared_system(m, 0);
  if (base.g.size() == 1 && base.g[0].is_zero())
    throw Error(ErrorCode::DegenerateJacobian, "det J vanishes identically");
  const UPoly<GaussRat> r1 = detail::resultant_in_omega(base);
  const UPoly<GaussRat> r2 = detail::resultant_in_omega(detail::cleared_system(m, 1));
  UPoly<GaussRat> common = upoly::gcd(r1, r2);
  if (upoly::degree(common) < 1) {
    out.delta = RatPoly::constant(1, 1);
    return out;
  }
  const UPoly<GaussRat> sf = upoly::squarefree_part(common);
  auto real = real_polynomial(from_univariate(sf));
  if (!real) throw Error(ErrorCode::Inconclusive, "discriminant has a non-vanishing imaginary part");
  out.delta = primitive_part(*real);
  return out;
}

struct SampleOptions {
  std::size_t num_samples = 200;  // Newton starts
  std::uint64_t seed = kDefaultSeed;
  double tol = 1e-12;
  int max_iter = 60;
};

namespace detail {

// det of the real Jacobian A diag(sin s) A^t and its gradient in theta (row replacement).
inline double det_and_gradient(const LissajousModel& m, const Vec& theta, Vec* grad) {
  const Eigen::MatrixXd j = jacobian(m, theta);
  const double det = j.determinant();
  if (grad) {
    const Vec s = shifted_angles(m, theta);
    const auto d = static_cast<Eigen::Index>(m.d());
    grad->assign(m.d(), 0.0);
    for (Eigen::Index k = 0; k < d; ++k) {
      Eigen::MatrixXd dj = Eigen::MatrixXd::Zero(d, d);
      for (std::size_t e = 0; e < m.n(); ++e) {
        const double w = std::cos(s[e]) * m.a(static_cast<std::size_t>(k), e);
        for (Eigen::Index r = 0; r < d; ++r)
          for (Eigen::Index c = 0; c < d; ++c)
            dj(r, c) += m.a(static_cast<std::size_t>(r), e) * w * m.a(static_cast<std::size_t>(c), e);
      }
      double sum = 0;
      for (Eigen::Index r = 0; r < d; ++r) {
        Eigen::MatrixXd rep = j;
        rep.row(r) = dj.row(r);
        sum += rep.determinant();
      }
      (*grad)[static_cast<std::size_t>(k)] = sum;
    }
  }
  return det;
}

inline Vec branch_point(const LissajousModel& m, const Vec& theta) {
  const Vec s = shifted_angles(m, theta);
  Vec w(m.d(), 0.0);
  for (std::size_t i = 0; i < m.d(); ++i)
    for (std::size_t j = 0; j < m.n(); ++j) w[i] += m.a(i, j) * std::cos(s[j]);
  return w;
}

}  // namespace detail

/// Real branch points omega = A psi(v) with det J(v) = 0 and v on the unit torus.
inline DiscriminantResult sample_discriminant(const LissajousModel& m, const SampleOptions& opts = {}) {
  const std::size_t d = m.d();
  DiscriminantResult out;
  out.kind = DiscriminantKind::SampledCloud;
  out.degree_bound = discriminant_degree_bound(m.A);
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  double largest_start = 0;
  for (std::size_t k = 0; k < opts.num_samples; ++k) {
    Vec theta(d);
    for (auto& t : theta) t = angle(rng);
    Vec grad;
    double h = detail::det_and_gradient(m, theta, &grad);
    largest_start = std::max(largest_start, std::abs(h));
    for (int it = 0; it < opts.max_iter && std::abs(h) >= opts.tol; ++it) {
      double g2 = 0;
      for (double g : grad) g2 += g * g;
      if (g2 == 0) break;
      for (std::size_t i = 0; i < d; ++i) theta[i] -= h * grad[i] / g2;
      h = detail::det_and_gradient(m, theta, &grad);
    }
    if (!(std::abs(h) < opts.tol)) continue;
    for (auto& t : theta) t = detail::wrap_angle(t);
    // witness check through the complex parametrization
    std::vector<cplx> v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = std::polar(1.0, theta[i]);
    const auto x = torus_param_point(m, v);
    std::vector<cplx> w(d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < m.n(); ++j) w[i] += m.a(i, j) * x[j];
    BranchSample smp;
    smp.theta = theta;
    smp.omega.resize(d);
    double res = std::abs(toric_jacobian(m, v).determinant());
    for (std::size_t i = 0; i < d; ++i) {
      smp.omega[i] = w[i].real();
      res = std::max(res, std::abs(w[i].imag()));
    }
    smp.residual = res;
    if (res < 1e-8) out.samples.push_back(std::move(smp));
  }
  if (largest_start < 1e-12) throw Error(ErrorCode::DegenerateJacobian, "det J vanishes identically on the sampled torus points");
  out.empty_caveat = out.samples.empty();
  return out;
}

/// Equilibrium counts along omega(s) = (1 - s) omega0 + s omega1 on a uniform grid in [0, 1].
inline std::vector<std::pair<double, std::size_t>> real_count_profile(const LissajousModel& m, const Vec& omega0,
                                                                      const Vec& omega1, std::size_t grid_size,
                                                                      const EquilibriumOptions& opts = {}) {
  if (grid_size < 2) throw Error(ErrorCode::InvalidInput, "grid_size must be at least 2");
  std::vector<std::pair<double, std::size_t>> out;
  for (std::size_t k = 0; k < grid_size; ++k) {
    const double s = static_cast<double>(k) / static_cast<double>(grid_size - 1);
    Vec w(omega0.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = (1 - s) * omega0[i] + s * omega1[i];
    out.emplace_back(s, find_equilibria(m, w, opts).equilibria.size());
  }
  return out;
}

/// +1 if every monomial has even total degree, -1 if every one is odd, nullopt otherwise.
template <class C>
std::optional<int> check_sign_symmetry(const Polynomial<C>& delta) {
  bool even = false, odd = false;
  for (const auto& [e, c] : delta.terms()) {
    int deg = 0;
    for (int k : e) deg += k;
    (deg % 2 == 0 ? even : odd) = true;
  }
  if (even && !odd) return 1;
  if (odd && !even) return -1;
  return std::nullopt;
}

namespace detail {

// Gauss-Newton with Levenberg damping on [A phi(theta) - omega; det J(theta)].
inline double polish_branch_point(const LissajousModel& m, const Vec& omega, Vec theta) {
  const std::size_t d = m.d();
  auto residual = [&](const Vec& t, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
    r.resize(static_cast<Eigen::Index>(d + 1));
    const Vec w = branch_point(m, t);
    Vec grad;
    const double h = det_and_gradient(m, t, jac ? &grad : nullptr);
    for (std::size_t i = 0; i < d; ++i) r(static_cast<Eigen::Index>(i)) = w[i] - omega[i];
    r(static_cast<Eigen::Index>(d)) = h;
    if (jac) {
      jac->resize(static_cast<Eigen::Index>(d + 1), static_cast<Eigen::Index>(d));
      jac->topRows(static_cast<Eigen::Index>(d)) = -jacobian(m, t);  // d/dtheta of A phi is -J
      for (std::size_t k = 0; k < d; ++k) (*jac)(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(k)) = grad[k];
    }
  };
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  residual(theta, r, &jac);
  double mu = 1e-6;
  for (int it = 0; it < 100 && r.cwiseAbs().maxCoeff() > 1e-14; ++it) {
    Eigen::MatrixXd lhs = jac.transpose() * jac;
    lhs.diagonal().array() += mu;
    Eigen::VectorXd step = lhs.ldlt().solve(-jac.transpose() * r);
    Vec trial(theta);
    for (std::size_t k = 0; k < d; ++k) trial[k] += step(static_cast<Eigen::Index>(k));
    Eigen::VectorXd rt;
    residual(trial, rt, nullptr);
    if (rt.norm() < r.norm()) {
      theta = trial;
      residual(theta, r, &jac);
      mu = std::max(mu / 10, 1e-15);
    } else {
      mu *= 10;
      if (mu > 1e8) break;
    }
  }
  return r.cwiseAbs().maxCoeff();
}

}  // namespace detail

/// Max residual of the ramification system at sigma(omega) over all automorphisms sigma
/// and all cloud samples, starting Newton from the permuted (perturbed) witness.
inline double check_graph_symmetry(const Graph& g, const DiscriminantResult& cloud) {
  const Incidence inc = incidence(g);
  const LissajousModel m = build_model(inc.reduced, Vec(g.edges.size(), 1.0));
  const std::size_t d = m.d();
  const auto autos = automorphisms(g);
  std::mt19937_64 rng(kDefaultSeed);
  std::uniform_real_distribution<double> jitter(-1e-3, 1e-3);
  double worst = 0;
  for (const BranchSample& smp : cloud.samples) {
    Vec w_hat(smp.omega), t_hat(smp.theta);
    double total = 0;
    for (double v : smp.omega) total += v;
    w_hat.push_back(-total);
    t_hat.push_back(0.0);
    for (const auto& sigma : autos) {
      Vec w(d), t(d);
      for (std::size_t k = 0; k < d; ++k) {
        w[k] = w_hat[sigma[k]];
        t[k] = t_hat[sigma[k]] - t_hat[sigma[d]] + jitter(rng);
      }
      worst = std::max(worst, detail::polish_branch_point(m, w, t));
    }
  }
  return worst;
}

}  // namespace lissajous
