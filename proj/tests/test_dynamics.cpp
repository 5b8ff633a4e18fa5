#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace lissajous;
using namespace fixtures;

namespace {

// theta with every shifted angle a_j . theta - b_j pi / 2 inside (-pi, 0), by rejection.
Vec positive_angles(const LissajousModel& m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (;;) {
    Vec t(m.d());
    for (auto& x : t) x = u(rng);
    Vec s = detail::shifted_angles(m, t);
    if (std::all_of(s.begin(), s.end(), [](double v) { return v > -kPi + 1e-3 && v < -1e-3; })) return t;
  }
}

Vec omega_at(const LissajousModel& m, const Vec& theta) {
  Vec zero(m.d(), 0.0), r = rhs(m, zero, theta);
  for (auto& v : r) v = -v;
  return r;
}

std::vector<LissajousModel> positive_models() {
  return {circle(), sextic(), line12(1), graph_model(cycle_graph(4), 1), graph_model(complete_graph(4), 1)};
}

}  // namespace

TEST(Rhs, Examples) {
  EXPECT_NEAR(rhs(circle(), {0.6}, {0.0})[0], -0.4, 1e-15);
  Vec r = rhs(cayley(), {0.1, 0.2}, {0.0, 0.0});
  // each cosine is 1 and the rows of the triangle incidence sum to zero
  EXPECT_NEAR(r[0], 0.1, 1e-15);
  EXPECT_NEAR(r[1], 0.2, 1e-15);
}

TEST(Jacobian, CircleAtZero) {
  Eigen::MatrixXd j = jacobian(circle(), {0.0});
  EXPECT_NEAR(j(0, 0), -1.0, 1e-15);
}

TEST(Jacobian, MatchesFiniteDifferences) {
  std::mt19937_64 rng(31);
  for (const auto& m : {circle(), cayley(), sextic(), line12(0.3), graph_model(complete_graph(4), 1)}) {
    const Vec omega(m.d(), 0.2);
    for (int k = 0; k < 50; ++k) {
      Vec t = random_angles(m.d(), rng);
      Eigen::MatrixXd j = jacobian(m, t);
      const double h = 1e-6;
      for (std::size_t c = 0; c < m.d(); ++c) {
        Vec tp = t, tm = t;
        tp[c] += h;
        tm[c] -= h;
        Vec fp = rhs(m, omega, tp), fm = rhs(m, omega, tm);
        for (std::size_t r = 0; r < m.d(); ++r)
          EXPECT_NEAR(j(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)), (fp[r] - fm[r]) / (2 * h), 1e-7);
      }
    }
  }
}

TEST(Jacobian, NegativeDefiniteOnPositiveRegion) {
  std::mt19937_64 rng(37);
  for (const auto& m : positive_models()) {
    for (int k = 0; k < 50; ++k) {
      Vec ev = jacobian_eigenvalues(m, positive_angles(m, rng));
      EXPECT_LT(ev.back(), 0.0);
    }
  }
}

TEST(Equilibria, Triangle) {
  EquilibriumSet s = find_equilibria(sextic(), {0.1, 0.2});
  ASSERT_EQ(s.equilibria.size(), 6u);
  EXPECT_EQ(s.kushnirenko_bound, 6);
  std::size_t stable = 0;
  for (const auto& e : s.equilibria) {
    EXPECT_LT(e.residual, 1e-10);
    if (!e.stable()) continue;
    ++stable;
    EXPECT_NEAR(e.theta[0], 0.133857, 1e-6);
    EXPECT_NEAR(e.theta[1], 0.167322, 1e-6);
  }
  EXPECT_EQ(stable, 1u);
  for (std::size_t k = 1; k < s.equilibria.size(); ++k) EXPECT_LT(s.equilibria[k - 1].theta, s.equilibria[k].theta);
}

TEST(Equilibria, Circle) {
  EquilibriumSet s = find_equilibria(circle(), {0.6});
  ASSERT_EQ(s.equilibria.size(), 2u);
  EXPECT_NEAR(s.equilibria[0].theta[0], -0.347249, 1e-6);
  EXPECT_EQ(s.equilibria[0].stability, Stability::Stable);
  EXPECT_NEAR(s.equilibria[1].theta[0], 1.91805, 1e-5);
  EXPECT_EQ(s.equilibria[1].stability, Stability::Unstable);
  EXPECT_TRUE(find_equilibria(circle(), {1.6}).equilibria.empty());
}

TEST(Equilibria, DoublingStartsChangesNothing) {
  for (const auto& [m, omega] : std::vector<std::pair<LissajousModel, Vec>>{
           {cayley(), {0.1, 0.2}}, {sextic(), {0.3, -0.2}}, {line12(1), {0.5}}, {graph_model(cycle_graph(4), 0), {0.1, 0.0, -0.2}}}) {
    EquilibriumSet a = find_equilibria(m, omega);
    EquilibriumOptions twice;
    twice.starts = 2 * a.starts_used;
    twice.seed = kDefaultSeed + 1;
    EquilibriumSet b = find_equilibria(m, omega, twice);
    ASSERT_EQ(a.equilibria.size(), b.equilibria.size());
    EXPECT_LE(BigInt(a.equilibria.size()), a.kushnirenko_bound);
    for (std::size_t k = 0; k < a.equilibria.size(); ++k) {
      EXPECT_LT(detail::torus_distance(a.equilibria[k].theta, b.equilibria[k].theta), 1e-8);
      EXPECT_EQ(a.equilibria[k].stability, b.equilibria[k].stability);
    }
  }
}

TEST(Equilibria, CountNeverExceedsBound) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (const auto& m : {cayley(), sextic(), line12(0), line12(1)}) {
    for (int k = 0; k < 10; ++k) {
      Vec omega(m.d());
      for (auto& w : omega) w = u(rng);
      EquilibriumSet s = find_equilibria(m, omega);
      EXPECT_LE(BigInt(s.equilibria.size()), s.kushnirenko_bound);
      for (const auto& e : s.equilibria)
        for (double t : e.theta) {
          EXPECT_GE(t, -kPi);
          EXPECT_LT(t, kPi);
        }
    }
  }
}

TEST(Equilibria, GraphModelIsTheGroundedKuramotoSystem) {
  // Full oscillator network with the last vertex grounded at angle 0.
  std::mt19937_64 rng(43);
  for (const Graph& g : {cycle_graph(4), complete_graph(4), from_edges(4, {{1, 2}, {2, 3}, {3, 4}, {4, 2}})}) {
    LissajousModel m = graph_model(g, 1);
    for (int k = 0; k < 20; ++k) {
      Vec theta = random_angles(m.d(), rng), omega = random_angles(m.d(), rng);
      Vec full(g.num_vertices, 0.0);
      std::copy(theta.begin(), theta.end(), full.begin());
      Vec expected(omega);
      for (const auto& [p, q] : g.edges) {
        const double flow = std::sin(full[p - 1] - full[q - 1]);
        if (p < g.num_vertices) expected[p - 1] -= flow;
        if (q < g.num_vertices) expected[q - 1] += flow;
      }
      Vec got = rhs(m, omega, theta);
      for (std::size_t i = 0; i < m.d(); ++i) EXPECT_NEAR(got[i], expected[i], 1e-13);
    }
  }
}

TEST(Integrate, ConvergesToStableEquilibrium) {
  auto path = integrate(circle(), {0.6}, {-0.2}, 50.0, 0.01);
  EXPECT_DOUBLE_EQ(path.back().t, 50.0);
  EXPECT_NEAR(path.back().theta[0], -0.347249, 1e-5);

  auto tri = integrate(sextic(), {0.1, 0.2}, {0.0, 0.0}, 50.0, 0.01);
  EXPECT_NEAR(tri.back().theta[0], 0.133857, 1e-5);
  EXPECT_NEAR(tri.back().theta[1], 0.167322, 1e-5);
}

TEST(Integrate, StepHalving) {
  auto coarse = integrate(sextic(), {0.2, -0.1}, {0.3, 0.4}, 5.0, 0.01);
  auto fine = integrate(sextic(), {0.2, -0.1}, {0.3, 0.4}, 5.0, 0.005);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_LT(std::abs(coarse.back().theta[i] - fine.back().theta[i]), 1e-6);
  EXPECT_THROW(integrate(circle(), {0.0}, {0.0}, 1.0, 0.0), Error);
}

// ---------------------------------------------------------------------------

TEST(Objective, Values) {
  EXPECT_NEAR(objective(cayley(), {0, 0, 0}), 3.0, 1e-15);
  // b = 1: each term is x arcsin x + sqrt(1 - x^2)
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(-0.999, 0.999);
  for (int k = 0; k < 100; ++k) {
    Vec x{u(rng), u(rng), u(rng)};
    double expected = 0;
    for (double v : x) expected += v * std::asin(v) + std::sqrt(1 - v * v);
    EXPECT_NEAR(objective(sextic(), x), expected, 1e-13);
  }
  try {
    objective(circle(), {1.0, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutOfDomain);
  }
}

TEST(Objective, DerivativesMatchFiniteDifferences) {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(-0.95, 0.95);
  for (const auto& m : {sextic(), cayley(), build_model(c3_matrix(), {0.3, -0.7, 1.9})}) {
    for (int k = 0; k < 50; ++k) {
      Vec x{u(rng), u(rng), u(rng)};
      Vec g = objective_gradient(m, x), h = objective_hessian_diagonal(x);
      for (std::size_t j = 0; j < 3; ++j) {
        const double step = 1e-6;
        Vec xp = x, xm = x;
        xp[j] += step;
        xm[j] -= step;
        EXPECT_NEAR(g[j], (objective(m, xp) - objective(m, xm)) / (2 * step), 1e-7);
        EXPECT_NEAR(h[j], (objective_gradient(m, xp)[j] - objective_gradient(m, xm)[j]) / (2 * step), 1e-6);
        EXPECT_GT(h[j], 0.0);
      }
    }
  }
}

TEST(SolvePositive, Circle) {
  OptResult r = solve_positive(circle(), {0.6});
  ASSERT_EQ(r.status, OptStatus::Optimal);
  EXPECT_NEAR((*r.x_star)[0], 0.940312, 1e-6);
  EXPECT_NEAR((*r.x_star)[1], -0.340312, 1e-6);
  EXPECT_NEAR((*r.theta_star)[0], -0.347249, 1e-6);
  EXPECT_LT(r.kkt_residual, 1e-9);
  EXPECT_EQ(solve_positive(circle(), {1.6}).status, OptStatus::NotInOmegaPlus);
  try {
    solve_positive(circle(), {2.5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InfeasibleSlice);
  }
  EXPECT_TRUE(omega_plus_contains(circle(), {0.0}));
  EXPECT_FALSE(omega_plus_contains(circle(), {1.99}));
  EXPECT_FALSE(omega_plus_contains(circle(), {2.5}));
}

TEST(SolvePositive, AgreesWithStableEquilibrium) {
  for (const auto& [m, omega] :
       std::vector<std::pair<LissajousModel, Vec>>{{sextic(), {0.1, 0.2}}, {line12(1), {0.5}}, {circle(), {-0.4}}}) {
    OptResult r = solve_positive(m, omega);
    ASSERT_EQ(r.status, OptStatus::Optimal);
    EXPECT_LT(detail::max_abs(rhs(m, omega, *r.theta_star)), 1e-9);
    EXPECT_LT(jacobian_eigenvalues(m, *r.theta_star).back(), 0.0);
    EquilibriumSet s = find_equilibria(m, omega);
    bool found = false;
    for (const auto& e : s.equilibria)
      if (e.stable() && detail::torus_distance(e.theta, *r.theta_star) < 1e-7) found = true;
    EXPECT_TRUE(found);
  }
}

TEST(SolvePositive, IndependentOfStart) {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> u(-1, 1);
  for (const auto& [m, omega] :
       std::vector<std::pair<LissajousModel, Vec>>{{sextic(), {0.1, 0.2}}, {graph_model(cycle_graph(4), 1), {0.2, -0.1, 0.3}}}) {
    OptResult ref = solve_positive(m, omega);
    ASSERT_EQ(ref.status, OptStatus::Optimal);
    for (int k = 0; k < 20; ++k) {
      // move along the kernel while staying inside the box
      Vec x0 = *ref.x_star;
      Vec dir(m.n(), 0.0);
      for (std::size_t c = 0; c < m.kernel_basis.cols(); ++c) {
        const double coef = u(rng);
        for (std::size_t j = 0; j < m.n(); ++j) dir[j] += coef * static_cast<double>(m.kernel_basis(j, c));
      }
      double room = 1;
      for (std::size_t j = 0; j < m.n(); ++j)
        if (dir[j] != 0) room = std::min(room, (1 - std::abs(x0[j])) / std::abs(dir[j]));
      for (std::size_t j = 0; j < m.n(); ++j) x0[j] += 0.9 * room * std::abs(u(rng)) * dir[j];
      OptOptions opts;
      opts.x0 = x0;
      OptResult r = solve_positive(m, omega, opts);
      ASSERT_EQ(r.status, OptStatus::Optimal);
      for (std::size_t j = 0; j < m.n(); ++j) EXPECT_NEAR((*r.x_star)[j], (*ref.x_star)[j], 1e-9);
    }
  }
}

TEST(SolvePositive, RoundTrip) {
  std::mt19937_64 rng(61);
  for (const auto& m : positive_models()) {
    for (int k = 0; k < 100; ++k) {
      Vec theta = positive_angles(m, rng);
      Vec omega = omega_at(m, theta);
      OptResult r = solve_positive(m, omega);
      ASSERT_EQ(r.status, OptStatus::Optimal) << m.n() << " omega " << omega[0] << " gap " << r.kkt_residual << " it " << r.iterations;
      EXPECT_LT(detail::torus_distance(*r.theta_star, theta), 1e-7);
      Vec s = detail::shifted_angles(m, theta);
      for (std::size_t j = 0; j < m.n(); ++j) EXPECT_NEAR((*r.x_star)[j], std::cos(s[j]), 1e-9);
      EXPECT_TRUE(omega_plus_contains(m, omega));
    }
  }
}

TEST(SolvePositive, StartOutsideBoxIsRejected) {
  OptOptions opts;
  opts.x0 = Vec{1.2, -0.6};
  try {
    solve_positive(circle(), {0.6}, opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutOfDomain);
  }
}
