// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <cstdio>
#include <functional>
#include <sstream>

#include "fixtures.hpp"

using namespace lissajous;
using namespace fixtures;

namespace {

int failures = 0;

void report(int id, const std::string& title, const std::function<bool(std::ostream&)>& body) {
  std::ostringstream detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail << "exception: " << e.what();
  }
  if (!ok) ++failures;
  std::printf("%s criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.str().empty() ? "" : " | ",
              detail.str().c_str());
  std::fflush(stdout);
}

BigInt binomial(unsigned n, unsigned k) {
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

RatPoly univariate(std::initializer_list<long long> high_to_low) {
  RatPoly p(1);
  int k = static_cast<int>(high_to_low.size()) - 1;
  for (long long c : high_to_low) {
    if (c != 0) p.add_term({k}, Rational(c));
    --k;
  }
  return p;
}

Vec positive_angles(const LissajousModel& m, std::mt19937_64& rng) {
  for (;;) {
    Vec t = random_angles(m.d(), rng);
    Vec s = detail::shifted_angles(m, t);
    if (std::all_of(s.begin(), s.end(), [](double v) { return v > -kPi + 1e-3 && v < -1e-3; })) return t;
  }
}

}  // namespace

int main() {
  report(1, "variety degrees 2, 3, 6", [](std::ostream& os) {
    BigInt a = degree(circle()), b = degree(cayley()), c = degree(sextic());
    os << "circle " << a << ", C3/b=0 " << b << ", C3/b=1 " << c;
    return a == 2 && b == 3 && c == 6;
  });

  report(2, "cycle polynomial degrees and cycle polytope volumes", [](std::ostream& os) {
    const int expected[] = {3, 6, 15, 30, 70, 140};
    bool ok = true;
    for (unsigned n = 3; n <= 8; ++n) ok = ok && cycle_poly_degree(n) == expected[n - 3];
    for (unsigned n = 3; n <= 7; ++n) {
      BigInt vol = normalized_volume_of(incidence(cycle_graph(n)).reduced);
      BigInt closed = n * binomial(n - 1, (n - 1) / 2);
      os << "vol(C" << n << ")=" << vol << " ";
      ok = ok && vol == closed;
    }
    return ok;
  });

  report(3, "determinantal representation on the triangle", [](std::ostream& os) {
    RatPoly x = RatPoly::variable(3, 0), y = RatPoly::variable(3, 1), z = RatPoly::variable(3, 2);
    RatPoly cubic = x * x + y * y + z * z - x * y * z * Rational(2) - RatPoly::constant(3, 1);
    HypersurfaceEquation h0 = hypersurface_equation(cayley());
    const bool b0 = h0.det_exact == to_gauss(cubic.pow(2) * Rational(16));
    RatPoly sa = x.pow(4) + (x * y * z).pow(2) * Rational(4) - (x * y).pow(2) * Rational(2) -
                 (x * z).pow(2) * Rational(2) + y.pow(4) - (y * z).pow(2) * Rational(2) + z.pow(4);
    HypersurfaceEquation h1 = hypersurface_equation(sextic());
    const bool b1 = proportional(h1.det_exact, to_gauss(sa));
    os << "b=0 det " << (b0 ? "exact" : "mismatch") << ", b=1 det " << (b1 ? "proportional" : "mismatch");
    return b0 && b1;
  });

  report(4, "six Kuramoto equilibria on the triangle", [](std::ostream& os) {
    const Vec omega{0.1, 0.2};
    EquilibriumSet s = find_equilibria(sextic(), omega);
    double worst = 0;
    for (const auto& e : s.equilibria) worst = std::max(worst, e.residual);
    OptResult p = solve_positive(sextic(), omega);
    bool contains = false;
    for (const auto& e : s.equilibria)
      if (e.stable() && p.theta_star && detail::torus_distance(e.theta, *p.theta_star) < 1e-7) contains = true;
    os << s.equilibria.size() << " equilibria, max residual " << worst;
    return s.equilibria.size() == 6 && worst < 1e-10 && contains;
  });

  report(5, "stable circle equilibrium at omega = 0.6", [](std::ostream& os) {
    EquilibriumSet s = find_equilibria(circle(), {0.6});
    std::vector<double> stable;
    for (const auto& e : s.equilibria)
      if (e.stable()) stable.push_back(e.theta[0]);
    OptResult p = solve_positive(circle(), {0.6});
    if (stable.size() != 1 || !p.theta_star) return false;
    os << "multistart " << stable[0] << ", convex " << (*p.theta_star)[0];
    return std::abs(stable[0] + 0.34725) < 1e-4 && std::abs((*p.theta_star)[0] + 0.34725) < 1e-4 &&
           std::abs(stable[0] - (*p.theta_star)[0]) < 1e-8;
  });

  report(6, "exact univariate discriminants", [](std::ostream& os) {
    RatPoly a = *exact_discriminant_1d(line12(1)).delta, b = *exact_discriminant_1d(line12(0)).delta,
            c = *exact_discriminant_1d(circle()).delta;
    os << a.to_string({"w"}) << "; " << b.to_string({"w"}) << "; " << c.to_string({"w"});
    return a == univariate({256, 0, -2367, 0, 3375}) && b == univariate({16, -31, -84, 99}) && c == univariate({1, 0, -2});
  });

  report(7, "discriminant degree bounds for cycles and complete graphs", [](std::ostream& os) {
    const long long expected[] = {12, 36, 120, 300, 840, 1960, 60, 280, 1260};
    std::vector<Graph> graphs;
    for (unsigned n = 3; n <= 8; ++n) graphs.push_back(cycle_graph(n));
    for (unsigned m = 4; m <= 6; ++m) graphs.push_back(complete_graph(m));
    bool ok = true;
    for (std::size_t k = 0; k < graphs.size(); ++k) {
      BigInt bound = discriminant_degree_bound(incidence(graphs[k]).reduced);
      os << bound << (k + 1 < graphs.size() ? " " : "");
      ok = ok && bound == expected[k];
    }
    return ok;
  });

  report(8, "sampled branch points satisfy the triangle discriminants", [](std::ostream& os) {
    bool ok = true;
    for (const auto& [m, delta, name] :
         std::vector<std::tuple<LissajousModel, RatPoly, const char*>>{{cayley(), delta_c3_b0(), "b=0"}, {sextic(), delta_c3_b1(), "b=1"}}) {
      DiscriminantResult r = sample_discriminant(m);
      double worst = 0;
      for (const auto& s : r.samples) worst = std::max(worst, normalized_value(delta, s.omega));
      os << name << ": " << r.samples.size() << " points, max " << worst << " ";
      ok = ok && !r.samples.empty() && worst < 1e-6;
    }
    return ok;
  });

  report(9, "sign and graph symmetries", [](std::ostream& os) {
    bool ok = true;
    for (const IntMatrix& a : {IntMatrix{{1, 1}}, IntMatrix{{1, 2}}, IntMatrix{{1, 3}}, IntMatrix{{2, 3}}}) {
      auto sym = check_sign_symmetry(*exact_discriminant_1d(build_model(a, {1, 1})).delta);
      ok = ok && sym == 1;
    }
    ok = ok && check_sign_symmetry(delta_c3_b1()) == 1;
    // the sampled b = 1 cloud is closed under omega -> -omega
    LissajousModel m = sextic();
    DiscriminantResult cloud = sample_discriminant(m);
    double mirror = 0;
    for (const auto& s : cloud.samples) {
      Vec w(s.omega), t(s.theta);
      for (auto& v : w) v = -v;
      for (auto& v : t) v = -v;
      mirror = std::max(mirror, detail::polish_branch_point(m, w, t));
    }
    const double graph = check_graph_symmetry(cycle_graph(3), cloud);
    os << "sign " << (ok ? "+1" : "mismatch") << ", mirror residual " << mirror << ", graph residual " << graph;
    return ok && mirror < 1e-6 && graph < 1e-6;
  });

  report(10, "property suites", [](std::ostream& os) {
    std::mt19937_64 rng(97);
    std::normal_distribution<double> normal;
    bool ok = true;

    int accepted = 0, rejected = 0, total = 0;
    for (const auto& m : {circle(), cayley(), sextic(), line12(1)}) {
      const RatPoly f = hypersurface_equation(m).root_exact;
      for (int k = 0; k < 200; ++k, ++total) {
        auto x = param_point(m, random_angles(m.d(), rng));
        accepted += membership(m, x).is_member;
        Vec y;
        do {
          Vec dir(m.n());
          double norm = 0;
          for (auto& v : dir) {
            v = normal(rng);
            norm += v * v;
          }
          y = x;
          for (std::size_t j = 0; j < m.n(); ++j) y[j] += 0.5 * dir[j] / std::sqrt(norm);
        } while (std::abs(f.evaluate(y, [](const Rational& c) { return static_cast<double>(c); })) < 1e-3);
        rejected += !membership(m, y).is_member;
      }
    }
    os << "membership " << accepted << "/" << total << " accepted, " << rejected << "/" << total << " rejected; ";
    ok = ok && accepted == total && rejected == total;

    double fd_jac = 0, fd_grad = 0;
    for (const auto& m : {cayley(), sextic(), line12(0.3)}) {
      for (int k = 0; k < 50; ++k) {
        Vec t = random_angles(m.d(), rng);
        Eigen::MatrixXd j = jacobian(m, t);
        const Vec omega(m.d(), 0.0);
        for (std::size_t c = 0; c < m.d(); ++c) {
          Vec tp = t, tm = t;
          tp[c] += 1e-6;
          tm[c] -= 1e-6;
          Vec fp = rhs(m, omega, tp), fm = rhs(m, omega, tm);
          for (std::size_t r = 0; r < m.d(); ++r)
            fd_jac = std::max(fd_jac, std::abs(j(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) -
                                                (fp[r] - fm[r]) / 2e-6));
        }
        std::uniform_real_distribution<double> u(-0.95, 0.95);
        Vec x(m.n());
        for (auto& v : x) v = u(rng);
        Vec g = objective_gradient(m, x);
        for (std::size_t c = 0; c < m.n(); ++c) {
          Vec xp = x, xm = x;
          xp[c] += 1e-6;
          xm[c] -= 1e-6;
          fd_grad = std::max(fd_grad, std::abs(g[c] - (objective(m, xp) - objective(m, xm)) / 2e-6));
        }
      }
    }
    os << "fd jacobian " << fd_jac << ", fd gradient " << fd_grad << "; ";
    ok = ok && fd_jac < 1e-6 && fd_grad < 1e-6;

    double spread = 0;
    for (const auto& m : {sextic(), graph_model(cycle_graph(4), 1)}) {
      Vec theta = positive_angles(m, rng);
      Vec omega = rhs(m, Vec(m.d(), 0.0), theta);
      for (auto& v : omega) v = -v;
      OptResult ref = solve_positive(m, omega);
      if (ref.status != OptStatus::Optimal) return false;
      std::uniform_real_distribution<double> u(-1, 1);
      for (int k = 0; k < 20; ++k) {
        Vec x0 = *ref.x_star, dir(m.n(), 0.0);
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
        if (r.status != OptStatus::Optimal) return false;
        for (std::size_t j = 0; j < m.n(); ++j) spread = std::max(spread, std::abs((*r.x_star)[j] - (*ref.x_star)[j]));
      }
    }
    os << "start spread " << spread << "; ";
    ok = ok && spread < 1e-8;

    bool within = true;
    std::uniform_real_distribution<double> w(-1.5, 1.5);
    for (const auto& m : {cayley(), sextic(), line12(1)})
      for (int k = 0; k < 10; ++k) {
        Vec omega(m.d());
        for (auto& v : omega) v = w(rng);
        EquilibriumSet s = find_equilibria(m, omega);
        within = within && BigInt(s.equilibria.size()) <= s.kushnirenko_bound;
      }
    os << "counts " << (within ? "within" : "exceed") << " bound; ";
    ok = ok && within;

    const double roots[] = {-2.73582, -1.32720, 1.32720, 2.73582};
    bool constant = true;
    double edges[] = {-3.5, roots[0], roots[1], roots[2], roots[3], 3.5};
    for (int k = 0; k < 5; ++k) {
      auto profile = real_count_profile(line12(1), {edges[k] + 0.01}, {edges[k + 1] - 0.01}, 9);
      for (const auto& p : profile) constant = constant && p.second == profile.front().second;
    }
    os << "profile " << (constant ? "constant" : "varies") << " between roots";
    return ok && constant;
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
