#pragma once

#include <cmath>
#include <random>

#include "lissajous/lissajous.hpp"

namespace fixtures {

using namespace lissajous;

inline IntMatrix c3_matrix() { return {{1, 0, -1}, {-1, 1, 0}}; }

inline LissajousModel circle() { return build_model(IntMatrix{{1, 1}}, {0, 1}); }
inline LissajousModel cayley() { return build_model(c3_matrix(), {0, 0, 0}); }
inline LissajousModel sextic() { return build_model(c3_matrix(), {1, 1, 1}); }
inline LissajousModel line12(double b) { return build_model(IntMatrix{{1, 2}}, {b, b}); }

inline LissajousModel graph_model(const Graph& g, double b) {
  return build_model(incidence(g).reduced, std::vector<double>(g.edges.size(), b));
}

/// Cayley cubic 1 + 2xyz - x^2 - y^2 - z^2 and the sextic of the sine variety.
inline double cayley_value(const std::vector<double>& x) {
  return 1 + 2 * x[0] * x[1] * x[2] - x[0] * x[0] - x[1] * x[1] - x[2] * x[2];
}
inline double sextic_value(const std::vector<double>& v) {
  const double x = v[0], y = v[1], z = v[2];
  return std::pow(x, 4) + 4 * x * x * y * y * z * z - 2 * x * x * y * y - 2 * x * x * z * z + std::pow(y, 4) -
         2 * y * y * z * z + std::pow(z, 4);
}

inline std::vector<double> random_angles(std::size_t d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-kPi, kPi);
  std::vector<double> t(d);
  for (auto& x : t) x = u(rng);
  return t;
}

// Reference branch polynomials of the triangle for b = 0 and b = 1 (omega_3 = -omega_1 - omega_2).
inline RatPoly delta_c3_b0() {
  static const int table[][3] = {
      {-8, 5, 0},  {4, 4, 2},   {-20, 4, 1}, {-23, 4, 0}, {8, 3, 3},   {-8, 3, 2}, {-46, 3, 1},
      {4, 3, 0},   {4, 2, 4},   {8, 2, 3},   {-69, 2, 2}, {6, 2, 1},   {36, 2, 0}, {20, 1, 4},
      {-46, 1, 3}, {-6, 1, 2},  {36, 1, 1},  {8, 0, 5},   {-23, 0, 4}, {-4, 0, 3}, {36, 0, 2}};
  RatPoly p(2);
  for (const auto& row : table) p.add_term({row[1], row[2]}, Rational(row[0]));
  return p;
}

inline RatPoly delta_c3_b1() {
  RatPoly w1 = RatPoly::variable(2, 0), w2 = RatPoly::variable(2, 1);
  RatPoly w3 = RatPoly::constant(2, 0) - w1 - w2;
  RatPoly e2 = w1 * w2 + w1 * w3 + w2 * w3, e3 = w1 * w2 * w3;
  auto c = [](long long v) { return Rational(v); };
  return e2.pow(5) * c(64) + e2.pow(4) * c(399) + e2.pow(3) * c(840) + e2.pow(2) * e3.pow(2) * c(376) +
         e2.pow(2) * c(766) + e2 * e3.pow(2) * c(3056) + e2 * c(288) - e3.pow(4) * c(16) + e3.pow(2) * c(5812) +
         RatPoly::constant(2, 27);
}

/// |p(w)| / |grad p(w)|, a first-order distance to the zero set.
inline double normalized_value(const RatPoly& p, const std::vector<double>& w) {
  auto conv = [](const Rational& c) { return static_cast<double>(c); };
  const double val = p.evaluate(w, conv);
  double g2 = 0;
  for (std::size_t k = 0; k < p.num_vars(); ++k) {
    RatPoly dk(p.num_vars());
    for (const auto& [e, c] : p.terms()) {
      if (e[k] == 0) continue;
      Exponent f = e;
      --f[k];
      dk.add_term(f, c * e[k]);
    }
    const double gk = dk.evaluate(w, conv);
    g2 += gk * gk;
  }
  return std::abs(val) / std::max(std::sqrt(g2), 1e-300);
}

}  // namespace fixtures
