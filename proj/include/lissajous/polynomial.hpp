#pragma once

// Sparse multivariate polynomials over an exact or floating coefficient field,
// dense univariate helpers (gcd, squarefree part, resultants) and tensor-grid
// Newton interpolation.

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lissajous/exactmat.hpp"

namespace lissajous {

using Exponent = std::vector<int>;

namespace detail {

inline bool coeff_is_zero(const Rational& c) { return c == 0; }
inline bool coeff_is_zero(const GaussRat& c) { return c.is_zero(); }
inline bool coeff_is_zero(const BigInt& c) { return c == 0; }
inline bool coeff_is_zero(double c) { return c == 0.0; }
inline bool coeff_is_zero(const std::complex<double>& c) { return c == std::complex<double>(0.0, 0.0); }

inline std::string coeff_to_string(const Rational& c) { return to_string(c); }
inline std::string coeff_to_string(const BigInt& c) { return to_string(c); }
inline std::string coeff_to_string(const GaussRat& c) { return to_string(c); }
inline std::string coeff_to_string(double c) {
  std::ostringstream os;
  os.precision(17);
  os << c;
  return os.str();
}
inline std::string coeff_to_string(const std::complex<double>& c) {
  if (c.imag() == 0.0) return coeff_to_string(c.real());
  std::ostringstream os;
  os.precision(17);
  os << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i";
  return os.str();
}

}  // namespace detail

/// Sparse polynomial in num_vars variables. Terms are keyed by exponent
/// vectors and ordered lexicographically; the last term is the lex leader.
template <class C>
class Polynomial {
 public:
  using Terms = std::map<Exponent, C>;

  Polynomial() = default;
  explicit Polynomial(std::size_t num_vars) : n_(num_vars) {}

  static Polynomial constant(std::size_t num_vars, const C& c) {
    Polynomial p(num_vars);
    p.add_term(Exponent(num_vars, 0), c);
    return p;
  }
  static Polynomial variable(std::size_t num_vars, std::size_t k) {
    Polynomial p(num_vars);
    Exponent e(num_vars, 0);
    e[k] = 1;
    p.add_term(e, C(1));
    return p;
  }

  std::size_t num_vars() const { return n_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(const Exponent& e, const C& c) {
    if (detail::coeff_is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (detail::coeff_is_zero(it->second)) terms_.erase(it);
    }
  }

  C coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? C(0) : it->second;
  }

  const std::pair<const Exponent, C>& leading() const { return *terms_.rbegin(); }

  int total_degree() const {
    int best = -1;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int k : e) s += k;
      best = std::max(best, s);
    }
    return best;
  }
  int degree_in(std::size_t k) const {
    int best = -1;
    for (const auto& [e, c] : terms_) best = std::max(best, e[k]);
    return best;
  }

  template <class F>
  auto map_coefficients(F f) const {
    using D = decltype(f(std::declval<C>()));
    Polynomial<D> out(n_);
    for (const auto& [e, c] : terms_) out.add_term(e, f(c));
    return out;
  }

  /// Evaluate at a point with coefficients converted by `conv`.
  template <class T, class Conv>
  T evaluate(const std::vector<T>& x, Conv conv) const {
    T sum(0);
    for (const auto& [e, c] : terms_) {
      T t = conv(c);
      for (std::size_t k = 0; k < n_; ++k)
        for (int p = 0; p < e[k]; ++p) t *= x[k];
      sum += t;
    }
    return sum;
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, C(-c));
    return *this;
  }
  Polynomial& operator*=(const C& s) {
    if (detail::coeff_is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const C& s) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial out(a.n_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponent e(a.n_);
        for (std::size_t k = 0; k < a.n_; ++k) e[k] = ea[k] + eb[k];
        out.add_term(e, ca * cb);
      }
    return out;
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.n_ == b.n_ && a.terms_ == b.terms_; }

  Polynomial pow(unsigned k) const {
    Polynomial out = constant(n_, C(1)), base = *this;
    while (k) {
      if (k & 1U) out = out * base;
      k >>= 1U;
      if (k) base = base * base;
    }
    return out;
  }

  /// Human-readable form in lex-descending order, e.g. "256*w^4 - 2367*w^2 + 3375".
  std::string to_string(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      std::string coeff = detail::coeff_to_string(it->second);
      bool negative = !coeff.empty() && coeff[0] == '-' && coeff.find_first_of("+-", 1) == std::string::npos;
      if (negative) coeff.erase(0, 1);
      bool compound = coeff.find_first_of("+-", 1) != std::string::npos;
      std::string mono;
      for (std::size_t k = 0; k < n_; ++k) {
        if (it->first[k] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += names[k];
        if (it->first[k] > 1) mono += "^" + std::to_string(it->first[k]);
      }
      std::string term;
      if (mono.empty())
        term = compound ? "(" + coeff + ")" : coeff;
      else if (coeff == "1")
        term = mono;
      else
        term = (compound ? "(" + coeff + ")" : coeff) + "*" + mono;
      if (first)
        out = (negative ? "-" : "") + term;
      else
        out += (negative ? " - " : " + ") + term;
      first = false;
    }
    return out;
  }

 private:
  std::size_t n_ = 0;
  Terms terms_;
};

using RatPoly = Polynomial<Rational>;
using GaussPoly = Polynomial<GaussRat>;
using ComplexPoly = Polynomial<std::complex<double>>;

/// Scale a rational polynomial to integer coefficients with gcd 1 and a positive lex-leading coefficient.
inline RatPoly primitive_part(const RatPoly& p) {
  if (p.is_zero()) return p;
  BigInt den = 1, num = 0;
  for (const auto& [e, c] : p.terms()) {
    BigInt d = boost::multiprecision::denominator(c);
    den = den / boost::multiprecision::gcd(den, d) * d;
  }
  for (const auto& [e, c] : p.terms()) num = boost::multiprecision::gcd(num, boost::multiprecision::numerator(Rational(c * den)));
  Rational scale = Rational(den) / Rational(num);
  if (p.leading().second < 0) scale = -scale;
  return p * scale;
}

/// Real part of a Gaussian-rational polynomial, or nullopt if some coefficient is not real.
inline std::optional<RatPoly> real_polynomial(const GaussPoly& p) {
  RatPoly out(p.num_vars());
  for (const auto& [e, c] : p.terms()) {
    if (!c.is_real()) return std::nullopt;
    out.add_term(e, c.re);
  }
  return out;
}

/// If p is a real multiple of a real polynomial, divide by the leading coefficient.
inline std::optional<RatPoly> realify(const GaussPoly& p) {
  if (p.is_zero()) return RatPoly(p.num_vars());
  GaussRat lc = p.leading().second;
  GaussPoly q(p.num_vars());
  for (const auto& [e, c] : p.terms()) q.add_term(e, c / lc);
  return real_polynomial(q);
}

inline GaussPoly to_gauss(const RatPoly& p) {
  return p.map_coefficients([](const Rational& c) { return GaussRat(c); });
}

/// True iff p, as a multiple of q by a nonzero scalar, exists.
template <class C>
bool proportional(const Polynomial<C>& p, const Polynomial<C>& q) {
  if (p.is_zero() || q.is_zero()) return p.is_zero() && q.is_zero();
  if (p.size() != q.size()) return false;
  const C ratio = p.leading().second / q.leading().second;
  for (const auto& [e, c] : q.terms())
    if (!(p.coefficient(e) == c * ratio)) return false;
  return true;
}

namespace detail {

// Integer k-th root of a nonnegative integer, if exact.
inline std::optional<BigInt> exact_integer_root(const BigInt& x, unsigned k) {
  if (x < 0) {
    if (k % 2 == 0) return std::nullopt;
    auto r = exact_integer_root(-x, k);
    if (!r) return std::nullopt;
    return BigInt(-*r);
  }
  if (x < 2) return x;
  // Newton iteration on integers
  BigInt r = BigInt(1) << (static_cast<unsigned>(boost::multiprecision::msb(x)) / k + 1);
  while (true) {
    BigInt next = ((k - 1) * r + x / boost::multiprecision::pow(r, k - 1)) / k;
    if (next >= r) break;
    r = next;
  }
  if (boost::multiprecision::pow(r, k) == x) return r;
  return std::nullopt;
}

inline std::optional<Rational> exact_rational_root(const Rational& x, unsigned k) {
  auto n = exact_integer_root(boost::multiprecision::numerator(x), k);
  auto d = exact_integer_root(boost::multiprecision::denominator(x), k);
  if (!n || !d) return std::nullopt;
  return Rational(*n) / Rational(*d);
}

inline bool divides_exponent(const Exponent& e, int k) {
  return std::all_of(e.begin(), e.end(), [k](int v) { return v >= 0 && v % k == 0; });
}

}  // namespace detail

/// f with f^k = p for a primitive integer polynomial p with positive leading
/// coefficient. Terms of f are recovered one at a time from the lex-leading
/// term of the remainder p - f^k.
inline RatPoly polynomial_root(const RatPoly& p, unsigned k) {
  if (k == 0) throw Error(ErrorCode::InvalidInput, "root of order 0");
  if (k == 1 || p.is_zero()) return p;
  const std::size_t n = p.num_vars();
  const auto& [lead_e, lead_c] = p.leading();
  auto c0 = detail::exact_rational_root(lead_c, k);
  if (!c0 || !detail::divides_exponent(lead_e, static_cast<int>(k)))
    throw Error(ErrorCode::RootExtractionFailed, "leading term is not a perfect power");
  Exponent e0(n);
  for (std::size_t i = 0; i < n; ++i) e0[i] = lead_e[i] / static_cast<int>(k);
  RatPoly f(n);
  f.add_term(e0, *c0);

  std::vector<int> degree_cap(n);
  for (std::size_t i = 0; i < n; ++i) degree_cap[i] = p.degree_in(i) / static_cast<int>(k);
  Rational denom = Rational(k);
  for (unsigned i = 1; i < k; ++i) denom *= *c0;
  const std::size_t max_terms = [&] {
    std::size_t count = 1;
    for (int cap : degree_cap) count *= static_cast<std::size_t>(cap + 1);
    return count;
  }();

  for (std::size_t iter = 0; iter <= max_terms; ++iter) {
    RatPoly rem = p - f.pow(k);
    if (rem.is_zero()) return f;
    const auto& [re, rc] = rem.leading();
    Exponent t(n);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = re[i] - (static_cast<int>(k) - 1) * e0[i];
      if (t[i] < 0 || t[i] > degree_cap[i])
        throw Error(ErrorCode::RootExtractionFailed, "remainder term outside the root's support");
    }
    if (!(t < e0)) throw Error(ErrorCode::RootExtractionFailed, "remainder leads the root");
    f.add_term(t, rc / denom);
  }
  throw Error(ErrorCode::RootExtractionFailed, "root did not terminate");
}

/// Floating analogue for complex coefficients: matches terms against a
/// relative threshold and checks the final residual.
inline ComplexPoly polynomial_root(const ComplexPoly& p, unsigned k, double rel_tol) {
  if (k <= 1 || p.is_zero()) return p;
  const std::size_t n = p.num_vars();
  double scale = 0;
  for (const auto& [e, c] : p.terms()) scale = std::max(scale, std::abs(c));
  ComplexPoly clean(n);
  for (const auto& [e, c] : p.terms())
    if (std::abs(c) > rel_tol * scale) clean.add_term(e, c);
  const auto& [lead_e, lead_c] = clean.leading();
  if (!detail::divides_exponent(lead_e, static_cast<int>(k)))
    throw Error(ErrorCode::RootExtractionFailed, "leading exponent is not divisible by the root order");
  Exponent e0(n);
  for (std::size_t i = 0; i < n; ++i) e0[i] = lead_e[i] / static_cast<int>(k);
  const std::complex<double> c0 = std::pow(lead_c, 1.0 / k);
  ComplexPoly f(n);
  f.add_term(e0, c0);
  const std::complex<double> denom = static_cast<double>(k) * std::pow(c0, static_cast<double>(k - 1));
  std::vector<int> cap(n);
  for (std::size_t i = 0; i < n; ++i) cap[i] = clean.degree_in(i) / static_cast<int>(k);
  for (int iter = 0; iter < 100000; ++iter) {
    ComplexPoly rem(n);
    const ComplexPoly diff = clean - f.pow(k);
    for (const auto& [e, c] : diff.terms())
      if (std::abs(c) > rel_tol * scale) rem.add_term(e, c);
    if (rem.is_zero()) return f;
    const auto& [re, rc] = rem.leading();
    Exponent t(n);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = re[i] - (static_cast<int>(k) - 1) * e0[i];
      if (t[i] < 0 || t[i] > cap[i]) throw Error(ErrorCode::RootExtractionFailed, "floating root residual outside support");
    }
    if (!(t < e0)) throw Error(ErrorCode::RootExtractionFailed, "floating root residual leads the root");
    f.add_term(t, rc / denom);
  }
  throw Error(ErrorCode::RootExtractionFailed, "floating root did not terminate");
}

// ---------------------------------------------------------------------------
// Tensor-grid Newton interpolation on integer nodes 0..D_k per variable.

/// Coefficients of the polynomial taking `values` on the grid, where `values`
/// is indexed with the first variable varying slowest.
template <class T>
Polynomial<T> interpolate_grid(std::vector<T> values, const std::vector<int>& degrees) {
  const std::size_t n = degrees.size();
  std::vector<std::size_t> extent(n), stride(n);
  std::size_t total = 1;
  for (std::size_t k = n; k-- > 0;) {
    extent[k] = static_cast<std::size_t>(degrees[k]) + 1;
    stride[k] = total;
    total *= extent[k];
  }
  if (values.size() != total) throw Error(ErrorCode::InvalidInput, "grid size mismatch");

  // along each axis: divided differences, then Newton basis to monomials
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t len = extent[k];
    std::vector<T> line(len);
    for (std::size_t base = 0; base < total; ++base) {
      if ((base / stride[k]) % len != 0) continue;
      for (std::size_t i = 0; i < len; ++i) line[i] = values[base + i * stride[k]];
      for (std::size_t level = 1; level < len; ++level)
        for (std::size_t i = len - 1; i >= level; --i) {
          line[i] = (line[i] - line[i - 1]) * (T(1) / T(static_cast<int>(level)));
          if (i == level) break;
        }
      // Horner in the Newton basis with nodes 0, 1, ..., len - 2
      std::vector<T> mono(len, T(0));
      mono[0] = line[len - 1];
      for (std::size_t j = len - 1; j-- > 0;) {
        // mono <- mono * (x - j) + line[j]
        T node(static_cast<int>(j));
        for (std::size_t i = len - 1; i > 0; --i) mono[i] = mono[i - 1] - node * mono[i];
        mono[0] = line[j] - node * mono[0];
      }
      for (std::size_t i = 0; i < len; ++i) values[base + i * stride[k]] = mono[i];
    }
  }

  Polynomial<T> out(n);
  Exponent e(n);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (std::size_t k = 0; k < n; ++k) {
      e[k] = static_cast<int>(rest / stride[k]);
      rest %= stride[k];
    }
    out.add_term(e, values[idx]);
  }
  return out;
}

/// Visit every grid node of 0..D_k in the order expected by interpolate_grid.
inline void for_each_grid_node(const std::vector<int>& degrees, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> node(degrees.size(), 0);
  while (true) {
    visit(node);
    std::size_t k = degrees.size();
    while (k > 0) {
      --k;
      if (node[k] < degrees[k]) {
        ++node[k];
        break;
      }
      node[k] = 0;
      if (k == 0) return;
    }
    if (degrees.empty()) return;
  }
}

// ---------------------------------------------------------------------------
// Dense univariate polynomials over a field, coefficients low to high.

template <class T>
using UPoly = std::vector<T>;

namespace upoly {

template <class T>
void trim(UPoly<T>& p) {
  while (!p.empty() && is_zero(p.back())) p.pop_back();
}

template <class T>
int degree(const UPoly<T>& p) {
  return static_cast<int>(p.size()) - 1;
}

template <class T>
UPoly<T> derivative(const UPoly<T>& p) {
  UPoly<T> d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * T(static_cast<int>(i)));
  trim(d);
  return d;
}

/// Remainder of a by b (b nonzero).
template <class T>
UPoly<T> remainder(UPoly<T> a, const UPoly<T>& b, UPoly<T>* quotient = nullptr) {
  trim(a);
  const int db = degree(b);
  if (quotient) quotient->assign(a.size() > b.size() ? a.size() - b.size() + 1 : 1, T(0));
  const T inv = T(1) / b.back();
  while (degree(a) >= db && !a.empty()) {
    const int shift = degree(a) - db;
    const T f = a.back() * inv;
    if (quotient) (*quotient)[static_cast<std::size_t>(shift)] = f;
    for (int i = 0; i <= db; ++i) a[static_cast<std::size_t>(shift + i)] -= f * b[static_cast<std::size_t>(i)];
    a.pop_back();
    trim(a);
  }
  if (quotient) trim(*quotient);
  return a;
}

template <class T>
UPoly<T> monic(UPoly<T> p) {
  trim(p);
  if (p.empty()) return p;
  const T inv = T(1) / p.back();
  for (auto& c : p) c = c * inv;
  return p;
}

template <class T>
UPoly<T> gcd(UPoly<T> a, UPoly<T> b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    UPoly<T> r = remainder(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

template <class T>
UPoly<T> exact_quotient(const UPoly<T>& a, const UPoly<T>& b) {
  UPoly<T> q;
  UPoly<T> r = remainder(a, b, &q);
  if (!r.empty()) throw Error(ErrorCode::InvalidInput, "polynomial division is not exact");
  return q;
}

/// p / gcd(p, p'), monic.
template <class T>
UPoly<T> squarefree_part(const UPoly<T>& p) {
  UPoly<T> g = gcd(p, derivative(p));
  return monic(exact_quotient(p, g));
}

/// Sylvester-matrix resultant by fraction-free elimination.
template <class T>
T resultant(UPoly<T> f, UPoly<T> g) {
  trim(f);
  trim(g);
  if (f.empty() || g.empty()) return T(0);
  const int m = degree(f), n = degree(g);
  if (m == 0 && n == 0) return T(1);
  const std::size_t size = static_cast<std::size_t>(m + n);
  std::vector<T> s(size * size, T(0));
  for (int r = 0; r < n; ++r)
    for (int i = 0; i <= m; ++i) s[static_cast<std::size_t>(r) * size + static_cast<std::size_t>(r + m - i)] = f[static_cast<std::size_t>(i)];
  for (int r = 0; r < m; ++r)
    for (int i = 0; i <= n; ++i)
      s[static_cast<std::size_t>(n + r) * size + static_cast<std::size_t>(r + n - i)] = g[static_cast<std::size_t>(i)];
  return detail::bareiss_determinant(std::move(s), size);
}

}  // namespace upoly

/// Univariate polynomial in a single variable from coefficients low to high.
template <class T>
Polynomial<T> from_univariate(const UPoly<T>& p) {
  Polynomial<T> out(1);
  for (std::size_t i = 0; i < p.size(); ++i) out.add_term(Exponent{static_cast<int>(i)}, p[i]);
  return out;
}

}  // namespace lissajous
