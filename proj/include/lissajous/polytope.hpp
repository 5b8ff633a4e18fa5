#pragma once

// Exact convex hulls and normalized volumes of P_A = conv{+-a_1, ..., +-a_n}.
//
// The hull is built by a placing triangulation: points are inserted one at a
// time and every boundary simplex strictly visible from the new point is coned
// to it. The simplices of the triangulation give d! vol exactly as a sum of
// |det|, and the boundary simplices give the facet hyperplanes used to extract
// the irredundant vertex set.

#include <map>
#include <set>
#include <vector>

#include "lissajous/exactmat.hpp"

namespace lissajous {

struct Polytope {
  std::size_t ambient_dim = 0;
  std::vector<std::vector<Rational>> vertices;
};

namespace detail {

using IntPoint = std::vector<BigInt>;

class PlacingTriangulation {
 public:
  PlacingTriangulation(std::vector<IntPoint> points, std::size_t dim) : pts_(std::move(points)), d_(dim) {
    std::sort(pts_.begin(), pts_.end());
    pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
    build();
  }

  const BigInt& normalized_volume() const { return volume_; }

  /// Indices into points() of the vertices of the hull, sorted.
  std::vector<std::size_t> vertex_indices() const {
    // facet hyperplanes as primitive outward normals with offsets
    std::map<std::pair<IntPoint, BigInt>, int> planes;
    std::vector<std::vector<const IntPoint*>> normals_at(pts_.size());
    std::set<std::pair<IntPoint, BigInt>> seen;
    for (const Facet& f : boundary_) {
      IntPoint nrm = facet_normal(f);
      if (f.inside_sign > 0)
        for (auto& x : nrm) x = -x;
      normalize_primitive_signless(nrm);
      BigInt off = dot(nrm, pts_[f.verts[0]]);
      seen.insert({nrm, off});
    }
    std::vector<std::size_t> verts;
    for (std::size_t p = 0; p < pts_.size(); ++p) {
      std::vector<BigInt> rows;
      std::size_t count = 0;
      for (const auto& [nrm, off] : seen)
        if (dot(nrm, pts_[p]) == off) {
          rows.insert(rows.end(), nrm.begin(), nrm.end());
          ++count;
        }
      if (count >= d_ && bareiss_rank(rows, count, d_) == d_) verts.push_back(p);
    }
    return verts;
  }

  const std::vector<IntPoint>& points() const { return pts_; }

 private:
  struct Facet {
    std::vector<std::size_t> verts;  // sorted, size d
    int inside_sign = 0;             // orientation sign of the interior reference point
  };

  static BigInt dot(const IntPoint& a, const IntPoint& b) {
    BigInt s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  }

  static void normalize_primitive_signless(IntPoint& v) {
    BigInt g = content(v);
    if (g == 0) return;
    for (auto& x : v) x /= g;
  }

  static int sign(const BigInt& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

  // sign of det[f_1 - q, ..., f_d - q] where q = query / scale
  int orientation(const std::vector<std::size_t>& verts, const IntPoint& query, const BigInt& scale) const {
    std::vector<BigInt> m(d_ * d_);
    for (std::size_t r = 0; r < d_; ++r)
      for (std::size_t c = 0; c < d_; ++c) m[r * d_ + c] = scale * pts_[verts[r]][c] - query[c];
    return sign(bareiss_determinant(std::move(m), d_));
  }

  BigInt simplex_volume(const std::vector<std::size_t>& verts, std::size_t apex) const {
    std::vector<BigInt> m(d_ * d_);
    for (std::size_t r = 0; r < d_; ++r)
      for (std::size_t c = 0; c < d_; ++c) m[r * d_ + c] = pts_[verts[r]][c] - pts_[apex][c];
    return boost::multiprecision::abs(bareiss_determinant(std::move(m), d_));
  }

  IntPoint facet_normal(const Facet& f) const {
    // generalized cross product of the d-1 edge vectors
    std::vector<IntPoint> edges;
    for (std::size_t r = 1; r < d_; ++r) {
      IntPoint e(d_);
      for (std::size_t c = 0; c < d_; ++c) e[c] = pts_[f.verts[r]][c] - pts_[f.verts[0]][c];
      edges.push_back(std::move(e));
    }
    IntPoint nrm(d_);
    for (std::size_t k = 0; k < d_; ++k) {
      std::vector<BigInt> minor;
      for (std::size_t r = 0; r + 1 < d_; ++r)
        for (std::size_t c = 0; c < d_; ++c)
          if (c != k) minor.push_back(edges[r][c]);
      BigInt det = bareiss_determinant(std::move(minor), d_ - 1);
      nrm[k] = (k % 2 == 0) ? det : BigInt(-det);
    }
    return nrm;
  }

  void build() {
    if (d_ == 0 || pts_.empty()) throw Error(ErrorCode::NotFullDimensional, "empty point set");
    // affinely independent starting simplex
    std::vector<std::size_t> simplex{0};
    std::vector<BigInt> diffs;
    for (std::size_t p = 1; p < pts_.size() && simplex.size() < d_ + 1; ++p) {
      std::vector<BigInt> trial = diffs;
      for (std::size_t c = 0; c < d_; ++c) trial.push_back(pts_[p][c] - pts_[0][c]);
      if (bareiss_rank(trial, simplex.size(), d_) == simplex.size()) {
        diffs = std::move(trial);
        simplex.push_back(p);
      }
    }
    if (simplex.size() < d_ + 1) throw Error(ErrorCode::NotFullDimensional, "points span a proper affine subspace");

    scale_ = BigInt(d_ + 1);
    interior_.assign(d_, BigInt(0));
    for (std::size_t v : simplex)
      for (std::size_t c = 0; c < d_; ++c) interior_[c] += pts_[v][c];

    volume_ = 0;
    {
      std::vector<std::size_t> base(simplex.begin() + 1, simplex.end());
      volume_ += simplex_volume(base, simplex[0]);
    }
    for (std::size_t drop = 0; drop <= d_; ++drop) {
      Facet f;
      for (std::size_t k = 0; k <= d_; ++k)
        if (k != drop) f.verts.push_back(simplex[k]);
      std::sort(f.verts.begin(), f.verts.end());
      f.inside_sign = orientation(f.verts, interior_, scale_);
      boundary_.push_back(std::move(f));
    }

    std::set<std::size_t> placed(simplex.begin(), simplex.end());
    IntPoint scaled(d_);
    for (std::size_t p = 0; p < pts_.size(); ++p) {
      if (placed.count(p)) continue;
      for (std::size_t c = 0; c < d_; ++c) scaled[c] = pts_[p][c];
      std::vector<bool> visible(boundary_.size(), false);
      bool any = false;
      for (std::size_t f = 0; f < boundary_.size(); ++f) {
        int s = orientation(boundary_[f].verts, scaled, BigInt(1));
        if (s != 0 && s != boundary_[f].inside_sign) {
          visible[f] = true;
          any = true;
        }
      }
      if (!any) continue;
      std::map<std::vector<std::size_t>, int> ridge_count;
      std::vector<Facet> kept;
      for (std::size_t f = 0; f < boundary_.size(); ++f) {
        if (!visible[f]) {
          kept.push_back(std::move(boundary_[f]));
          continue;
        }
        volume_ += simplex_volume(boundary_[f].verts, p);
        for (std::size_t drop = 0; drop < d_; ++drop) {
          std::vector<std::size_t> ridge;
          for (std::size_t k = 0; k < d_; ++k)
            if (k != drop) ridge.push_back(boundary_[f].verts[k]);
          ++ridge_count[ridge];
        }
      }
      for (const auto& [ridge, count] : ridge_count) {
        if (count != 1) continue;
        Facet nf;
        nf.verts = ridge;
        nf.verts.push_back(p);
        std::sort(nf.verts.begin(), nf.verts.end());
        nf.inside_sign = orientation(nf.verts, interior_, scale_);
        kept.push_back(std::move(nf));
      }
      boundary_ = std::move(kept);
      placed.insert(p);
    }
  }

  std::vector<IntPoint> pts_;
  std::size_t d_;
  IntPoint interior_;
  BigInt scale_;
  BigInt volume_;
  std::vector<Facet> boundary_;
};

inline BigInt lcm(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::abs(a / boost::multiprecision::gcd(a, b) * b);
}

}  // namespace detail

/// Irredundant vertices of conv{+-a_j}.
inline Polytope symmetric_hull(const IntMatrix& a) {
  const std::size_t d = a.rows();
  if (rank_rational(a) < d) throw Error(ErrorCode::NotFullDimensional, "rank(A) < d");
  std::vector<detail::IntPoint> pts;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    detail::IntPoint p = a.column(j), q(d);
    for (std::size_t i = 0; i < d; ++i) q[i] = -p[i];
    pts.push_back(std::move(p));
    pts.push_back(std::move(q));
  }
  detail::PlacingTriangulation tri(std::move(pts), d);
  Polytope out;
  out.ambient_dim = d;
  for (std::size_t v : tri.vertex_indices()) {
    std::vector<Rational> q;
    for (const auto& x : tri.points()[v]) q.emplace_back(x);
    out.vertices.push_back(std::move(q));
  }
  return out;
}

/// d! vol(P), exact. Integral for lattice polytopes.
inline Rational normalized_volume(const Polytope& p) {
  const std::size_t d = p.ambient_dim;
  BigInt den = 1;
  for (const auto& v : p.vertices)
    for (const auto& x : v) den = detail::lcm(den, boost::multiprecision::denominator(x));
  std::vector<detail::IntPoint> pts;
  for (const auto& v : p.vertices) {
    detail::IntPoint q;
    for (const auto& x : v) q.push_back(boost::multiprecision::numerator(x) * (den / boost::multiprecision::denominator(x)));
    pts.push_back(std::move(q));
  }
  detail::PlacingTriangulation tri(std::move(pts), d);
  return Rational(tri.normalized_volume()) / Rational(boost::multiprecision::pow(den, static_cast<unsigned>(d)));
}

/// d! vol(P_A) straight from the generators (no vertex extraction).
inline BigInt normalized_volume_of(const IntMatrix& a) {
  const std::size_t d = a.rows();
  if (rank_rational(a) < d) throw Error(ErrorCode::NotFullDimensional, "rank(A) < d");
  std::vector<detail::IntPoint> pts;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    detail::IntPoint p = a.column(j), q(d);
    for (std::size_t i = 0; i < d; ++i) q[i] = -p[i];
    pts.push_back(std::move(p));
    pts.push_back(std::move(q));
  }
  return detail::PlacingTriangulation(std::move(pts), d).normalized_volume();
}

/// Upper bound d * d! vol(P_A) on the degree of the discriminant hypersurface.
inline BigInt discriminant_degree_bound(const IntMatrix& a) {
  return BigInt(a.rows()) * normalized_volume_of(a);
}

}  // namespace lissajous
