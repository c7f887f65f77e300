#ifndef LERW_GEOMETRY_HPP
#define LERW_GEOMETRY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lerw/erasure.hpp"
#include "lerw/segment.hpp"

namespace lerw {

/// Open 4r by (4r + |z2 - z1|) rectangle around the segment [z1, z2].
class Rect {
 public:
  Rect(Point z1, Point z2, double r) : z1_(z1), r_(r) {
    if (z1 == z2) throw std::invalid_argument("Rect: z1 and z2 must differ");
    if (!(r > 0.0)) throw std::invalid_argument("Rect: r must be positive");
    length_ = std::abs(z2 - z1);
    u_ = (z2 - z1) / length_;
  }

  /// Strictly inside, by more than `tol` in both local coordinates.
  bool contains(Point p, double tol = 1e-12) const {
    const Point local = (p - z1_) * std::conj(u_);
    return local.real() > -2.0 * r_ + tol && local.real() < length_ + 2.0 * r_ - tol &&
           std::abs(local.imag()) < 2.0 * r_ - tol;
  }

  std::array<Point, 4> corners() const {
    const Point v = u_ * Point(0.0, 1.0);
    const Point z2 = z1_ + length_ * u_;
    return {z1_ - 2.0 * r_ * (u_ + v), z1_ - 2.0 * r_ * (u_ - v), z2 + 2.0 * r_ * (u_ + v),
            z2 + 2.0 * r_ * (u_ - v)};
  }

 private:
  Point z1_;
  Point u_;
  double length_;
  double r_;
};

/// First parameter t >= 0 with |c(t) - z| < r on the interpolated polyline,
/// i.e. the infimum of the entrance times into the open disc.
inline std::optional<double> first_disc_hit(const Curve& c, Point z, double r) {
  if (c.empty()) return std::nullopt;
  const double r2 = r * r;
  if (std::norm(c.points[0] - z) < r2) return 0.0;
  for (std::size_t k = 0; k + 1 < c.size(); ++k) {
    const Point a = c.points[k] - z;
    const Point d = c.points[k + 1] - c.points[k];
    const double qa = std::norm(d);
    if (qa == 0.0) continue;
    const double qb = dot(a, d);
    const double qc = std::norm(a) - r2;
    const double disc = qb * qb - qa * qc;
    if (disc <= 0.0) continue;  // tangent or miss: never strictly inside
    const double sq = std::sqrt(disc);
    const double s0 = (-qb - sq) / qa;
    const double s1 = (-qb + sq) / qa;
    // The open disc is entered on (s0, s1); it meets [0, 1] when s0 < 1 and s1 > 0.
    if (s0 < 1.0 && s1 > 0.0) return static_cast<double>(k) + std::max(0.0, s0);
  }
  return std::nullopt;
}

/// True if the curve crosses the rectangle around [z1, z2]: it reaches the
/// disc around z1 strictly before the disc around z2, and stays in the open
/// rectangle in between.
inline bool crosses_rectangle(const Curve& c, Point z1, Point z2, double r) {
  if (c.empty()) throw std::invalid_argument("crosses_rectangle: empty curve");
  const Rect rect(z1, z2, r);
  const auto t1 = first_disc_hit(c, z1, r);
  const auto t2 = first_disc_hit(c, z2, r);
  if (!t1 || !t2 || !(*t1 < *t2)) return false;
  if (!rect.contains(c.at(*t1)) || !rect.contains(c.at(*t2))) return false;
  const auto k_lo = static_cast<std::size_t>(std::floor(*t1)) + 1;
  const auto k_hi = static_cast<std::size_t>(std::ceil(*t2));
  for (std::size_t k = k_lo; k < k_hi && k < c.size(); ++k)
    if (!rect.contains(c.points[k])) return false;
  return true;
}

/// The five anchor points of the r-encompassing test around z.
inline std::array<Point, 5> encompassing_anchors(Point z, double r) {
  const double q = r / 20.0;
  return {z + Point(-8.0 * q, -4.0 * q), z + Point(4.0 * q, -4.0 * q), z + Point(4.0 * q, 4.0 * q),
          z + Point(-4.0 * q, 4.0 * q), z + Point(-4.0 * q, -8.0 * q)};
}

/// The curve crosses all four rectangles around consecutive anchors, with
/// half-width r/20.
inline bool encompasses(const Curve& c, Point z, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("encompasses: r must be positive");
  const auto zs = encompassing_anchors(z, r);
  for (int i = 0; i < 4; ++i)
    if (!crosses_rectangle(c, zs[i], zs[i + 1], r / 20.0)) return false;
  return true;
}

/// Winding number of the closed polyline (last point joined to the first)
/// around z. Zero if z lies on the polyline.
inline int winding_number(std::span<const Point> pts, Point z) {
  int wn = 0;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = pts[i];
    const Point b = pts[(i + 1) % n];
    if (a.imag() <= z.imag()) {
      if (b.imag() > z.imag() && cross(b - a, z - a) > 0.0) ++wn;
    } else if (b.imag() <= z.imag() && cross(b - a, z - a) < 0.0) {
      --wn;
    }
  }
  return wn;
}

/// Convex hull (counter-clockwise, no collinear points).
inline std::vector<Point> convex_hull(std::vector<Point> pts) {
  auto less = [](Point a, Point b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  };
  std::sort(pts.begin(), pts.end(), less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

/// Euclidean diameter of a point set (hull + rotating calipers).
inline double diameter(std::span<const Point> pts) {
  if (pts.empty()) throw std::invalid_argument("diameter: empty input");
  const auto hull = convex_hull(std::vector<Point>(pts.begin(), pts.end()));
  const std::size_t h = hull.size();
  if (h == 1) return 0.0;
  if (h == 2) return std::abs(hull[1] - hull[0]);
  double best = 0.0;
  std::size_t j = 1;
  for (std::size_t i = 0; i < h; ++i) {
    const Point edge = hull[(i + 1) % h] - hull[i];
    while (std::abs(cross(edge, hull[(j + 1) % h] - hull[i])) > std::abs(cross(edge, hull[j] - hull[i])))
      j = (j + 1) % h;
    // With a parallel opposite edge both of its ends are antipodal.
    const Point next = hull[(j + 1) % h];
    best = std::max({best, std::abs(hull[j] - hull[i]), std::abs(hull[j] - hull[(i + 1) % h]), std::abs(next - hull[i]),
                     std::abs(next - hull[(i + 1) % h])});
  }
  return best;
}

inline double diameter(const Curve& c) { return diameter(std::span<const Point>(c.points)); }

/// Minimum distance between two polylines (a single point is a degenerate
/// polyline).
inline double dist_sets(const Curve& a, const Curve& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("dist_sets: empty input");
  double best = std::numeric_limits<double>::infinity();
  const std::size_t na = a.size() == 1 ? 1 : a.size() - 1;
  const std::size_t nb = b.size() == 1 ? 1 : b.size() - 1;
  for (std::size_t i = 0; i < na; ++i) {
    const Point p0 = a.points[i];
    const Point p1 = a.points[std::min(i + 1, a.size() - 1)];
    for (std::size_t j = 0; j < nb; ++j) {
      const Point q0 = b.points[j];
      const Point q1 = b.points[std::min(j + 1, b.size() - 1)];
      best = std::min(best, segment_distance(p0, p1, q0, q1));
      if (best == 0.0) return 0.0;
    }
  }
  return best;
}

struct QuasiLoop {
  std::size_t s;
  std::size_t t;
};

namespace detail {

/// Range min/max over polyline coordinates in O(1) per query.
class BoxTable {
 public:
  explicit BoxTable(std::span<const Point> pts) {
    const std::size_t n = pts.size();
    std::size_t levels = 1;
    while ((std::size_t{1} << levels) <= n) ++levels;
    lo_.assign(levels, std::vector<Point>(n));
    hi_.assign(levels, std::vector<Point>(n));
    for (std::size_t i = 0; i < n; ++i) lo_[0][i] = hi_[0][i] = pts[i];
    for (std::size_t l = 1; l < levels; ++l) {
      const std::size_t half = std::size_t{1} << (l - 1);
      for (std::size_t i = 0; i + (std::size_t{1} << l) <= n; ++i) {
        lo_[l][i] = min2(lo_[l - 1][i], lo_[l - 1][i + half]);
        hi_[l][i] = max2(hi_[l - 1][i], hi_[l - 1][i + half]);
      }
    }
  }

  /// Bounding box (lower-left, upper-right) of points [s, t].
  std::pair<Point, Point> box(std::size_t s, std::size_t t) const {
    std::size_t l = 0;
    while ((std::size_t{2} << l) <= t - s + 1) ++l;
    const std::size_t j = t + 1 - (std::size_t{1} << l);
    return {min2(lo_[l][s], lo_[l][j]), max2(hi_[l][s], hi_[l][j])};
  }

 private:
  static Point min2(Point a, Point b) {
    return {std::min(a.real(), b.real()), std::min(a.imag(), b.imag())};
  }
  static Point max2(Point a, Point b) {
    return {std::max(a.real(), b.real()), std::max(a.imag(), b.imag())};
  }
  std::vector<std::vector<Point>> lo_;
  std::vector<std::vector<Point>> hi_;
};

}  // namespace detail

/// Lexicographically first vertex pair s < t with |c(s) - c(t)| <= alpha and
/// diam c[s, t] >= beta, or nullopt.
inline std::optional<QuasiLoop> quasi_loop_detect(const Curve& c, double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw std::invalid_argument("quasi_loop_detect: alpha, beta must be positive");
  if (!(alpha < beta)) throw std::invalid_argument("quasi_loop_detect: requires alpha < beta");
  const auto& pts = c.points;
  const std::size_t n = pts.size();
  if (n < 2) return std::nullopt;

  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets;
  auto cell = [alpha](Point p) {
    return std::pair<std::int64_t, std::int64_t>{static_cast<std::int64_t>(std::floor(p.real() / alpha)),
                                                 static_cast<std::int64_t>(std::floor(p.imag() / alpha))};
  };
  auto key = [](std::int64_t i, std::int64_t j) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) | static_cast<std::uint32_t>(j);
  };
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto [a, b] = cell(pts[i]);
    buckets[key(a, b)].push_back(i);  // indices ascend within each bucket
  }

  const detail::BoxTable boxes(pts);
  const double alpha2 = alpha * alpha;
  std::vector<std::uint32_t> candidates;
  for (std::size_t s = 0; s < n; ++s) {
    candidates.clear();
    const auto [a, b] = cell(pts[s]);
    for (std::int64_t da = -1; da <= 1; ++da)
      for (std::int64_t db = -1; db <= 1; ++db) {
        const auto it = buckets.find(key(a + da, b + db));
        if (it == buckets.end()) continue;
        const auto& members = it->second;
        for (auto m = std::upper_bound(members.begin(), members.end(), static_cast<std::uint32_t>(s));
             m != members.end(); ++m)
          if (std::norm(pts[*m] - pts[s]) <= alpha2) candidates.push_back(*m);
      }
    std::sort(candidates.begin(), candidates.end());
    for (std::uint32_t t : candidates) {
      const auto [lo, hi] = boxes.box(s, t);
      const double w = hi.real() - lo.real();
      const double h = hi.imag() - lo.imag();
      if (std::max(w, h) >= beta) return QuasiLoop{s, t};
      if (std::hypot(w, h) < beta) continue;
      if (diameter(std::span<const Point>(pts.data() + s, t - s + 1)) >= beta) return QuasiLoop{s, t};
    }
  }
  return std::nullopt;
}

}  // namespace lerw

#endif  // LERW_GEOMETRY_HPP
