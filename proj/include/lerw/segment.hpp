#ifndef LERW_SEGMENT_HPP
#define LERW_SEGMENT_HPP

#include <algorithm>
#include <cmath>
#include <complex>

namespace lerw {

using Point = std::complex<double>;

inline double cross(Point a, Point b) { return a.real() * b.imag() - a.imag() * b.real(); }
inline double dot(Point a, Point b) { return a.real() * b.real() + a.imag() * b.imag(); }

/// Sign of the turn a -> b -> c: +1 left, -1 right, 0 collinear.
inline int orientation(Point a, Point b, Point c) {
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

namespace detail {
inline bool on_segment_collinear(Point a, Point b, Point p) {
  return std::min(a.real(), b.real()) <= p.real() && p.real() <= std::max(a.real(), b.real()) &&
         std::min(a.imag(), b.imag()) <= p.imag() && p.imag() <= std::max(a.imag(), b.imag());
}
}  // namespace detail

/// Closed segments [a,b] and [c,d] share at least one point.
inline bool segments_intersect(Point a, Point b, Point c, Point d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && detail::on_segment_collinear(a, b, c)) return true;
  if (o2 == 0 && detail::on_segment_collinear(a, b, d)) return true;
  if (o3 == 0 && detail::on_segment_collinear(c, d, a)) return true;
  if (o4 == 0 && detail::on_segment_collinear(c, d, b)) return true;
  return false;
}

inline double point_segment_distance(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

inline double segment_distance(Point a, Point b, Point c, Point d) {
  if (segments_intersect(a, b, c, d)) return 0.0;
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

}  // namespace lerw

#endif  // LERW_SEGMENT_HPP
