#ifndef LERW_LOEWNER_HPP
#define LERW_LOEWNER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "lerw/erasure.hpp"
#include "lerw/rng.hpp"

namespace lerw {

/// A point met the hull of the maps already applied (curve not simple, or
/// evaluation on a slit).
class SwallowedPointError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Sampled driving function: W(t_k) = W(0) exp(i theta_k), theta_0 = 0.
struct DrivingFunction {
  std::vector<double> times{0.0};
  std::vector<double> angles{0.0};
  Point start_driver{1.0, 0.0};

  std::size_t size() const { return times.size(); }
  double horizon() const { return times.back(); }

  /// theta(t) by linear interpolation between samples; t is clamped to the
  /// sampled range.
  double angle_at(double t) const {
    if (t <= times.front()) return angles.front();
    if (t >= times.back()) return angles.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const auto k = static_cast<std::size_t>(it - times.begin());
    const double f = (t - times[k - 1]) / (times[k] - times[k - 1]);
    return angles[k - 1] + f * (angles[k] - angles[k - 1]);
  }

  Point driver(std::size_t k) const { return start_driver * std::polar(1.0, angles[k]); }
};

namespace detail {

/// Principal square root in real arithmetic; the sign of im selects the side
/// of the cut, as for std::sqrt.
inline Point csqrt(double re, double im) {
  const double r = std::sqrt(re * re + im * im);
  const double t = std::sqrt(0.5 * (std::abs(re) + r));
  if (t == 0.0) return {0.0, im};
  if (re >= 0.0) return {t, im / (2.0 * t)};
  return {std::abs(im) / (2.0 * t), std::copysign(t, im)};
}

/// Root of q h^2 + (2q - 1) h + q = 0 of smaller modulus (the roots are
/// reciprocal). Ties, which only occur on the unit circle, go to the root
/// closest to `near`.
inline Point small_root(Point q, Point near) {
  const double qr = q.real();
  const double qi = q.imag();
  if (qr == 0.0 && qi == 0.0) return {0.0, 0.0};
  const double br = 1.0 - 2.0 * qr;
  const double bi = -2.0 * qi;
  const Point s = csqrt(1.0 - 4.0 * qr, -4.0 * qi);
  // |b + s|^2 - |b - s|^2 = 4 Re(b conj s); the root is 2q / (b +- s).
  const double bias = br * s.real() + bi * s.imag();
  auto root = [&](double dr, double di) {
    const double n = dr * dr + di * di;
    return Point{2.0 * (qr * dr + qi * di) / n, 2.0 * (qi * dr - qr * di) / n};
  };
  const double scale = br * br + bi * bi + std::norm(s);
  if (std::abs(bias) <= 0.5e-14 * scale) {
    const Point r1 = root(br + s.real(), bi + s.imag());
    const Point r2 = root(br - s.real(), bi - s.imag());
    return std::norm(r1 - near) <= std::norm(r2 - near) ? r1 : r2;
  }
  return bias >= 0.0 ? root(br + s.real(), bi + s.imag()) : root(br - s.real(), bi - s.imag());
}

/// One elementary slit map: w h, with h the small root for
/// q = growth zeta / (1 + zeta)^2, zeta = z conj(w). Real arithmetic keeps
/// the zipper's inner loop free of checked complex division.
inline Point slit_step(Point z, Point w, double growth) {
  const double zr = z.real() * w.real() + z.imag() * w.imag();
  const double zi = z.imag() * w.real() - z.real() * w.imag();
  const double opr = 1.0 + zr;
  const double n2 = opr * opr + zi * zi;
  if (n2 == 0.0) return -w;
  // zeta / (1 + zeta)^2 = zeta conj(1 + zeta)^2 / |1 + zeta|^4
  const double cr = opr * opr - zi * zi;
  const double ci = -2.0 * opr * zi;
  const double f = growth / (n2 * n2);
  const Point q{f * (zr * cr - zi * ci), f * (zr * ci + zi * cr)};
  const Point h = small_root(q, {zr, zi});
  if (z.real() * z.real() + z.imag() * z.imag() < 1.0 - 1e-14 && std::norm(h) >= 1.0 - 1e-14)
    throw SwallowedPointError("point swallowed by the slit");
  return {w.real() * h.real() - w.imag() * h.imag(), w.real() * h.imag() + w.imag() * h.real()};
}

}  // namespace detail

/// Time-dt flow of the radial Loewner equation with constant driver w:
/// h = g/w solves h/(1+h)^2 = e^dt zeta/(1+zeta)^2, zeta = z/w, on the branch
/// inside the disc. The hull is the radial slit from w to x w with
/// (1+x)^2 = 4 e^dt x.
inline Point elementary_forward(Point z, Point w, double dt) { return detail::slit_step(z, w, std::exp(dt)); }

/// Inverse of elementary_forward; maps the closed disc onto the closed disc
/// minus the slit, sending w to the slit tip.
inline Point elementary_inverse(Point h, Point w, double dt) {
  const Point eta = h * std::conj(w);
  const Point one_plus = 1.0 + eta;
  if (one_plus == Point{0.0, 0.0}) return -w;
  const Point p = std::exp(-dt) * eta / (one_plus * one_plus);
  return w * detail::small_root(p, eta);
}

/// Tip modulus x of the radial slit of capacity dt: (1+x)^2 = 4 e^dt x.
inline double slit_tip(double dt) {
  // Smaller root of x^2 + (2 - 4e^dt) x + 1 = 0.
  const double b = 2.0 * std::exp(dt) - 1.0;
  return 1.0 / (b + std::sqrt(b * b - 1.0));
}

/// Capacity of the radial slit reaching modulus x: log((1+x)^2 / (4x)).
inline double slit_capacity(double x) {
  if (!(x > 0.0)) return std::numeric_limits<double>::infinity();
  return std::log1p((1.0 - x) * (1.0 - x) / (4.0 * x));
}

/// Composition g = g_n o ... o g_1 of elementary slit maps.
class MapStack {
 public:
  struct Slit {
    Point driver;
    double dt;
    double growth;  // e^dt
  };

  void push(Point driver, double dt) { slits_.push_back({driver, dt, std::exp(dt)}); }

  std::size_t size() const { return slits_.size(); }
  const std::vector<Slit>& slits() const { return slits_; }

  double capacity() const {
    double t = 0.0;
    for (const auto& s : slits_) t += s.dt;
    return t;
  }

  /// g(z); throws SwallowedPointError if z meets the hull.
  Point apply(Point z) const {
    for (const auto& s : slits_) z = detail::slit_step(z, s.driver, s.growth);
    return z;
  }

  /// g^{-1}(h).
  Point apply_inverse(Point h) const {
    for (auto it = slits_.rbegin(); it != slits_.rend(); ++it) h = elementary_inverse(h, it->driver, it->dt);
    return h;
  }

 private:
  std::vector<Slit> slits_;
};

struct ExtractOptions {
  /// Largest driver increment per elementary map (radians).
  double max_dtheta = 0.1;
  /// Largest capacity increment per elementary map.
  double max_dt = 1e-3;
  /// Extraction stops once this capacity is reached.
  double max_capacity = 3.0;
  /// Allowed distance of the first point from the unit circle.
  double boundary_tol = 1e-9;
  /// Smallest sub-step, as a fraction of one polyline segment.
  double min_fraction = 1e-12;
};

struct Extraction {
  DrivingFunction driving;
  /// Capacity at which each curve vertex was reached (size = vertices consumed).
  std::vector<double> vertex_times;
  /// True when extraction stopped at max_capacity before the end of the curve.
  bool truncated = false;
};

/// Raised when a curve cannot be zipped: it leaves the disc, is not simple,
/// or does not start on the circle.
class CurveError : public std::runtime_error {
 public:
  CurveError(const std::string& what, std::size_t index)
      : std::runtime_error(what + " (curve index " + std::to_string(index) + ")"), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// Discrete radial zipper. Each accepted sub-step maps the next curve point
/// z through the current stack, then pushes the radial slit with driver
/// z/|z| whose tip has modulus |z|. Segments are subdivided until every
/// sub-step satisfies the capacity and driver-increment caps.
inline Extraction extract_driving_detailed(const Curve& c, const ExtractOptions& opt = {}) {
  if (c.empty()) throw std::invalid_argument("extract_driving: empty curve");
  const Point first = c.points.front();
  if (std::abs(std::abs(first) - 1.0) > opt.boundary_tol)
    throw CurveError("curve must start on the unit circle", 0);

  Extraction out;
  auto& drv = out.driving;
  drv.start_driver = first / std::abs(first);
  out.vertex_times.push_back(0.0);

  MapStack stack;
  Point prev_driver = drv.start_driver;
  double t = 0.0;
  double theta = 0.0;
  double fraction = 1.0;

  for (std::size_t k = 0; k + 1 < c.size(); ++k) {
    const Point a = k == 0 ? drv.start_driver : c.points[k];
    const Point b = c.points[k + 1];
    double p = 0.0;
    while (p < 1.0) {
      const double q = std::min(1.0, p + fraction);
      const Point target = q == 1.0 ? b : a + q * (b - a);
      Point z;
      try {
        z = stack.apply(target);
      } catch (const SwallowedPointError&) {
        throw CurveError("point swallowed: curve is not simple", k + 1);
      }
      const double r = std::abs(z);
      if (!(r < 1.0)) throw CurveError("curve point maps outside the unit disc", k + 1);
      const double dt = slit_capacity(r);
      const Point w = z / r;
      const double dtheta = std::arg(w * std::conj(prev_driver));
      // Small-slit capacity grows like length^2 and the driver increment like
      // length; the ratio predicts the largest admissible sub-step.
      const double ratio = std::min(dt > 0.0 ? std::sqrt(opt.max_dt / dt) : 4.0,
                                    dtheta != 0.0 ? opt.max_dtheta / std::abs(dtheta) : 4.0);
      if ((dt > opt.max_dt || std::abs(dtheta) > opt.max_dtheta) && q - p > opt.min_fraction) {
        fraction = (q - p) * std::clamp(0.9 * ratio, 0.1, 0.5);
        continue;
      }
      if (!std::isfinite(dt)) throw CurveError("curve passes through the origin", k + 1);
      stack.push(w, dt);
      t += dt;
      theta += dtheta;
      drv.times.push_back(t);
      drv.angles.push_back(theta);
      prev_driver = w;
      fraction = std::min(1.0, (q - p) * std::clamp(0.9 * ratio, 1.0, 4.0));
      p = q;
      if (t >= opt.max_capacity) break;
    }
    if (p >= 1.0) out.vertex_times.push_back(t);
    if (t >= opt.max_capacity) {
      out.truncated = p < 1.0 || k + 2 < c.size();
      break;
    }
  }
  return out;
}

inline DrivingFunction extract_driving(const Curve& c, const ExtractOptions& opt = {}) {
  return extract_driving_detailed(c, opt).driving;
}

/// Capacity from 0 of the prefix c[0..k].
inline double capacity_of_prefix(const Curve& c, std::size_t k, const ExtractOptions& opt = {}) {
  if (k >= c.size()) throw std::out_of_range("capacity_of_prefix: index beyond curve");
  Curve prefix;
  prefix.points.assign(c.points.begin(), c.points.begin() + static_cast<std::ptrdiff_t>(k) + 1);
  return extract_driving(prefix, opt).horizon();
}

/// Driver of radial SLE_kappa on the grid t_k = k dt, k <= round(T/dt):
/// theta is a Brownian motion with variance kappa t, W(0) uniform on the circle.
inline DrivingFunction sample_radial_driver(double kappa, double horizon, double dt, std::uint64_t seed) {
  if (!(kappa >= 0.0)) throw std::invalid_argument("sample_sle: kappa must be nonnegative");
  if (!(dt > 0.0)) throw std::invalid_argument("sample_sle: dt must be positive");
  if (!(horizon >= dt)) throw std::invalid_argument("sample_sle: horizon must be at least dt");
  const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
  Rng rng(seed, "sle-driver");
  DrivingFunction drv;
  drv.start_driver = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
  drv.times.reserve(steps + 1);
  drv.angles.reserve(steps + 1);
  const double sd = std::sqrt(kappa * dt);
  double theta = 0.0;
  for (std::size_t k = 1; k <= steps; ++k) {
    theta += sd * rng.normal();
    drv.times.push_back(static_cast<double>(k) * dt);
    drv.angles.push_back(theta);
  }
  return drv;
}

/// Trace generated by the piecewise-constant driver that equals W(t_k) on
/// (t_{k-1}, t_k]: gamma(t_k) = g_1^{-1} o ... o g_k^{-1}(W(t_k)).
inline Curve trace_from_driver(const DrivingFunction& drv) {
  MapStack stack;
  Curve c;
  c.points.reserve(drv.size());
  c.points.push_back(drv.start_driver);
  for (std::size_t k = 1; k < drv.size(); ++k) {
    const Point w = drv.driver(k);
    stack.push(w, drv.times[k] - drv.times[k - 1]);
    c.points.push_back(stack.apply_inverse(w));
  }
  return c;
}

struct SleSample {
  Curve trace;
  DrivingFunction driving;
};

inline SleSample sample_sle(double kappa, double horizon, double dt, std::uint64_t seed) {
  SleSample s;
  s.driving = sample_radial_driver(kappa, horizon, dt, seed);
  s.trace = trace_from_driver(s.driving);
  return s;
}

}  // namespace lerw

#endif  // LERW_LOEWNER_HPP
