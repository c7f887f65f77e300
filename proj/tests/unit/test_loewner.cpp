#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "lerw/loewner.hpp"

using namespace lerw;

namespace {

// Time for a real point y in (0, 1) to be swallowed by the slit grown from 1:
// integral of dt/dg = (1 - g) / (g (1 + g)) along the real flow g' = g(1+g)/(1-g).
double swallow_time(double y) {
  auto f = [](double g) { return (1.0 - g) / (g * (1.0 + g)); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, y, 1.0, 15, 1e-14);
}

// g_T(z) for the constant driver w by adaptive Runge-Kutta on the Loewner ODE.
Point loewner_flow(Point z, Point w, double T) {
  using State = std::array<double, 2>;
  State s{z.real(), z.imag()};
  auto rhs = [w](const State& x, State& dx, double) {
    const Point g{x[0], x[1]};
    const Point v = g * (w + g) / (w - g);
    dx = {v.real(), v.imag()};
  };
  namespace ode = boost::numeric::odeint;
  ode::integrate_adaptive(ode::make_controlled(1e-14, 1e-14, ode::runge_kutta_dopri5<State>()), rhs, s, 0.0, T,
                          1e-4);
  return {s[0], s[1]};
}

Curve radial_segment(double x, Point dir = {1.0, 0.0}) { return Curve{{dir, x * dir}}; }

}  // namespace

TEST(SlitCapacity, MatchesOdeOracle) {
  for (double x : {0.8, 0.5, 1.0 / 3.0, 0.2}) {
    const double oracle = swallow_time(x);
    EXPECT_NEAR(slit_capacity(x), oracle, 1e-10) << x;
    const double t = extract_driving(radial_segment(x)).horizon();
    EXPECT_NEAR(t, oracle, 1e-6) << x;
  }
}

TEST(SlitCapacity, TipInvertsCapacity) {
  for (double dt : {1e-8, 1e-4, 0.1, 1.0, 3.0}) EXPECT_NEAR(slit_capacity(slit_tip(dt)), dt, 1e-9 * std::max(1.0, dt));
  EXPECT_TRUE(std::isinf(slit_capacity(0.0)));
}

TEST(ElementaryMap, ConstantDriverFlow) {
  const Point w = std::polar(1.0, 0.7);
  for (Point z : {Point{0.1, 0.2}, Point{-0.5, 0.3}, Point{0.0, -0.8}, Point{0.6, -0.1}})
    for (double T : {0.01, 0.2, 1.0}) {
      const Point want = loewner_flow(z, w, T);
      EXPECT_NEAR(std::abs(elementary_forward(z, w, T) - want), 0.0, 1e-8) << z << " T=" << T;
    }
}

TEST(ElementaryMap, FixesOriginWithDerivative) {
  const Point w = std::polar(1.0, -1.2);
  for (double dt : {0.01, 0.3, 2.0}) {
    EXPECT_NEAR(std::abs(elementary_forward({0.0, 0.0}, w, dt)), 0.0, 1e-15);
    const double h = 1e-6;
    const Point d = (elementary_forward({h, 0.0}, w, dt) - elementary_forward({-h, 0.0}, w, dt)) / (2.0 * h);
    EXPECT_NEAR(std::abs(d), std::exp(dt), 1e-6 * std::exp(dt));
    EXPECT_NEAR(std::arg(d), 0.0, 1e-8);
  }
}

TEST(ElementaryMap, TipGoesToDriverAndCircleToCircle) {
  const Point w = std::polar(1.0, 2.0);
  const double dt = 0.4;
  EXPECT_NEAR(std::abs(elementary_inverse(w, w, dt) - slit_tip(dt) * w), 0.0, 1e-12);
  // The tip itself lies on the hull; a point just inside it maps next to w.
  EXPECT_NEAR(std::abs(elementary_forward((slit_tip(dt) - 1e-10) * w, w, dt) - w), 0.0, 1e-3);
  for (double a : {0.0, 1.0, 3.0, 5.0}) {
    const Point z = std::polar(1.0, 2.0 + 0.5 + a);
    EXPECT_NEAR(std::abs(elementary_forward(z, w, dt)), 1.0, 1e-12);
  }
  EXPECT_THROW(elementary_forward(0.9 * w, w, dt), SwallowedPointError);
}

TEST(MapStack, InverseAndDerivative) {
  MapStack s;
  Rng r(2);
  for (int k = 0; k < 50; ++k) s.push(std::polar(1.0, 6.28 * r.uniform()), 0.01 * r.uniform());
  EXPECT_NEAR(s.capacity(), [&] {
    double t = 0;
    for (const auto& x : s.slits()) t += x.dt;
    return t;
  }(), 0.0);
  for (Point h : {Point{0.1, 0.1}, Point{-0.7, 0.2}, Point{0.3, -0.9}}) {
    const Point z = s.apply_inverse(h);
    EXPECT_NEAR(std::abs(s.apply(z) - h), 0.0, 1e-10);
  }
  const double e = 1e-6;
  const Point d = (s.apply({e, 0}) - s.apply({-e, 0})) / (2 * e);
  EXPECT_NEAR(std::abs(d), std::exp(s.capacity()), 1e-5);
}

TEST(Extract, RadialSegmentHasConstantDriver) {
  const Point dir = std::polar(1.0, -2.5);
  const auto ex = extract_driving_detailed(radial_segment(0.5, dir));
  EXPECT_EQ(ex.driving.start_driver, dir);
  for (double a : ex.driving.angles) EXPECT_NEAR(a, 0.0, 1e-9);
  for (std::size_t k = 1; k < ex.driving.size(); ++k) {
    EXPECT_LE(ex.driving.times[k] - ex.driving.times[k - 1], ExtractOptions{}.max_dt * (1 + 1e-12));
    EXPECT_GT(ex.driving.times[k], ex.driving.times[k - 1]);
  }
  ASSERT_EQ(ex.vertex_times.size(), 2u);
  EXPECT_FALSE(ex.truncated);
}

TEST(Extract, RotationEquivariance) {
  // Steps below the caps, so both extractions take identical sub-steps.
  const auto s = sample_sle(2.0, 0.3, 1e-4, 5);
  Curve rotated = s.trace;
  const Point rot = std::polar(1.0, 1.1);
  for (auto& p : rotated.points) p *= rot;
  const auto a = extract_driving(s.trace);
  const auto b = extract_driving(rotated);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_NEAR(std::abs(b.start_driver - a.start_driver * rot), 0.0, 1e-12);
  for (std::size_t k = 0; k < a.size(); ++k) {
    ASSERT_NEAR(a.times[k], b.times[k], 1e-9);
    ASSERT_NEAR(a.angles[k], b.angles[k], 1e-8);
  }
}

TEST(Extract, StepCapsHold) {
  const auto s = sample_sle(2.0, 0.5, 2e-3, 9);
  ExtractOptions opt;
  const auto d = extract_driving(s.trace, opt);
  for (std::size_t k = 1; k < d.size(); ++k) {
    ASSERT_LE(d.times[k] - d.times[k - 1], opt.max_dt * (1 + 1e-9));
    ASSERT_LE(std::abs(d.angles[k] - d.angles[k - 1]), opt.max_dtheta * (1 + 1e-9));
  }
}

TEST(Extract, ExactTraceRecoveredWithoutSubdivision) {
  // Sub-steps below the caps: every trace point is the tip of a radial slit in
  // the mapped plane, so the zipper reproduces the driver.
  const auto s = sample_sle(2.0, 0.2, 1e-4, 3);
  const auto d = extract_driving(s.trace);
  ASSERT_EQ(d.size(), s.driving.size());
  for (std::size_t k = 0; k < d.size(); ++k) {
    ASSERT_NEAR(d.times[k], s.driving.times[k], 1e-10);
    ASSERT_NEAR(d.angles[k], s.driving.angles[k], 1e-9);
  }
}

TEST(Extract, MaxCapacityTruncates) {
  ExtractOptions opt;
  opt.max_capacity = 0.1;
  const auto ex = extract_driving_detailed(radial_segment(0.2), opt);
  EXPECT_TRUE(ex.truncated);
  EXPECT_GE(ex.driving.horizon(), 0.1);
  EXPECT_LT(ex.driving.horizon(), 0.1 + opt.max_dt + 1e-12);
}

TEST(Extract, Errors) {
  EXPECT_THROW(extract_driving(Curve{}), std::invalid_argument);
  EXPECT_THROW(extract_driving(Curve{{{0.5, 0.0}, {0.2, 0.0}}}), CurveError);
  try {
    // Goes in, then back along itself.
    extract_driving(Curve{{{1.0, 0.0}, {0.5, 0.0}, {0.8, 0.0}}});
    FAIL();
  } catch (const CurveError& e) {
    EXPECT_EQ(e.index(), 2u);
  }
  ExtractOptions loose;
  loose.max_dt = 1e9;
  loose.max_dtheta = 10.0;
  loose.max_capacity = 1e9;
  EXPECT_THROW(extract_driving(Curve{{{1.0, 0.0}, {0.5, 0.0}, {0.0, 0.0}}}, loose), CurveError);
}

TEST(CapacityOfPrefix, MonotoneAndClosedForm) {
  Curve c;
  for (int k = 0; k <= 10; ++k) c.points.push_back({1.0 - 0.08 * k, 0.0});
  double prev = -1.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double t = capacity_of_prefix(c, k);
    EXPECT_GT(t, prev);
    EXPECT_NEAR(t, k == 0 ? 0.0 : slit_capacity(c.points[k].real()), 1e-9);
    prev = t;
  }
  EXPECT_THROW(capacity_of_prefix(c, 11), std::out_of_range);
}

TEST(Sle, ZeroKappaIsRadialSegment) {
  const auto s = sample_sle(0.0, 1.0, 1e-3, 7);
  const Point dir = s.driving.start_driver;
  for (const Point p : s.trace.points) EXPECT_NEAR(std::arg(p * std::conj(dir)), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(s.trace.points.back()), slit_tip(1.0), 1e-9);
}

TEST(Sle, DriverLaw) {
  // Increments of theta are N(0, kappa dt); check the pooled variance.
  const double kappa = 3.0, dt = 0.01;
  double ss = 0.0;
  std::size_t n = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto d = sample_radial_driver(kappa, 1.0, dt, seed);
    ASSERT_EQ(d.size(), 101u);
    for (std::size_t k = 1; k < d.size(); ++k, ++n) {
      const double inc = d.angles[k] - d.angles[k - 1];
      ss += inc * inc;
    }
  }
  const double var = ss / double(n);
  EXPECT_NEAR(var, kappa * dt, 4.0 * kappa * dt * std::sqrt(2.0 / double(n)));
  EXPECT_THROW(sample_radial_driver(-1.0, 1.0, dt, 0), std::invalid_argument);
  EXPECT_THROW(sample_radial_driver(1.0, 1.0, 0.0, 0), std::invalid_argument);
}

TEST(Sle, Deterministic) {
  const auto a = sample_sle(2.0, 0.2, 1e-3, 11);
  const auto b = sample_sle(2.0, 0.2, 1e-3, 11);
  EXPECT_EQ(a.trace.points, b.trace.points);
  EXPECT_EQ(a.driving.angles, b.driving.angles);
}
